import tempfile
from pathlib import Path
from unittest import TestCase

import numpy as np
import pandas as pd
from numpy.testing import assert_array_equal

from src.srradar.utils import make_rng, read_complex_csv, write_complex_csv


class TestComplexCsv(TestCase):
    def test_exact_round_trip(self):
        rng = make_rng(4)
        scale = 10.0 ** rng.integers(-12, 12, size=500)
        frame = pd.DataFrame({
            'x': rng.standard_normal(500) * scale,
            'z': (rng.standard_normal(500) + 1j * rng.standard_normal(500)) / np.sqrt(1001)
        })
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / 'values.csv'
            write_complex_csv(frame, path)
            restored = read_complex_csv(path)

        self.assertEqual(list(restored.columns), ['x', 'z'])
        assert_array_equal(restored['x'].to_numpy(), frame['x'].to_numpy())
        assert_array_equal(restored['z'].to_numpy(), frame['z'].to_numpy())
