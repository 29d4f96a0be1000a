from unittest import TestCase

import numpy as np
import pytest

from src.srradar.errors import DimensionError, UndefinedInputError
from src.srradar.scene import prop2_decay_study


class TestDecayStudy(TestCase):
    def test_single_length(self):
        study = prop2_decay_study([31], trials=3, seed=0)
        self.assertEqual(len(study.table), 1)
        self.assertTrue(np.isnan(study.slope))
        self.assertGreater(study.table['mean_rel_error'].iloc[0], 0)

    def test_deterministic(self):
        a = prop2_decay_study([15, 31], trials=2, seed=4)
        b = prop2_decay_study([15, 31], trials=2, seed=4)
        self.assertTrue(a.table.equals(b.table))

    def test_thread_count_does_not_change_results(self):
        a = prop2_decay_study([21], trials=4, seed=1, threads=1)
        b = prop2_decay_study([21], trials=4, seed=1, threads=3)
        self.assertTrue(a.table.equals(b.table))

    def test_error_decreases(self):
        study = prop2_decay_study([31, 63, 127], trials=10, seed=2)
        self.assertLess(study.slope, 0)

    def test_rejects_empty_scenes(self):
        with self.assertRaises(UndefinedInputError):
            prop2_decay_study([31], trials=1, seed=0, S=0)

    def test_rejects_even_length(self):
        with self.assertRaises(DimensionError):
            prop2_decay_study([32], trials=1, seed=0)


@pytest.mark.slow
def test_decay_rate_is_inverse_square_root():
    study = prop2_decay_study([63, 127, 255, 511], trials=50, seed=0)
    assert -0.65 <= study.slope <= -0.35
