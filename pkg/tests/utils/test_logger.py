from unittest import TestCase

import numpy as np

from src.srradar.utils import ModularLogger


class TestModularLogger(TestCase):
    def test_cadence(self):
        log = ModularLogger(every=5, horizon=12)
        due = [k for k in range(1, 13) if log.due(k)]
        self.assertEqual(due, [5, 10, 12])

    def test_rows_and_padding(self):
        log = ModularLogger()
        log.log(iteration=1, objective=np.float64(2.0))
        log.log({'iteration': 2, 'gap': 0.1})

        frame = log.to_frame()
        self.assertEqual(len(log), 2)
        self.assertEqual(list(frame['iteration']), [1, 2])
        self.assertTrue(np.isnan(frame['gap'].iloc[0]))
        self.assertTrue(np.isnan(frame['objective'].iloc[1]))
        self.assertEqual(log.last('gap'), 0.1)
        self.assertTrue(np.isnan(log.last('missing')))

    def test_mixed_arguments(self):
        with self.assertRaises(TypeError):
            ModularLogger().log({'a': 1}, b=2)
