from unittest import TestCase

import numpy as np
from numpy.testing import assert_allclose

from src.srradar.core import TFShift, atom, gabor_apply, tf_shift, dirichlet
from tests.helpers import random_probe


class TestTFShift(TestCase):
    def test_reduced_modulo_one(self):
        r = TFShift(1.25, -0.25)
        self.assertAlmostEqual(r.tau, 0.25)
        self.assertAlmostEqual(r.nu, 0.75)

    def test_wraparound_distance(self):
        a = TFShift(5 / 6, 0.1)
        b = TFShift(1 / 6, 0.1)
        self.assertAlmostEqual(a.distance(b), 1 / 3)
        self.assertAlmostEqual(b.distance(a), 1 / 3)

    def test_hashable_and_equal(self):
        self.assertEqual(TFShift(0.2, 0.3), TFShift(1.2, 0.3))
        self.assertEqual(len({TFShift(0.2, 0.3), TFShift(0.2, 0.3)}), 1)


class TestAtom(TestCase):
    def test_on_grid_is_canonical_vector(self):
        n_half = 3
        L = 7
        a = atom(TFShift(2 / L, 5 / L), n_half).as_matrix()
        expected = np.zeros((L, L))
        # nu = 5/7 aliases to k = -2, tau = 2/7 to l = 2
        expected[-2 + n_half, 2 + n_half] = 1.0
        assert_allclose(a, expected, atol=1e-14)

    def test_origin(self):
        a = atom(TFShift(0, 0), 4)
        self.assertAlmostEqual(np.max(np.abs(a.values)), 1.0)
        self.assertEqual(np.argmax(np.abs(a.as_matrix())), 4 * 9 + 4)

    def test_entries_match_direct_evaluation(self):
        n_half = 4
        L = 9
        r = TFShift(0.31, 0.77)
        a = atom(r, n_half).as_matrix()
        idx = np.arange(-n_half, n_half + 1)
        for i, k in enumerate(idx):
            for j, l in enumerate(idx):
                expected = dirichlet(l / L - r.tau, n_half) * dirichlet(k / L - r.nu, n_half)
                self.assertAlmostEqual(a[i, j].real, expected, delta=1e-12)

    def test_gabor_maps_atom_to_shifted_probe(self):
        x = random_probe(3, seed=7)
        for tau, nu in np.random.default_rng(1).uniform(0, 1, (10, 2)):
            assert_allclose(gabor_apply(x, atom((tau, nu), 3).values), tf_shift(x, tau, nu), atol=1e-10)
