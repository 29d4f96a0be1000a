from unittest import TestCase

import numpy as np
from numpy.testing import assert_allclose

from src.srradar.core import time_shift, freq_shift, tf_shift, tf_shift_columns, dirichlet
from tests.helpers import random_probe


def time_shift_double_sum(x, tau):
    N = x.n_half
    L = x.L
    idx = np.arange(-N, N + 1)
    spectrum = np.array([np.sum(x.samples * np.exp(-2j * np.pi * idx * k / L)) for k in idx])
    return np.array([
        np.sum(spectrum * np.exp(-2j * np.pi * idx * tau) * np.exp(2j * np.pi * p * idx / L)) / L for p in idx
    ])


class TestTimeShift(TestCase):
    def setUp(self):
        self.x = random_probe(3, seed=1)

    def test_identity(self):
        assert_allclose(time_shift(self.x, 0.0), self.x.samples, atol=1e-14)

    def test_integer_shift_is_circular(self):
        L = self.x.L
        for n0 in range(L):
            assert_allclose(time_shift(self.x, n0 / L), np.roll(self.x.samples, n0), atol=1e-13)

    def test_matches_double_sum(self):
        assert_allclose(time_shift(self.x, 0.137), time_shift_double_sum(self.x, 0.137), atol=1e-12)

    def test_periodic(self):
        for tau in (0.137, 0.5, 0.91):
            assert_allclose(time_shift(self.x, tau + 1), time_shift(self.x, tau), atol=1e-14)
            assert_allclose(time_shift(self.x, tau - 3), time_shift(self.x, tau), atol=1e-13)

    def test_norm_preserved(self):
        x = random_probe(10, seed=4)
        for tau in np.random.default_rng(3).uniform(0, 1, 20):
            self.assertAlmostEqual(np.linalg.norm(time_shift(x, tau)), x.norm(), delta=1e-12)

    def test_accepts_plain_arrays(self):
        assert_allclose(time_shift(self.x.samples, 0.2), time_shift(self.x, 0.2))


class TestFreqShift(TestCase):
    def setUp(self):
        self.x = random_probe(3, seed=2)
        self.p = np.arange(-3, 4)

    def test_identity(self):
        assert_allclose(freq_shift(self.x, 0.0), self.x.samples)

    def test_natural_modulation(self):
        L = self.x.L
        expected = self.x.samples * np.exp(2j * np.pi * self.p * 2 / L)
        assert_allclose(freq_shift(self.x, 2 / L), expected, atol=1e-14)

    def test_periodic(self):
        assert_allclose(freq_shift(self.x, 0.3 + 1), freq_shift(self.x, 0.3), atol=1e-14)

    def test_fractional_shifts_do_not_commute(self):
        ft = freq_shift(time_shift(self.x, 0.137), 0.291)
        tf = time_shift(freq_shift(self.x, 0.291), 0.137)
        self.assertFalse(np.allclose(ft, tf))

    def test_natural_shifts_commute_up_to_phase(self):
        L = self.x.L
        n0, m0 = 2, 5
        ft = freq_shift(time_shift(self.x, n0 / L), m0 / L)
        tf = time_shift(freq_shift(self.x, m0 / L), n0 / L)
        assert_allclose(np.abs(ft), np.abs(tf), atol=1e-13)
        assert_allclose(tf, ft * np.exp(-2j * np.pi * n0 * m0 / L), atol=1e-13)


class TestTfShift(TestCase):
    def test_columns_match_single_shifts(self):
        x = random_probe(4, seed=5)
        taus = np.array([0.1, 0.45, 0.99])
        nus = np.array([0.7, 0.0, 0.33])
        cols = tf_shift_columns(x, taus, nus)
        for j in range(3):
            assert_allclose(cols[:, j], tf_shift(x, taus[j], nus[j]), atol=1e-13)

    def test_dirichlet_reproduction(self):
        n_half = 6
        L = 2 * n_half + 1
        r = np.arange(-n_half, n_half + 1)
        p = np.arange(-n_half, n_half + 1)
        for nu in np.random.default_rng(0).uniform(0, 1, 100):
            lhs = np.exp(2j * np.pi * np.outer(p, r) / L) @ dirichlet(r / L - nu, n_half)
            assert_allclose(lhs, np.exp(2j * np.pi * p * nu), atol=1e-10)
