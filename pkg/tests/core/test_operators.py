from unittest import TestCase

import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.srradar.core import (
    DictionaryOperator,
    dict_adjoint,
    dict_apply,
    dictionary_matrix,
    gabor_adjoint,
    gabor_apply,
    gabor_matrix,
    tf_shift
)
from src.srradar.core.indexing import wrap_index
from src.srradar.errors import CapacityError, DimensionError
from src.srradar.grid import GridSpec
from src.srradar.utils import make_rng
from tests.helpers import random_complex, random_probe


def dense_dictionary(x, grid):
    cols = [tf_shift(x, n / grid.K, m / grid.K) for m in range(grid.n_nu) for n in range(grid.n_tau)]
    return np.stack(cols, axis=1)


def inner(a, b):
    return np.vdot(b, a)


class TestGabor(TestCase):
    def test_on_grid_column(self):
        x = random_probe(4, seed=3)
        L = x.L
        p = np.arange(-4, 5)
        n0, m0 = 3, -2
        z = np.zeros((L, L), dtype=complex)
        z[m0 + 4, n0 + 4] = 1.0
        expected = x[p - n0] * np.exp(2j * np.pi * m0 * p / L)
        assert_allclose(gabor_apply(x, z), expected, atol=1e-13)

    def test_matches_dense(self):
        for n_half in (1, 3, 7):
            x = random_probe(n_half, seed=n_half)
            G = gabor_matrix(x)
            z = random_complex(x.L ** 2, seed=10)
            w = random_complex(x.L, seed=11)
            assert_allclose(gabor_apply(x, z), G @ z, atol=1e-11)
            assert_allclose(gabor_adjoint(x, w), G.conj().T @ w, atol=1e-11)

    def test_adjoint_identity(self):
        x = random_probe(4, seed=9)
        z = random_complex(81, seed=1)
        w = random_complex(9, seed=2)
        self.assertAlmostEqual(inner(gabor_apply(x, z), w), inner(z, gabor_adjoint(x, w)), delta=1e-12)

    def test_gram_is_scaled_identity(self):
        x = random_probe(5, seed=4)
        G = gabor_matrix(x)
        assert_allclose(G @ G.conj().T, x.L * x.norm() ** 2 * np.eye(x.L), atol=1e-11)

    def test_expected_gram_is_identity(self):
        n_half, trials = 2, 2000
        L = 2 * n_half + 1
        rng = make_rng(123)
        mean = np.zeros((L * L, L * L), dtype=complex)
        for _ in range(trials):
            G = gabor_matrix(rng.standard_normal(L) / np.sqrt(L))
            mean += G.conj().T @ G
        mean /= trials
        self.assertLessEqual(np.max(np.abs(mean - np.eye(L * L))), 5 / np.sqrt(trials))

    def test_dimension_mismatch(self):
        x = random_probe(2, seed=0)
        with self.assertRaises(DimensionError):
            gabor_apply(x, np.ones(24))
        with self.assertRaises(DimensionError):
            gabor_adjoint(x, np.ones(4))


class TestDictionary(TestCase):
    def test_square_grid_is_gabor(self):
        x = random_probe(3, seed=5)
        L = x.L
        grid = GridSpec(3, L)
        s = random_complex((L, L), seed=6)
        idx = wrap_index(np.arange(L), 3) + 3
        z = np.zeros((L, L), dtype=complex)
        z[np.ix_(idx, idx)] = s
        assert_allclose(dict_apply(x, grid, s), gabor_apply(x, z), atol=1e-11)

    def test_matches_dense(self):
        for n_half, K, region in [(2, 10, None), (4, 18, None), (7, 30, None), (4, 27, (0.3, 0.5)), (3, 14, (1.0, 0.2))]:
            x = random_probe(n_half, seed=K)
            grid = GridSpec(n_half, K, region=region)
            R = dense_dictionary(x, grid)
            s = random_complex(grid.shape, seed=1)
            w = random_complex(x.L, seed=2)
            assert_allclose(dict_apply(x, grid, s), R @ s.ravel(), atol=1e-11)
            assert_allclose(dict_adjoint(x, grid, w).ravel(), R.conj().T @ w, atol=1e-11)
            assert_allclose(dictionary_matrix(x, grid), R, atol=1e-12)

    def test_adjoint_identity(self):
        x = random_probe(4, seed=8)
        grid = GridSpec(4, 18)
        s = random_complex(grid.shape, seed=3)
        w = random_complex(9, seed=4)
        self.assertAlmostEqual(
            inner(dict_apply(x, grid, s), w), np.vdot(dict_adjoint(x, grid, w), s), delta=1e-11
        )

    def test_single_on_grid_coefficient(self):
        x = random_probe(4, seed=12)
        L, K = 9, 18
        grid = GridSpec(4, K)
        m0, n0 = 5, 7
        s = grid.zeros()
        s[m0, n0] = 1.0
        p = np.arange(-4, 5)
        idx = np.arange(-4, 5)
        expected = np.array([
            np.sum(x.spectrum * np.exp(-2j * np.pi * idx * n0 / K) * np.exp(2j * np.pi * pp * idx / L)) / L
            for pp in p
        ]) * np.exp(2j * np.pi * p * m0 / K)
        assert_allclose(dict_apply(x, grid, s), expected, atol=1e-12)

    def test_region_active_count(self):
        grid = GridSpec(100, 4020, region=(2 / np.sqrt(201), 2 / np.sqrt(201)))
        n = int(np.ceil(2 / np.sqrt(201) * 4020))
        self.assertEqual(grid.active_count, n * n)
        self.assertEqual(GridSpec(3, 14).active_count, 14 * 14)

    def test_rejects_coarse_grid(self):
        with self.assertRaises(DimensionError):
            GridSpec(4, 8)
        with self.assertRaises(DimensionError):
            DictionaryOperator(random_probe(4), 8)

    def test_rejects_bad_coefficients(self):
        x = random_probe(2)
        with self.assertRaises(DimensionError):
            dict_apply(x, GridSpec(2, 10), np.ones((10, 9)))

    def test_dense_refused_for_large_grid(self):
        with pytest.raises(CapacityError):
            dictionary_matrix(random_probe(10), GridSpec(10, 65))

    def test_norm_estimate(self):
        x = random_probe(3, seed=1)
        grid = GridSpec(3, 14)
        op = DictionaryOperator(x, grid.K)
        exact = np.linalg.norm(dense_dictionary(x, grid), 2)
        self.assertLessEqual(op.norm_estimate(n_iter=200), exact * (1 + 1e-12))
        self.assertGreater(op.norm_estimate(n_iter=200), 0.99 * exact)
