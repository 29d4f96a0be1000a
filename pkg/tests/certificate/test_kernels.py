from unittest import TestCase

import numpy as np
from numpy.testing import assert_allclose

from src.srradar.certificate import fejer_sq_coeffs, g_random, gbar, gbar_poly, random_kernel
from src.srradar.core import gabor_matrix, sym_indices, tf_shift
from src.srradar.errors import DimensionError
from src.srradar.scene import draw_probing_signal
from src.srradar.utils import RunningMeanStd
from tests.helpers import random_probe


def dense_kernel(x, r, r_j, mp=0, np_=0, m=0, n=0):
    """
    ``(L^2 / M^2) f^{(m, n)}(r)^H F G^H G F^H g_{(m', n')}(r_j)`` with every matrix formed explicitly.
    """
    L, N = x.L, x.n_half
    fejer = fejer_sq_coeffs(N)
    p = sym_indices(N)
    k, l = np.meshgrid(p, p, indexing='ij')
    a, b = np.meshgrid(p, p, indexing='ij')
    FH = np.exp(2j * np.pi * (np.outer(k.ravel(), b.ravel()) + np.outer(l.ravel(), a.ravel())) / L) / L ** 2

    g = np.outer(fejer.coeffs, fejer.coeffs)
    g = g * np.exp(-2j * np.pi * (r_j[0] * a + r_j[1] * b)) * (2j * np.pi * a) ** mp * (2j * np.pi * b) ** np_
    f_h = (2j * np.pi * a) ** m * (2j * np.pi * b) ** n * np.exp(2j * np.pi * (r[0] * a + r[1] * b))

    G = gabor_matrix(x)
    scale = L ** 2 / fejer.m_param ** 2
    return scale * f_h.ravel() @ FH.conj().T @ G.conj().T @ G @ FH @ g.ravel()


class TestGbar(TestCase):
    def test_origin(self):
        fejer = fejer_sq_coeffs(8)
        assert_allclose(gbar((0.0, 0.0), n_half=8), 1.0, rtol=1e-12)
        assert_allclose(gbar((0.0, 0.0), 1, 0, n_half=8), 0.0, atol=1e-12)
        assert_allclose(gbar((0.0, 0.0), 0, 1, n_half=8), 0.0, atol=1e-12)
        assert_allclose(gbar((0.0, 0.0), 2, 0, n_half=8), -fejer.kappa2, rtol=1e-12)

    def test_coefficient_sum(self):
        N = 8
        fejer = fejer_sq_coeffs(N)
        M = fejer.m_param
        s = sym_indices(N)
        tau, nu = 0.137, 0.811
        for m, n in [(0, 0), (1, 0), (0, 1), (1, 1), (2, 0), (0, 2), (2, 2), (3, 1), (0, 4)]:
            terms = np.outer(fejer.coeffs * (2j * np.pi * s) ** m * np.exp(2j * np.pi * s * tau),
                             fejer.coeffs * (2j * np.pi * s) ** n * np.exp(2j * np.pi * s * nu))
            expected = terms.sum().real / M ** 2
            assert_allclose(gbar((tau, nu), m, n, n_half=N), expected, rtol=1e-10,
                            atol=1e-12 * fejer.kappa ** (m + n))

    def test_order_limit(self):
        with self.assertRaises(DimensionError):
            gbar((0.1, 0.2), 3, 2, n_half=4)

    def test_shifted_polynomial(self):
        r_j = (0.31, 0.77)
        rng = np.random.default_rng(2)
        tau, nu = rng.uniform(0, 1, (2, 30))
        for m, n in [(0, 0), (1, 0), (0, 1), (1, 1)]:
            poly = gbar_poly(r_j, m, n, n_half=6)
            assert_allclose(poly(tau, nu), gbar((tau - r_j[0], nu - r_j[1]), m, n, n_half=6),
                            atol=1e-9 * fejer_sq_coeffs(6).kappa ** (m + n))


class TestRandomKernel(TestCase):
    def test_matches_dense_computation(self):
        x = random_probe(4, seed=3)
        r_j = (0.42, 0.13)
        rng = np.random.default_rng(3)
        for mp, np_, m, n in [(0, 0, 0, 0), (1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (1, 0, 0, 1), (0, 1, 2, 1)]:
            r = tuple(rng.uniform(0, 1, 2))
            expected = dense_kernel(x, r, r_j, mp, np_, m, n)
            assert_allclose(g_random(x, r, r_j, mp, np_, m, n), expected, rtol=1e-10,
                            atol=1e-10 * (8 * np.pi) ** (mp + np_ + m + n))

    def test_is_a_dual_polynomial(self):
        x = random_probe(4, seed=5)
        kernel = random_kernel(x, (0.6, 0.25))
        fejer = fejer_sq_coeffs(4)
        p = sym_indices(4)
        g = np.outer(fejer.coeffs * np.exp(-2j * np.pi * 0.6 * p), fejer.coeffs * np.exp(-2j * np.pi * 0.25 * p))
        k, l = np.meshgrid(p, p, indexing='ij')
        a, b = np.meshgrid(p, p, indexing='ij')
        FH = np.exp(2j * np.pi * (np.outer(k.ravel(), b.ravel()) + np.outer(l.ravel(), a.ravel())) / 9) / 81
        w = gabor_matrix(x) @ FH @ g.ravel() * 81 / fejer.m_param ** 2
        for tau, nu in [(0.1, 0.9), (0.6, 0.25), (0.33, 0.5)]:
            assert_allclose(kernel(tau, nu), np.vdot(tf_shift(x, tau, nu), w), rtol=1e-10, atol=1e-12)

    def test_order_limit(self):
        x = random_probe(2, seed=0)
        with self.assertRaises(DimensionError):
            g_random(x, (0.1, 0.1), (0.0, 0.0), 2, 1, 1, 1)

    def test_expectation(self):
        r_j = (0.2, 0.7)
        points = [(0.2, 0.7), (0.25, 0.68), (0.5, 0.1)]
        stats = RunningMeanStd(shape=(2, len(points)))
        for t in range(2000):
            x = draw_probing_signal(4, 'gaussian', seed=(11, t))
            kernel = random_kernel(x, r_j)
            values = np.array([kernel(*r) for r in points])
            stats.update(np.stack([values.real, values.imag])[None])

        expected = [gbar((r[0] - r_j[0], r[1] - r_j[1]), n_half=4) for r in points]
        self.assertTrue(np.all(np.abs(stats.mean[0] - expected) <= 5 * stats.stderr[0] + 1e-12))
        self.assertTrue(np.all(np.abs(stats.mean[1]) <= 5 * stats.stderr[1] + 1e-12))
