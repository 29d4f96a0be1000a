from unittest import TestCase

import numpy as np
from numpy.testing import assert_allclose, assert_array_equal

from src.srradar.certificate import fejer_sq_coeffs
from src.srradar.errors import DimensionError


class TestFejerSq(TestCase):
    def test_unit_peak(self):
        for n_half in (2, 4, 16, 64):
            fejer = fejer_sq_coeffs(n_half)
            self.assertEqual(fejer.m_param, n_half // 2 + 1)
            assert_allclose(fejer(0.0), 1.0, rtol=1e-12)
            assert_allclose(fejer.coeffs.sum() / fejer.m_param, 1.0, rtol=1e-12)

    def test_symmetric_coefficients(self):
        fejer = fejer_sq_coeffs(10)
        self.assertEqual(fejer.coeffs.shape, (21,))
        assert_array_equal(fejer.coeffs, fejer.coeffs[::-1])

    def test_coefficients_match_sampled_kernel(self):
        fejer = fejer_sq_coeffs(4)
        L = 9
        samples = fejer.closed_form(np.arange(L) / L)
        expected = fejer.m_param * np.fft.fftshift(np.fft.fft(samples)) / L
        assert_allclose(fejer.coeffs, expected.real, atol=1e-12)
        assert_allclose(expected.imag, 0, atol=1e-12)

    def test_expansion_matches_closed_form(self):
        fejer = fejer_sq_coeffs(8)
        t = np.concatenate([[0.0, 0.5, 1.0, -0.25], np.random.default_rng(0).uniform(-1, 1, 50)])
        assert_allclose(fejer(t), fejer.closed_form(t), atol=1e-12)

    def test_kappa(self):
        assert_allclose(fejer_sq_coeffs(2).kappa2, 4 * np.pi ** 2, rtol=1e-12)
        fejer = fejer_sq_coeffs(512)
        assert_allclose(fejer.kappa2, np.pi ** 2 / 3 * (512 ** 2 + 4 * 512), rtol=1e-10)
        assert_allclose(fejer.kappa2, fejer.kappa2_closed_form, rtol=1e-10)

    def test_derivative_matches_finite_differences(self):
        fejer = fejer_sq_coeffs(8)
        t = np.random.default_rng(1).uniform(0, 1, 40)
        h = 1e-6
        fd = (fejer(t + h) - fejer(t - h)) / (2 * h)
        assert_allclose(fejer(t, m=1), fd, rtol=1e-5, atol=1e-6 * fejer.kappa)

    def test_rejects_odd_degree(self):
        for n_half in (0, 1, 3, 7):
            with self.assertRaises(DimensionError):
                fejer_sq_coeffs(n_half)
