"""
Squared Fejer kernel.

For even N and ``M = N / 2 + 1``, ``F(t) = (sin(M pi t) / (M sin(pi t)))^4 = (1 / M) sum_{k=-N}^{N} g_k e^{i 2 pi k t}``
is a real, even trigonometric polynomial of degree N with ``F(0) = 1`` and ``F''(0) = -kappa^2``.
"""
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from src.srradar.core.indexing import sym_indices
from src.srradar.errors import DimensionError


def check_even_n_half(n_half):
    n_half = int(n_half)
    if n_half < 2 or n_half % 2:
        raise DimensionError(
            f'The squared Fejer kernel needs an even N >= 2 to be a trigonometric polynomial, got N={n_half}.'
        )
    return n_half


@dataclass(frozen=True, eq=False)
class FejerSq:
    """
    Coefficients ``g_k``, ``k = -N, ..., N``, of the squared Fejer kernel.

    Parameters
    ----------
    n_half : int
        Even degree N.

    coeffs : np.ndarray, shape (2N + 1,)
        ``coeffs[k + N] = g_k``.

    """
    n_half: int
    coeffs: np.ndarray

    @property
    def m_param(self):
        return self.n_half // 2 + 1

    @property
    def kappa2(self):
        return -float(self(0.0, m=2))

    @property
    def kappa(self):
        return np.sqrt(self.kappa2)

    @property
    def kappa2_closed_form(self):
        N = self.n_half
        return np.pi ** 2 / 3 * (N ** 2 + 4 * N)

    def __call__(self, t, m=0):
        """
        ``F^{(m)}(t)`` from the coefficient expansion. Real for every ``m``.
        """
        t = np.asarray(t, dtype=float)
        k = sym_indices(self.n_half)
        weights = self.coeffs * (2j * np.pi * k) ** m / self.m_param
        values = np.real(np.exp(2j * np.pi * np.multiply.outer(t, k)) @ weights)
        return values if values.ndim else float(values)

    def closed_form(self, t):
        """
        ``(sin(M pi t) / (M sin(pi t)))^4``, continued by 1 at integer ``t``.
        """
        t = np.asarray(t, dtype=float)
        M = self.m_param
        den = M * np.sin(np.pi * t)
        singular = np.abs(den) < 1e-12
        ratio = np.where(singular, 1.0, np.sin(M * np.pi * t) / np.where(singular, 1.0, den))
        values = ratio ** 4
        return values if values.ndim else float(values)


@lru_cache(maxsize=32)
def _fejer_sq_cached(n_half):
    M = n_half // 2 + 1
    tri = M - np.abs(np.arange(-(M - 1), M))
    coeffs = np.convolve(tri, tri).astype(float) / M ** 3
    coeffs.setflags(write=False)
    return FejerSq(n_half, coeffs)


def fejer_sq_coeffs(n_half):
    """
    Squared Fejer kernel of even degree ``n_half``.

    The coefficients are the self-convolution of the triangular Fejer weights ``M - |k|``, ``|k| < M``, divided by
    ``M^3``, which gives ``F(0) = (1 / M) sum_k g_k = 1``.

    Raises
    ------
    DimensionError
        If ``n_half`` is odd or smaller than 2.

    """
    return _fejer_sq_cached(check_even_n_half(n_half))
