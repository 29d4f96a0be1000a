"""
Measurement operators.

The Gabor matrix ``G`` (``L x L^2``) has columns ``F_{k/L} T_{l/L} x`` for ``k, l = -N, ..., N`` and the dictionary
``R`` (``L x K^2``, or a restriction of it) has columns ``F_{m/K} T_{n/K} x`` for ``m, n = 0, ..., K - 1``. Both are
applied matrix-free through DFTs; the dense constructors exist for oracles and small reference solves only.
"""
import logging
from functools import lru_cache

import numpy as np

from src.srradar.core.indexing import length, sym_fft, sym_ifft, sym_indices
from src.srradar.core.signal import ProbingSignal
from src.srradar.errors import CapacityError, DimensionError
from src.srradar.utils.rng import make_rng

logger = logging.getLogger(__name__)

MAX_DENSE_SIZE = 64


def _check_probe(x):
    if not isinstance(x, ProbingSignal):
        x = ProbingSignal.from_samples(x)
    return x


def _check_vector(v, size, name):
    v = np.asarray(v, dtype=complex)
    if v.size != size:
        raise DimensionError(f'{name} must have {size} entries, got shape {v.shape}.')
    return v.reshape(-1)


def gabor_apply(x, z):
    """
    Compute ``G z``.

    ``[G]_{p, (k, l)} = x_{p - l} exp(i 2 pi k p / L)``. The sum over ``k`` is an inverse DFT per column ``l``
    and the sum over ``l`` is a row-wise product with the circulant of ``x``.

    Parameters
    ----------
    x : ProbingSignal

    z : array_like, shape (L**2,) or (L, L)
        Coefficients indexed ``(k, l)``, k outer.

    Returns
    -------
    np.ndarray, shape (L,)

    """
    x = _check_probe(x)
    L = x.L
    z = _check_vector(z, L * L, 'z').reshape(L, L)
    w = L * sym_ifft(z, axis=0)
    return np.sum(x.circulant() * w, axis=1)


def gabor_adjoint(x, y):
    """
    Compute ``G^H y`` as a length ``L^2`` vector indexed ``(k, l)``.
    """
    x = _check_probe(x)
    y = _check_vector(y, x.L, 'y')
    return sym_fft(np.conj(x.circulant()) * y[:, None], axis=0).reshape(-1)


def gabor_matrix(x):
    """
    Dense Gabor matrix, for ``L <= 64``.
    """
    x = _check_probe(x)
    if x.L > MAX_DENSE_SIZE:
        raise CapacityError(f'Refusing to build a dense Gabor matrix for L={x.L} > {MAX_DENSE_SIZE}.')

    p = sym_indices(x.n_half)
    modulation = np.exp(2j * np.pi * np.outer(p, p) / x.L)
    return (modulation[:, :, None] * x.circulant()[:, None, :]).reshape(x.L, -1)


class DictionaryOperator:
    """
    Matrix-free fine-grid dictionary restricted to ``m < n_nu`` and ``n < n_tau``.

    Coefficients are arrays of shape ``(n_nu, n_tau)``: row ``m`` pairs with ``nu = m / K`` and column ``n`` with
    ``tau = n / K``. The ``L x n_tau`` table of fractional time shifts ``T_{n/K} x`` is computed once; applying the
    operator then costs one length-``K`` FFT per active ``n`` when the Doppler axis is unrestricted and a dense
    ``L x n_nu`` product otherwise.
    """
    def __init__(self, x, K, n_tau=None, n_nu=None):
        x = _check_probe(x)
        K = int(K)
        if K < x.L:
            raise DimensionError(f'Grid size K={K} must be at least L={x.L}.')

        n_tau = K if n_tau is None else int(n_tau)
        n_nu = K if n_nu is None else int(n_nu)
        if not (1 <= n_tau <= K and 1 <= n_nu <= K):
            raise DimensionError(f'Active grid ({n_nu}, {n_tau}) out of range for K={K}.')

        self.x = x
        self.K = K
        self.n_tau = n_tau
        self.n_nu = n_nu
        self.p = sym_indices(x.n_half)
        self.rows = np.mod(self.p, K)

        k = sym_indices(x.n_half)
        phases = np.exp(-2j * np.pi * np.outer(k, np.arange(n_tau)) / K)
        self.table = sym_ifft(x.spectrum[:, None] * phases, axis=0)
        self.table.setflags(write=False)

        if n_nu < K:
            self.modulation = np.exp(2j * np.pi * np.outer(self.p, np.arange(n_nu)) / K)
        else:
            self.modulation = None

        logger.debug(f'Built dictionary operator: L={x.L}, K={K}, active=({n_nu}, {n_tau}).')

    @property
    def L(self):
        return self.x.L

    @property
    def shape(self):
        return self.L, self.n_nu * self.n_tau

    @property
    def coef_shape(self):
        return self.n_nu, self.n_tau

    def _check_coefs(self, s):
        s = np.asarray(s, dtype=complex)
        if s.size != self.n_nu * self.n_tau:
            raise DimensionError(f'Coefficient array must have shape {self.coef_shape}, got {s.shape}.')
        return s.reshape(self.coef_shape)

    def apply(self, s):
        s = self._check_coefs(s)
        if self.modulation is None:
            spectrum = self.K * np.fft.ifft(s, axis=0)[self.rows]
        else:
            spectrum = self.modulation @ s
        return np.sum(self.table * spectrum, axis=1)

    def adjoint(self, y):
        y = _check_vector(y, self.L, 'y')
        v = np.conj(self.table) * y[:, None]
        if self.modulation is None:
            padded = np.zeros((self.K, self.n_tau), dtype=complex)
            padded[self.rows] = v
            return np.fft.fft(padded, axis=0)
        return self.modulation.conj().T @ v

    def columns(self, m, n):
        """
        Columns ``F_{m/K} T_{n/K} x`` for index arrays ``m`` and ``n``, as an ``L x len(m)`` matrix.
        """
        m = np.atleast_1d(np.asarray(m, dtype=int))
        n = np.atleast_1d(np.asarray(n, dtype=int))
        if np.any((m < 0) | (m >= self.n_nu) | (n < 0) | (n >= self.n_tau)):
            raise DimensionError(f'Grid index out of range for active grid {self.coef_shape}.')
        return self.table[:, n] * np.exp(2j * np.pi * np.outer(self.p, m) / self.K)

    def to_dense(self):
        if self.K > MAX_DENSE_SIZE:
            raise CapacityError(f'Refusing to build a dense dictionary for K={self.K} > {MAX_DENSE_SIZE}.')
        m, n = np.meshgrid(np.arange(self.n_nu), np.arange(self.n_tau), indexing='ij')
        return self.columns(m.ravel(), n.ravel())

    def norm_estimate(self, n_iter=50, seed=0):
        """
        Spectral norm of ``R`` by power iteration on ``R^H R``.
        """
        rng = make_rng(seed)
        s = rng.standard_normal(self.coef_shape) + 1j * rng.standard_normal(self.coef_shape)
        s /= np.linalg.norm(s)
        sigma = 0.0
        for _ in range(n_iter):
            s = self.adjoint(self.apply(s))
            sigma = np.linalg.norm(s)
            if sigma == 0:
                return 0.0
            s /= sigma
        return float(np.sqrt(sigma))


@lru_cache(maxsize=32)
def dictionary_operator(x, K, n_tau=None, n_nu=None):
    """
    Cached :class:`DictionaryOperator` per ``(x, K, n_tau, n_nu)``.
    """
    return DictionaryOperator(x, K, n_tau=n_tau, n_nu=n_nu)


def _grid_operator(x, grid):
    x = _check_probe(x)
    return dictionary_operator(x, grid.K, grid.n_tau, grid.n_nu)


def dict_apply(x, grid, s):
    """
    ``y = R s`` for coefficients ``s`` of shape ``grid.shape`` (``(n_nu, n_tau)``).
    """
    return _grid_operator(x, grid).apply(s)


def dict_adjoint(x, grid, y):
    """
    ``R^H y`` as an array of shape ``grid.shape``.
    """
    return _grid_operator(x, grid).adjoint(y)


def dictionary_matrix(x, grid):
    """
    Dense ``L x (n_nu * n_tau)`` dictionary with columns in row-major ``(m, n)`` order, for ``K <= 64``.
    """
    return _grid_operator(x, grid).to_dense()
