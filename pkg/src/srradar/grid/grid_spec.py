import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from src.srradar.core.indexing import check_n_half, length
from src.srradar.errors import DimensionError


@dataclass(frozen=True)
class GridSpec:
    """
    Fine recovery grid ``{(n / K, m / K)}`` with an optional rectangular restriction.

    Parameters
    ----------
    n_half : int
        Half-length N of the probe, L = 2N + 1.

    K : int
        Grid points per axis, ``K >= L``.

    region : tuple of float or None, default None
        ``(tau_max, nu_max)``; when set only the ``ceil(tau_max K) x ceil(nu_max K)`` grid points in
        ``[0, tau_max] x [0, nu_max]`` are active.

    Notes
    -----
    Coefficient arrays on the grid have shape ``(n_nu, n_tau)``: row ``m`` pairs with ``nu = m / K`` and column
    ``n`` with ``tau = n / K``.
    """
    n_half: int
    K: int
    region: tuple = None

    def __post_init__(self):
        n_half = check_n_half(self.n_half)
        object.__setattr__(self, 'n_half', n_half)
        object.__setattr__(self, 'K', int(self.K))
        if self.K < length(n_half):
            raise DimensionError(f'K={self.K} must be at least L={length(n_half)}.')

        if self.region is not None:
            region = tuple(float(v) for v in self.region)
            if len(region) != 2 or not all(0 < v <= 1 for v in region):
                raise DimensionError(f'region must be (tau_max, nu_max) in (0, 1], got {self.region}.')
            object.__setattr__(self, 'region', region)

    @classmethod
    def from_srf(cls, n_half, srf, region=None):
        """
        Grid with ``K = round(srf * L)``.
        """
        return cls(n_half, int(round(float(srf) * length(n_half))), region=region)

    @property
    def L(self):
        return length(self.n_half)

    @property
    def srf(self):
        return Fraction(self.K, self.L)

    @property
    def n_tau(self):
        return self._active(0)

    @property
    def n_nu(self):
        return self._active(1)

    def _active(self, axis):
        if self.region is None:
            return self.K
        return min(self.K, max(1, math.ceil(self.region[axis] * self.K - 1e-9)))

    @property
    def shape(self):
        return self.n_nu, self.n_tau

    @property
    def active_count(self):
        return self.n_nu * self.n_tau

    def shifts(self, m, n):
        """
        ``(tau, nu) = (n / K, m / K)`` for grid indices ``(m, n)``.
        """
        m = np.asarray(m)
        n = np.asarray(n)
        if np.any((m < 0) | (m >= self.n_nu) | (n < 0) | (n >= self.n_tau)):
            raise DimensionError(f'Grid index out of range for active grid {self.shape}.')
        return n / self.K, m / self.K

    def zeros(self):
        return np.zeros(self.shape, dtype=complex)
