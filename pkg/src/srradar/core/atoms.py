from dataclasses import dataclass

import numpy as np

from src.srradar.core.indexing import check_n_half, length, reduce_mod1, sym_indices, wrap_distance
from src.srradar.core.kernels import dirichlet


@dataclass(frozen=True)
class TFShift:
    """
    Normalized time-frequency shift ``(tau, nu)``, stored reduced modulo 1.
    """
    tau: float
    nu: float

    def __post_init__(self):
        object.__setattr__(self, 'tau', float(reduce_mod1(float(self.tau))))
        object.__setattr__(self, 'nu', float(reduce_mod1(float(self.nu))))

    def distance(self, other):
        """
        Wrap-around infinity distance ``max(|tau - tau'|, |nu - nu'|)`` on the unit torus.
        """
        return float(max(wrap_distance(self.tau, other.tau), wrap_distance(self.nu, other.nu)))

    def as_tuple(self):
        return self.tau, self.nu

    def __iter__(self):
        return iter(self.as_tuple())


@dataclass(frozen=True, eq=False)
class Atom:
    """
    Atom ``a(r)`` as a length ``L^2`` vector indexed ``(k, l)`` (k outer).
    """
    n_half: int
    values: np.ndarray

    @property
    def L(self):
        return length(self.n_half)

    def as_matrix(self):
        """
        ``L x L`` view with rows indexed by ``k`` and columns by ``l``.
        """
        return self.values.reshape(self.L, self.L)

    def __array__(self, dtype=None, copy=None):
        return np.array(self.values, dtype=dtype)


def atom(r, n_half):
    """
    ``[a(r)]_{(k, l)} = D_N(l/L - tau) D_N(k/L - nu)``.

    Satisfies ``G a(r) = F_nu T_tau x`` for the Gabor matrix ``G`` of any probe ``x``.
    """
    n_half = check_n_half(n_half)
    if not isinstance(r, TFShift):
        r = TFShift(*r)

    L = length(n_half)
    idx = sym_indices(n_half) / L
    d_nu = dirichlet(idx - r.nu, n_half)
    d_tau = dirichlet(idx - r.tau, n_half)
    values = np.outer(d_nu, d_tau).astype(complex).reshape(-1)
    values.setflags(write=False)
    return Atom(n_half, values)
