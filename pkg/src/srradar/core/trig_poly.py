from dataclasses import dataclass

import numpy as np

from src.srradar.core.indexing import length, n_half_from_length, sym_ifft2, sym_indices
from src.srradar.core.operators import gabor_adjoint
from src.srradar.errors import DimensionError


@dataclass(frozen=True, eq=False)
class TrigPoly2D:
    """
    Two-dimensional trigonometric polynomial of degree N in each variable.

    ``P(tau, nu) = sum_{s, t = -N}^{N} c_{s, t} exp(-i 2 pi (s tau + t nu))``; ``coeffs[s + N, t + N]`` holds
    ``c_{s, t}``, the first axis pairing with ``tau`` and the second with ``nu``.
    """
    coeffs: np.ndarray

    def __post_init__(self):
        coeffs = np.array(self.coeffs, dtype=complex)
        if coeffs.ndim != 2 or coeffs.shape[0] != coeffs.shape[1]:
            raise DimensionError(f'Coefficients must be a square matrix, got shape {coeffs.shape}.')
        n_half_from_length(coeffs.shape[0])
        coeffs.setflags(write=False)
        object.__setattr__(self, 'coeffs', coeffs)

    @property
    def degree(self):
        return (self.coeffs.shape[0] - 1) // 2

    @property
    def L(self):
        return length(self.degree)

    def derivative(self, m=0, n=0):
        """
        ``d^m/dtau^m d^n/dnu^n P`` as a polynomial of the same degree.
        """
        s = sym_indices(self.degree)
        weights = np.outer((-2j * np.pi * s) ** m, (-2j * np.pi * s) ** n)
        return TrigPoly2D(self.coeffs * weights)

    def __call__(self, tau, nu, m=0, n=0):
        return trigpoly_eval(self, tau, nu, m=m, n=n)

    def on_grid(self, grid_size, m=0, n=0):
        return eval_trigpoly_grid(self, grid_size, m=m, n=n)

    def __add__(self, other):
        if not isinstance(other, TrigPoly2D):
            return NotImplemented
        if other.degree != self.degree:
            raise DimensionError(f'Degree mismatch: {self.degree} != {other.degree}.')
        return TrigPoly2D(self.coeffs + other.coeffs)

    def __mul__(self, scalar):
        return TrigPoly2D(self.coeffs * complex(scalar))

    __rmul__ = __mul__

    def allclose(self, other, rtol=1e-12, atol=1e-12):
        return np.allclose(self.coeffs, other.coeffs, rtol=rtol, atol=atol)


def eval_trigpoly_grid(p, grid_size, m=0, n=0):
    """
    Evaluate ``P`` (or a partial derivative) at ``(tau, nu) = (u / G, v / G)``, ``u, v = 0, ..., G - 1``.

    The coefficients are zero padded into a ``G x G`` array at positions ``(s mod G, t mod G)`` and transformed
    with a single 2D FFT.

    Parameters
    ----------
    p : TrigPoly2D

    grid_size : int
        Grid size ``G >= L``.

    m, n : int, default 0
        Derivative orders in ``tau`` and ``nu``.

    Returns
    -------
    np.ndarray, shape (grid_size, grid_size)
        ``out[u, v] = P^{(m, n)}(u / G, v / G)``.

    """
    grid_size = int(grid_size)
    if grid_size < p.L:
        raise DimensionError(f'grid_size={grid_size} must be at least L={p.L}.')

    if m or n:
        p = p.derivative(m, n)

    idx = np.mod(sym_indices(p.degree), grid_size)
    padded = np.zeros((grid_size, grid_size), dtype=complex)
    padded[np.ix_(idx, idx)] = p.coeffs
    return np.fft.fft2(padded)


def trigpoly_eval(p, tau, nu, m=0, n=0):
    """
    Direct evaluation of ``P^{(m, n)}(tau, nu)`` at arbitrary (broadcastable) points.
    """
    tau, nu = np.broadcast_arrays(np.asarray(tau, dtype=float), np.asarray(nu, dtype=float))
    shape = tau.shape
    s = sym_indices(p.degree)

    e_tau = np.exp(-2j * np.pi * np.outer(tau.ravel(), s)) * (-2j * np.pi * s) ** m
    e_nu = np.exp(-2j * np.pi * np.outer(nu.ravel(), s)) * (-2j * np.pi * s) ** n
    values = np.einsum('as,st,at->a', e_tau, p.coeffs, e_nu).reshape(shape)
    return values if values.ndim else complex(values)


def inner_product_poly(x, q):
    """
    Coefficients of ``Q(tau, nu) = <q, F_nu T_tau x> = sum_p conj([F_nu T_tau x]_p) q_p``.

    With ``W = G^H q`` arranged as ``W[k, l]``, the coefficients are ``c = IDFT2(W^T)``: the 2D DFT of the Gabor
    adjoint, reindexed by ``(-s, -t)``.
    """
    L = np.asarray(q).size
    w = gabor_adjoint(x, q).reshape(L, L)
    return TrigPoly2D(sym_ifft2(w.T))


def squared_magnitude_derivatives(p, tau, nu):
    """
    ``f = |P|^2`` at the given points, with its gradient and Hessian in ``(tau, nu)``.

    Returns
    -------
    f : np.ndarray, shape (n,)

    grad : np.ndarray, shape (n, 2)

    hess : np.ndarray, shape (n, 2, 2)

    """
    tau = np.atleast_1d(np.asarray(tau, dtype=float))
    nu = np.atleast_1d(np.asarray(nu, dtype=float))
    d = {mn: np.atleast_1d(trigpoly_eval(p, tau, nu, *mn))
         for mn in ((0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2))}
    v = d[0, 0]

    grad = 2 * np.real(np.conj(v)[:, None] * np.stack([d[1, 0], d[0, 1]], axis=1))
    h_tt = np.abs(d[1, 0]) ** 2 + np.real(np.conj(v) * d[2, 0])
    h_nn = np.abs(d[0, 1]) ** 2 + np.real(np.conj(v) * d[0, 2])
    h_tn = np.real(np.conj(d[1, 0]) * d[0, 1] + np.conj(v) * d[1, 1])
    hess = 2 * np.stack([np.stack([h_tt, h_tn], axis=1), np.stack([h_tn, h_nn], axis=1)], axis=1)
    return np.abs(v) ** 2, grad, hess
