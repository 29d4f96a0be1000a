"""
Semidefinite relaxation of the atomic-norm dual.

The dual of ``minimize ||z||_A subject to ||y - G z||_2 <= delta`` is relaxed to

    maximize    Re <q, y> - delta ||q||_2
    subject to  [[Q, B q], [(B q)^H, 1]] >= 0,
                sum of the (ds, dt)-th block diagonal of Q = 1 if (ds, dt) = (0, 0) else 0,

where ``B q`` is the coefficient vector of the dual polynomial ``Q(r) = <q, F_nu T_tau x>`` and ``Q`` is an
``L^2 x L^2`` Hermitian matrix. The trace constraints are those of the elementary Toeplitz Kronecker products
``Theta_ds (x) Theta_dt``, one per pair ``(ds, dt)`` in ``{-(L - 1), ..., L - 1}^2``.
"""
import logging
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from src.srradar.core.indexing import sym_fft2
from src.srradar.core.operators import gabor_apply
from src.srradar.core.trig_poly import inner_product_poly
from src.srradar.errors import ConfigError, DimensionError
from src.srradar.scene.synthesis import as_samples

logger = logging.getLogger(__name__)

MAX_SDP_LENGTH = 31


@dataclass(frozen=True, eq=False)
class SdpProblem:
    """
    Data of the (noisy) dual program.

    Parameters
    ----------
    y : np.ndarray, shape (L,)
        Samples.

    x : ProbingSignal

    delta : float
        Residual bound of the primal; ``0`` is the noiseless program.

    """
    y: np.ndarray
    x: object
    delta: float = 0.0

    @property
    def L(self):
        return self.x.L

    @property
    def n_half(self):
        return self.x.n_half

    @property
    def n_var(self):
        return self.L ** 2

    @property
    def matrix_size(self):
        return self.n_var + 1

    @property
    def noisy(self):
        return self.delta > 0

    @property
    def n_constraints(self):
        return (2 * self.L - 1) ** 2

    @cached_property
    def beta(self):
        """
        ``B^H B = beta I`` with ``beta = ||x||^2 / L``.
        """
        return self.x.norm() ** 2 / self.L

    def coeff_map(self, q):
        """
        ``B q``: coefficients of ``<q, F_nu T_tau x>`` flattened with the ``tau`` index outer.
        """
        return inner_product_poly(self.x, q).coeffs.reshape(-1)

    def coeff_adjoint(self, c):
        """
        ``B^H c``.
        """
        L = self.L
        w = sym_fft2(np.asarray(c, dtype=complex).reshape(L, L)) / L ** 2
        return gabor_apply(self.x, w.T)

    def coeff_matrix(self):
        """
        Dense ``L^2 x L`` matrix of :meth:`coeff_map`.
        """
        return np.column_stack([self.coeff_map(e) for e in np.eye(self.L, dtype=complex)])

    @cached_property
    def groups(self):
        """
        Constraint index of every entry of ``Q``.

        Entry ``Q[(s, t), (s', t')]`` belongs to the constraint of ``(s' - s, t' - t)``, numbered
        ``(s' - s + L - 1) * (2 L - 1) + (t' - t + L - 1)``.
        """
        L = self.L
        s, t = np.divmod(np.arange(self.n_var), L)
        ds = s[None, :] - s[:, None] + L - 1
        dt = t[None, :] - t[:, None] + L - 1
        return ds * (2 * L - 1) + dt

    @cached_property
    def group_sizes(self):
        return np.bincount(self.groups.ravel(), minlength=self.n_constraints)

    @cached_property
    def identity_group(self):
        L = self.L
        return (L - 1) * (2 * L - 1) + (L - 1)

    @cached_property
    def trace_targets(self):
        e = np.zeros(self.n_constraints, dtype=complex)
        e[self.identity_group] = 1.0
        return e

    def trace_sums(self, Q):
        """
        ``trace((Theta_ds (x) Theta_dt) Q)`` for every constraint, in constraint order.
        """
        idx = self.groups.ravel()
        Q = np.asarray(Q).ravel()
        real = np.bincount(idx, weights=Q.real, minlength=self.n_constraints)
        imag = np.bincount(idx, weights=Q.imag, minlength=self.n_constraints)
        return real + 1j * imag

    def project_trace(self, Q):
        """
        Orthogonal projection of ``Q`` onto the affine set of the trace constraints.
        """
        correction = (self.trace_sums(Q) - self.trace_targets) / self.group_sizes
        return Q - correction[self.groups]

    def bordered(self, q, Q):
        """
        The matrix ``[[Q, B q], [(B q)^H, 1]]``.
        """
        n = self.n_var
        c = self.coeff_map(q)
        M = np.empty((n + 1, n + 1), dtype=complex)
        M[:n, :n] = Q
        M[:n, n] = c
        M[n, :n] = c.conj()
        M[n, n] = 1.0
        return M

    def objective(self, q):
        return float(np.vdot(self.y, q).real - self.delta * np.linalg.norm(q))

    def trivially_feasible(self):
        """
        The feasible pair ``q = 0``, ``Q = I / L^2``.
        """
        return np.zeros(self.L, dtype=complex), np.eye(self.n_var, dtype=complex) / self.n_var

    def __repr__(self):
        return f'SdpProblem(L={self.L}, delta={self.delta}, n_constraints={self.n_constraints})'


def build_sdp(y, x):
    """
    Noiseless dual program ``maximize Re <q, y>``.
    """
    return build_sdp_noisy(y, x, 0.0)


def build_sdp_noisy(y, x, delta):
    """
    Noisy dual program ``maximize Re <q, y> - delta ||q||_2``.

    Parameters
    ----------
    y : SampleVec or array_like, shape (L,)

    x : ProbingSignal

    delta : float
        Non-negative residual bound.

    Returns
    -------
    SdpProblem

    """
    y = as_samples(y)
    if y.shape[0] != x.L:
        raise DimensionError(f'y has {y.shape[0]} samples but the probe has L={x.L}.')
    if not delta >= 0:
        raise ConfigError(f'delta must be non-negative, got {delta}.')

    y = np.array(y, dtype=complex)
    y.setflags(write=False)
    return SdpProblem(y, x, float(delta))
