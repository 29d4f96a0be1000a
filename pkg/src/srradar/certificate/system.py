"""
Interpolation systems.

The certificate ``Q(r) = sum_k alpha_k K_{(0,0)}(r, r_k) + beta_{1k} K_{(1,0)}(r, r_k) + beta_{2k} K_{(0,1)}(r, r_k)``
must satisfy ``Q(r_j) = u_j`` and ``Q^{(1,0)}(r_j) = Q^{(0,1)}(r_j) = 0``. Stacking the conditions by derivative
order gives a ``3S x 3S`` system in ``[alpha; kappa beta_1; kappa beta_2]`` whose block ``(a, b)`` holds
``sign_a kappa^{-|a| - |b|} K^{a}_{b}(r_j, r_k)``, with ``sign = (+1, -1, -1)`` for the rows ``Q``, ``Q^{(1,0)}``
and ``Q^{(0,1)}``. With ``K = Gbar`` the diagonal is one.
"""
import logging
from dataclasses import dataclass

import numpy as np

from src.srradar.certificate.fejer import fejer_sq_coeffs
from src.srradar.certificate.kernels import interp_vector
from src.srradar.core.atoms import TFShift
from src.srradar.core.signal import ProbingSignal
from src.srradar.core.trig_poly import inner_product_poly
from src.srradar.errors import DimensionError, IllConditionedError
from src.srradar.scene.scene import TargetScene

logger = logging.getLogger(__name__)

ORDERS = ((0, 0), (1, 0), (0, 1))
ROW_SIGNS = (1, -1, -1)
MAX_CONDITION = 1e8


def as_support(support):
    if isinstance(support, TargetScene):
        return support.shifts
    return tuple(r if isinstance(r, TFShift) else TFShift(*r) for r in support)


def resolve_n_half(x=None, n_half=None):
    if x is not None:
        if not isinstance(x, ProbingSignal):
            x = ProbingSignal.from_samples(x)
        if n_half is not None and int(n_half) != x.n_half:
            raise DimensionError(f'n_half={n_half} does not match the probe (N={x.n_half}).')
        n_half = x.n_half
    elif n_half is None:
        raise DimensionError('Either a probing signal or n_half is required.')
    return x, fejer_sq_coeffs(n_half).n_half


@dataclass(frozen=True, eq=False)
class InterpSystem:
    """
    Deterministic and (optionally) random interpolation systems on a support.

    Attributes
    ----------
    support : tuple of TFShift

    signs : np.ndarray, shape (S,)
        Target values ``u`` of ``Q`` on the support.

    dbar : np.ndarray, shape (3S, 3S)
        Real symmetric system built from ``Gbar``.

    d_rand : np.ndarray or None, shape (3S, 3S)
        Complex system built from the random kernels; None without a probe.

    kernels : tuple of tuple of TrigPoly2D or None
        ``kernels[b][k]`` is the random kernel ``(m', n') = ORDERS[b]`` centered at ``r_k``.

    vectors : np.ndarray or None, shape (3, S, L)
        ``vectors[b, k] = (L^2 / M^2) G F^H g_{ORDERS[b]}(r_k)``.

    """
    support: tuple
    signs: np.ndarray
    n_half: int
    kappa: float
    dbar: np.ndarray
    x: ProbingSignal = None
    d_rand: np.ndarray = None
    kernels: tuple = None
    vectors: np.ndarray = None

    @property
    def S(self):
        return len(self.support)

    @property
    def random(self):
        return self.d_rand is not None

    @property
    def matrix(self):
        return self.d_rand if self.random else self.dbar

    @property
    def rhs(self):
        return np.concatenate([self.signs, np.zeros(2 * self.S)])

    def block(self, a, b, deterministic=False):
        """
        Block ``(a, b)`` of the system, with ``a, b`` derivative orders from ``ORDERS``.
        """
        matrix = self.dbar if deterministic or not self.random else self.d_rand
        i, j = ORDERS.index(a), ORDERS.index(b)
        S = self.S
        return matrix[i * S:(i + 1) * S, j * S:(j + 1) * S]

    def dbar_deviation(self):
        """
        ``||I - dbar||_inf``, the largest absolute row sum.
        """
        return float(np.abs(np.eye(3 * self.S) - self.dbar).sum(axis=1).max())

    def dbar_inv_norm(self):
        return float(np.abs(np.linalg.inv(self.dbar)).sum(axis=1).max())


def _scale(a, b, kappa):
    return ROW_SIGNS[ORDERS.index(a)] * kappa ** -(sum(a) + sum(b))


def build_interp_system(support, u, x=None, n_half=None):
    """
    Assemble the interpolation system on ``support``.

    Parameters
    ----------
    support : TargetScene or sequence of TFShift or (tau, nu) pairs
        Support ``T``, ``S >= 1``.

    u : array_like, shape (S,)
        Values to interpolate, usually ``sign(b_j)``.

    x : ProbingSignal or None
        Probe for the random system. When None only the deterministic system is built.

    n_half : int or None
        Even N; taken from ``x`` when given.

    Returns
    -------
    InterpSystem

    """
    x, n_half = resolve_n_half(x, n_half)
    support = as_support(support)
    S = len(support)
    if S == 0:
        raise DimensionError('An interpolation system needs at least one support point.')

    signs = np.asarray(u, dtype=complex).reshape(-1)
    if signs.shape[0] != S:
        raise DimensionError(f'Got {signs.shape[0]} interpolation values for {S} support points.')
    if not np.any(signs.imag):
        signs = signs.real

    fejer = fejer_sq_coeffs(n_half)
    kappa = fejer.kappa
    taus = np.array([r.tau for r in support])
    nus = np.array([r.nu for r in support])
    d_tau = taus[:, None] - taus[None, :]
    d_nu = nus[:, None] - nus[None, :]

    dbar = np.zeros((3 * S, 3 * S))
    for i, a in enumerate(ORDERS):
        for j, b in enumerate(ORDERS):
            m, n = a[0] + b[0], a[1] + b[1]
            dbar[i * S:(i + 1) * S, j * S:(j + 1) * S] = _scale(a, b, kappa) * fejer(d_tau, m) * fejer(d_nu, n)

    if x is None:
        logger.debug(f'Built deterministic interpolation system, S={S}, N={n_half}.')
        return InterpSystem(support, signs, n_half, kappa, dbar)

    scale = x.L ** 2 / fejer.m_param ** 2
    vectors = np.array([[scale * interp_vector(x, r, *b) for r in support] for b in ORDERS])
    kernels = tuple(tuple(inner_product_poly(x, v) for v in row) for row in vectors)

    d_rand = np.zeros((3 * S, 3 * S), dtype=complex)
    for i, a in enumerate(ORDERS):
        for j, b in enumerate(ORDERS):
            block = np.column_stack([kernel(taus, nus, *a) for kernel in kernels[j]])
            d_rand[i * S:(i + 1) * S, j * S:(j + 1) * S] = _scale(a, b, kappa) * block

    logger.debug(f'Built random interpolation system, S={S}, N={n_half}.')
    return InterpSystem(support, signs, n_half, kappa, dbar, x, d_rand, kernels, vectors)


@dataclass(frozen=True)
class CertCoeffs:
    """
    Interpolation coefficients with the system's condition number and the relative solve residual.
    """
    alpha: np.ndarray
    beta1: np.ndarray
    beta2: np.ndarray
    condition: float
    residual: float


def solve_cert_coeffs(system, max_condition=MAX_CONDITION):
    """
    Solve ``D [alpha; kappa beta_1; kappa beta_2] = [u; 0; 0]`` by a dense LU solve.

    The random system is used when present, the deterministic one otherwise.

    Raises
    ------
    IllConditionedError
        If the 2-norm condition number exceeds ``max_condition``, which signals a support that is not separated
        enough for the kernels to interpolate.

    """
    matrix, rhs = system.matrix, system.rhs
    condition = float(np.linalg.cond(matrix))
    if not np.isfinite(condition) or condition > max_condition:
        raise IllConditionedError(
            f'Interpolation system is ill-conditioned (cond={condition:.3e} > {max_condition:.1e}); '
            f'the support is likely too closely spaced.',
            condition=condition
        )

    sol = np.linalg.solve(matrix, rhs)
    residual = float(np.linalg.norm(matrix @ sol - rhs) / (np.linalg.norm(system.signs) or 1.0))
    S, kappa = system.S, system.kappa
    logger.debug(f'Solved interpolation system: cond={condition:.3e}, residual={residual:.3e}.')
    return CertCoeffs(sol[:S], sol[S:2 * S] / kappa, sol[2 * S:] / kappa, condition, residual)
