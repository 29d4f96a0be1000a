"""
Dual certificates.

A certificate for a support ``T`` and signs ``u`` is a dual polynomial with ``Q(r_k) = u_k``, a local maximum of
``|Q|`` at every ``r_k`` and ``|Q(r)| < 1`` elsewhere; its existence guarantees that the atomic norm program
recovers ``T``. The random certificate has the form ``Q(r) = <q, F_nu T_tau x>`` and can be fed to the shift
localization of :mod:`src.srradar.sdp`; the deterministic one is built from ``Gbar`` only.
"""
import logging
from dataclasses import asdict, dataclass

import numpy as np

from src.srradar.certificate.fejer import fejer_sq_coeffs
from src.srradar.certificate.kernels import gbar_poly
from src.srradar.certificate.system import (
    MAX_CONDITION,
    ORDERS,
    as_support,
    build_interp_system,
    resolve_n_half,
    solve_cert_coeffs
)
from src.srradar.core.indexing import length, wrap_distance
from src.srradar.core.signal import ProbingSignal
from src.srradar.core.trig_poly import TrigPoly2D, inner_product_poly
from src.srradar.errors import DimensionError
from src.srradar.sdp.dual_poly import DualPoly

logger = logging.getLogger(__name__)

GRID_FACTOR = 16
NEAR_RADIUS_FACTOR = 0.2447
FAR_BOUND = 0.9963
DBAR_DEVIATION_BOUND = 0.19808
DBAR_INV_BOUND = 1.247
INTERPOLATION_TOL = 1e-8
STATIONARITY_TOL = 1e-6
GLOBAL_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class Certificate:
    """
    Dual certificate polynomial with its construction data.

    Attributes
    ----------
    support : tuple of TFShift

    signs : np.ndarray, shape (S,)

    poly : TrigPoly2D
        ``Q`` in the trigonometric polynomial convention of :class:`TrigPoly2D`.

    q : np.ndarray or None, shape (L,)
        Dual vector with ``Q(r) = <q, F_nu T_tau x>``; None for the deterministic certificate.

    kind : {'random', 'deterministic'}

    """
    support: tuple
    signs: np.ndarray
    poly: TrigPoly2D
    n_half: int
    kappa: float
    kind: str
    q: np.ndarray = None
    x: ProbingSignal = None
    system: object = None
    coeffs: object = None

    @property
    def S(self):
        return len(self.support)

    @property
    def L(self):
        return self.poly.L

    def __call__(self, tau, nu, m=0, n=0):
        return self.poly(tau, nu, m=m, n=n)

    def as_dual_poly(self):
        return DualPoly(self.poly, provenance=f'certificate:{self.kind}')

    def __repr__(self):
        return f'Certificate(kind={self.kind!r}, S={self.S}, N={self.n_half})'


def build_certificate(support, u, x=None, n_half=None, max_condition=MAX_CONDITION):
    """
    Interpolate ``u`` on ``support`` with the random kernels of ``x``, or with ``Gbar`` when ``x`` is None.

    The random certificate is
    ``q = sum_k (L^2 / M^2) [alpha_k G F^H g_{(0,0)}(r_k) + beta_{1k} G F^H g_{(1,0)}(r_k) + beta_{2k} G F^H g_{(0,1)}(r_k)]``
    and its polynomial is the dual polynomial of ``q``. An empty support gives the zero certificate.

    Parameters
    ----------
    support : TargetScene or sequence of TFShift or (tau, nu) pairs

    u : array_like, shape (S,)
        Unit-modulus interpolation values, ``sign(b_j)`` for a scene.

    x : ProbingSignal or None

    n_half : int or None
        Even N, required when ``x`` is None.

    max_condition : float, default 1e8
        Condition number above which the coefficient solve is refused.

    Returns
    -------
    Certificate

    Raises
    ------
    DimensionError
        Odd N or inconsistent sizes.

    IllConditionedError
        The interpolation system cannot be solved reliably.

    """
    x, n_half = resolve_n_half(x, n_half)
    support = as_support(support)
    fejer = fejer_sq_coeffs(n_half)
    kind = 'deterministic' if x is None else 'random'
    L = length(n_half)

    if not support:
        logger.info(f'Empty support: zero {kind} certificate.')
        return Certificate(
            (), np.zeros(0), TrigPoly2D(np.zeros((L, L))), n_half, fejer.kappa, kind,
            q=None if x is None else np.zeros(L, dtype=complex), x=x
        )

    system = build_interp_system(support, u, x=x, n_half=n_half)
    coeffs = solve_cert_coeffs(system, max_condition=max_condition)
    weights = (coeffs.alpha, coeffs.beta1, coeffs.beta2)

    if x is None:
        poly = sum(
            (gbar_poly(r, *b, n_half=n_half) * w_k
             for b, w in zip(ORDERS, weights) for r, w_k in zip(support, w)),
            TrigPoly2D(np.zeros((L, L)))
        )
        q = None
    else:
        q = np.einsum('bk,bkp->p', np.array(weights), system.vectors)
        poly = inner_product_poly(x, q)

    logger.info(f'Built {kind} certificate: S={len(support)}, N={n_half}, cond={coeffs.condition:.3e}.')
    return Certificate(support, system.signs, poly, n_half, fejer.kappa, kind, q, x, system, coeffs)


@dataclass(frozen=True)
class CertificateReport:
    """
    Numerical validation of a certificate.

    ``stationarity`` is normalized by ``kappa``. ``far_max`` is the largest ``|Q|`` over grid points at
    infinity-distance at least ``near_radius`` from the support and ``far_bound`` adds the Bernstein continuity
    slack to it; the far criterion holds when ``far_max`` stays below 0.9963 plus that slack. ``near_trace_max``
    and ``near_det_min`` summarize the Hessian of ``Re(conj(u_j) Q)`` at each ``r_j`` and at the grid points of
    its own near box. ``passed`` combines interpolation, stationarity, far and near; ``pass_global`` records
    whether the grid maximum of ``|Q|`` stays at 1 and is reported separately. ``dbar_deviation`` and
    ``dbar_inv_norm`` are ``||I - Dbar||_inf`` and ``||Dbar^{-1}||_inf`` of the support.
    """
    interpolation_residual: float
    stationarity: float
    far_max: float
    far_bound: float
    near_trace_max: float
    near_det_min: float
    global_max: float
    global_bound: float
    dbar_deviation: float
    dbar_inv_norm: float
    grid_size: int
    near_radius: float
    pass_interpolation: bool
    pass_stationarity: bool
    pass_far: bool
    pass_near: bool
    pass_global: bool

    @property
    def passed(self):
        return all((self.pass_interpolation, self.pass_stationarity, self.pass_far, self.pass_near))

    @property
    def separated(self):
        """
        Whether ``Dbar`` satisfies the bounds that make the deterministic construction work.
        """
        return self.dbar_deviation <= DBAR_DEVIATION_BOUND and self.dbar_inv_norm <= DBAR_INV_BOUND

    def to_dict(self):
        out = asdict(self)
        out.update(passed=self.passed, separated=self.separated)
        return out


def _near_mask(taus, nus, grid_size, radius):
    axis = np.arange(grid_size) / grid_size
    mask = np.zeros((grid_size, grid_size), dtype=bool)
    for tau, nu in zip(taus, nus):
        mask |= (wrap_distance(axis, tau) < radius)[:, None] & (wrap_distance(axis, nu) < radius)[None, :]
    return mask


def _near_curvature(cert, taus, nus, grid_size, radius):
    if not cert.S:
        return -np.inf, np.inf

    axis = np.arange(grid_size) / grid_size
    trace_max, det_min = -np.inf, np.inf
    for tau, nu, u in zip(taus, nus, cert.signs):
        box_tau = axis[wrap_distance(axis, tau) < radius]
        box_nu = axis[wrap_distance(axis, nu) < radius]
        pts_tau, pts_nu = np.meshgrid(box_tau, box_nu, indexing='ij')
        pts_tau = np.append(pts_tau.ravel(), tau)
        pts_nu = np.append(pts_nu.ravel(), nu)

        # Hessian of Re(conj(u) Q) for a unit-modulus u
        phase = np.conj(u) / np.abs(u)
        h_tt, h_tn, h_nn = (np.real(phase * cert(pts_tau, pts_nu, m, n)) for m, n in ((2, 0), (1, 1), (0, 2)))
        trace_max = max(trace_max, float(np.max(h_tt + h_nn)))
        det_min = min(det_min, float(np.min(h_tt * h_nn - h_tn ** 2)))

    return trace_max, det_min


def _dbar_norms(cert):
    if not cert.S:
        return 0.0, 1.0
    system = cert.system
    if system is None:
        system = build_interp_system(cert.support, cert.signs, n_half=cert.n_half)
    try:
        inv_norm = system.dbar_inv_norm()
    except np.linalg.LinAlgError:
        inv_norm = np.inf
    return system.dbar_deviation(), inv_norm


def validate_certificate(cert, grid_size=None, near_radius=None):
    """
    Check the interpolation, stationarity and boundedness conditions of ``cert`` on a fine grid.

    Parameters
    ----------
    cert : Certificate

    grid_size : int or None
        Evaluation grid, at least ``16L`` (the default).

    near_radius : float or None
        Infinity-distance radius of the near region around each support point; defaults to ``0.2447 / N``.

    Returns
    -------
    CertificateReport
        Always returned; failures are reported per criterion.

    """
    L, n_half = cert.L, cert.n_half
    grid_size = GRID_FACTOR * L if grid_size is None else int(grid_size)
    if grid_size < GRID_FACTOR * L:
        raise DimensionError(f'grid_size={grid_size} must be at least {GRID_FACTOR}L={GRID_FACTOR * L}.')
    near_radius = NEAR_RADIUS_FACTOR / n_half if near_radius is None else float(near_radius)

    taus = np.array([r.tau for r in cert.support])
    nus = np.array([r.nu for r in cert.support])

    if cert.S:
        interpolation = float(np.abs(cert(taus, nus) - cert.signs).max())
        stationarity = float(max(np.abs(cert(taus, nus, 1, 0)).max(), np.abs(cert(taus, nus, 0, 1)).max()))
        stationarity /= cert.kappa
    else:
        interpolation = stationarity = 0.0

    values = np.abs(cert.poly.on_grid(grid_size))
    slack = 2 * np.pi * n_half * np.sqrt(2) / grid_size
    global_max = float(values.max())

    near = _near_mask(taus, nus, grid_size, near_radius)
    far_values = values[~near]
    far_max = float(far_values.max()) if far_values.size else 0.0

    near_trace_max, near_det_min = _near_curvature(cert, taus, nus, grid_size, near_radius)

    dbar_deviation, dbar_inv_norm = _dbar_norms(cert)

    report = CertificateReport(
        interpolation_residual=interpolation,
        stationarity=stationarity,
        far_max=far_max,
        far_bound=far_max + slack * global_max,
        near_trace_max=near_trace_max,
        near_det_min=near_det_min,
        global_max=global_max,
        global_bound=global_max * (1 + slack),
        dbar_deviation=dbar_deviation,
        dbar_inv_norm=dbar_inv_norm,
        grid_size=grid_size,
        near_radius=near_radius,
        pass_interpolation=interpolation <= INTERPOLATION_TOL,
        pass_stationarity=stationarity <= STATIONARITY_TOL,
        pass_far=far_max <= FAR_BOUND + slack * global_max,
        pass_near=near_trace_max < 0 and near_det_min > 0,
        pass_global=global_max <= 1 + GLOBAL_TOL
    )
    logger.info(
        f'Validated {cert.kind} certificate (S={cert.S}): passed={report.passed}, far_max={far_max:.4f}, '
        f'near_trace_max={near_trace_max:.3e}, near_det_min={near_det_min:.3e}.'
    )
    return report
