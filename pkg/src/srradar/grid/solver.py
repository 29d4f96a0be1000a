"""
Fine-grid basis pursuit.

Solves ``minimize ||s||_1 subject to ||y - R s||_2^2 <= delta`` (``delta = 0`` is exact basis pursuit) with the
first-order primal-dual method of Chambolle and Pock applied to ``G(s) + F(R s)``, ``G = ||.||_1`` and ``F`` the
indicator of the ball of radius ``sqrt(delta)`` around ``y``. Only ``R`` and ``R^H`` products are needed.
"""
import logging
import warnings
from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from src.srradar.core.operators import dictionary_operator
from src.srradar.errors import ConfigError, ConvergenceWarning, DimensionError
from src.srradar.scene.synthesis import as_samples
from src.srradar.utils import ModularLogger

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SolverOptions:
    """
    Parameters of the primal-dual iterations.

    Parameters
    ----------
    max_iter : int, default 20000

    primal_step, dual_step : float or None
        Step sizes ``tau`` and ``sigma``. By default both are ``0.99 / ||R||`` with ``||R||`` from 50 power
        iterations; when set they must satisfy ``tau * sigma * ||R||^2 < 1``.

    tol_feas : float, default 1e-6
        Relative feasibility tolerance on ``||y - R s||``.

    tol_obj : float, default 1e-6
        Relative duality-gap tolerance.

    delta : float, default 0
        Squared residual budget of the noisy program.

    polish : bool, default True
        Refit the detected support by least squares after the iterations.

    polish_threshold : float, default 1e-3
        Entries above ``polish_threshold * max|s|`` form the refit support.

    log_every : int, default 10
        Diagnostics are recorded every ``log_every`` iterations.

    """
    max_iter: int = 20000
    primal_step: float = None
    dual_step: float = None
    tol_feas: float = 1e-6
    tol_obj: float = 1e-6
    delta: float = 0.0
    polish: bool = True
    polish_threshold: float = 1e-3
    log_every: int = 10
    norm_iter: int = 50

    def __post_init__(self):
        for name in ('tol_feas', 'tol_obj', 'polish_threshold'):
            if not getattr(self, name) > 0:
                raise ConfigError(f'{name} must be positive, got {getattr(self, name)}.')
        if self.delta < 0:
            raise ConfigError(f'delta must be non-negative, got {self.delta}.')
        if self.max_iter < 1 or self.log_every < 1:
            raise ConfigError('max_iter and log_every must be positive.')


@dataclass(eq=False)
class GridEstimate:
    """
    Coefficients on the active grid with solver diagnostics.

    ``s`` has shape ``grid.shape``; ``residual`` is ``||y - R s||_2`` recomputed from the returned ``s``.
    """
    s: np.ndarray
    grid: object
    delta: float
    iterations: int
    residual: float
    objective: float
    converged: bool
    polished: bool = False
    log: ModularLogger = field(default_factory=ModularLogger)

    def support(self, rel_threshold=1e-4):
        """
        Grid indices ``(m, n)`` of entries above ``rel_threshold * max|s|``.
        """
        magnitude = np.abs(self.s)
        peak = magnitude.max(initial=0.0)
        if peak == 0:
            return np.zeros(0, dtype=int), np.zeros(0, dtype=int)
        return np.nonzero(magnitude > rel_threshold * peak)

    def nonzeros(self, rel_threshold=1e-4):
        m, n = self.support(rel_threshold)
        tau, nu = self.grid.shifts(m, n)
        return pd.DataFrame({'m': m, 'n': n, 'tau': tau, 'nu': nu, 's': self.s[m, n]})

    def __repr__(self):
        return (f'GridEstimate(K={self.grid.K}, shape={self.grid.shape}, objective={self.objective:.6g}, '
                f'residual={self.residual:.3e}, iterations={self.iterations}, converged={self.converged})')


def soft_threshold(v, t):
    """
    Complex soft thresholding: shrink magnitudes by ``t`` and keep phases.
    """
    magnitude = np.abs(v)
    with np.errstate(divide='ignore', invalid='ignore'):
        scale = np.where(magnitude > t, 1 - t / magnitude, 0.0)
    return v * scale


def _project_ball(z, center, radius):
    d = z - center
    norm = np.linalg.norm(d)
    if norm <= radius:
        return z
    return center + d * (radius / norm)


def _feasibility_slack(radius, y_norm, tol_feas):
    # ||y - R s||^2 <= delta (1 + tol) when delta > 0, ||y - R s|| <= tol ||y|| otherwise
    if radius > 0:
        return radius * (np.sqrt(1 + tol_feas) - 1)
    return tol_feas * y_norm


def check_inputs(y, x, grid):
    y = as_samples(y)
    if y.shape[0] != x.L:
        raise DimensionError(f'y has {y.shape[0]} samples but the probe has L={x.L}.')
    if grid.n_half != x.n_half:
        raise DimensionError(f'Grid built for N={grid.n_half} but the probe has N={x.n_half}.')
    return y


def solve_bp(y, x, grid, opts=None):
    """
    Basis pursuit ``minimize ||s||_1 subject to y = R s``.
    """
    opts = opts or SolverOptions()
    return solve_bpdn(y, x, grid, 0.0, opts)


def solve_bpdn(y, x, grid, delta=None, opts=None):
    """
    Noise-aware basis pursuit ``minimize ||s||_1 subject to ||y - R s||_2^2 <= delta``.

    Parameters
    ----------
    y : SampleVec or array_like, shape (L,)

    x : ProbingSignal

    grid : GridSpec

    delta : float or None
        Squared residual budget; defaults to ``opts.delta``.

    opts : SolverOptions or None

    Returns
    -------
    GridEstimate
        ``converged=False`` (with a :class:`ConvergenceWarning`) if the tolerances were not met in
        ``opts.max_iter`` iterations.

    """
    opts = opts or SolverOptions()
    delta = opts.delta if delta is None else float(delta)
    if delta < 0:
        raise ConfigError(f'delta must be non-negative, got {delta}.')

    y = check_inputs(y, x, grid)
    op = dictionary_operator(x, grid.K, grid.n_tau, grid.n_nu)
    radius = np.sqrt(delta)
    y_norm = np.linalg.norm(y)
    log = ModularLogger(every=opts.log_every, horizon=opts.max_iter)

    if y_norm ** 2 <= delta:
        logger.info('Zero coefficients are feasible; skipping iterations.')
        return GridEstimate(grid.zeros(), grid, delta, 0, y_norm, 0.0, True, log=log)

    norm = op.norm_estimate(n_iter=opts.norm_iter)
    tau = opts.primal_step or 0.99 / norm
    sigma = opts.dual_step or 0.99 / norm
    if tau * sigma * norm ** 2 >= 1:
        warnings.warn(f'Step sizes tau={tau}, sigma={sigma} violate tau*sigma*||R||^2 < 1 for ||R||={norm:.4g}.',
                      ConvergenceWarning)

    s = grid.zeros()
    p = np.zeros_like(y)
    Rs = np.zeros_like(y)
    Rs_bar = np.zeros_like(y)
    s_avg = grid.zeros()
    feas_tol = _feasibility_slack(radius, y_norm, opts.tol_feas)

    converged = False
    lower_bound = -np.inf
    k = 0
    for k in range(1, opts.max_iter + 1):
        v = p + sigma * Rs_bar
        p = v - sigma * _project_ball(v / sigma, y, radius)

        Rh_p = op.adjoint(p)
        s_new = soft_threshold(s - tau * Rh_p, tau)
        s_bar = 2 * s_new - s
        Rs_bar = op.apply(s_bar)
        Rs = 0.5 * (Rs_bar + Rs)
        s = s_new
        s_avg += (s - s_avg) / k

        if not log.due(k):
            continue

        objective = np.abs(s).sum()
        infeasibility = max(np.linalg.norm(y - Rs) - radius, 0.0)
        dual_scale = max(1.0, np.abs(Rh_p).max())
        dual_objective = -(np.vdot(p, y).real + radius * np.linalg.norm(p)) / dual_scale
        gap = abs(objective - dual_objective)
        # the rescaled dual point satisfies ||R^H p||_inf <= 1, so every dual objective bounds the optimum
        lower_bound = max(lower_bound, dual_objective)

        log.log(iteration=k, objective=objective, ergodic_objective=np.abs(s_avg).sum(),
                infeasibility=infeasibility, dual_objective=dual_objective, lower_bound=lower_bound, gap=gap)

        if infeasibility <= feas_tol and gap <= opts.tol_obj * max(1.0, objective):
            converged = True
            break

    dual_objective = -(np.vdot(p, y).real + radius * np.linalg.norm(p)) / max(1.0, np.abs(Rh_p).max())
    polished = False
    if opts.polish:
        s, polished, certified = _polish(s, y, op, radius, opts, dual_objective)
        converged = converged or certified

    residual = float(np.linalg.norm(y - op.apply(s)))
    objective = float(np.abs(s).sum())

    if not converged:
        warnings.warn(f'Primal-dual iterations did not converge in {opts.max_iter} iterations '
                      f'(gap={log.last("gap"):.3e}, infeasibility={log.last("infeasibility"):.3e}).',
                      ConvergenceWarning)

    logger.info(f'solve_bpdn: K={grid.K}, iterations={k}, objective={objective:.6g}, residual={residual:.3e}, '
                f'converged={converged}, polished={polished}.')

    return GridEstimate(s, grid, delta, k, residual, objective, converged, polished=polished, log=log)


def _polish(s, y, op, radius, opts, dual_objective):
    """
    Least-squares refit on the detected support.

    The refit is kept when it is feasible and either no worse than the iterate in l1 norm or within the gap
    tolerance of the dual bound; in the latter case it is certified optimal.
    """
    magnitude = np.abs(s)
    peak = magnitude.max(initial=0.0)
    if peak == 0:
        return s, False, False

    m, n = np.nonzero(magnitude > opts.polish_threshold * peak)
    if m.size > op.L:
        logger.debug(f'Skipping polish: support of size {m.size} exceeds L={op.L}.')
        return s, False, False

    columns = op.columns(m, n)
    coefs, *_ = np.linalg.lstsq(columns, y, rcond=None)
    residual = np.linalg.norm(y - columns @ coefs)
    feasible = residual - radius <= _feasibility_slack(radius, np.linalg.norm(y), opts.tol_feas)
    objective = np.abs(coefs).sum()
    certified = objective - dual_objective <= opts.tol_obj * max(1.0, objective)
    no_worse = objective <= np.abs(s).sum()

    if not (feasible and (certified or no_worse)):
        logger.debug(f'Polish rejected: residual={residual:.3e}, objective={objective:.6g}, '
                     f'dual bound={dual_objective:.6g}.')
        return s, False, False

    polished = np.zeros_like(s)
    polished[m, n] = coefs
    return polished, True, bool(certified)
