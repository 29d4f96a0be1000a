"""
Solvers for the dual semidefinite program.

The default backend is ADMM on the splitting ``M(q, Q) = Z``, ``Z >= 0``, where ``M`` is the bordered matrix of
:meth:`SdpProblem.bordered`. Each iteration projects onto the trace constraints (closed form, one correction per
constraint group), updates ``q`` in closed form using ``B^H B = beta I``, and projects onto the PSD cone with a
Hermitian eigendecomposition. The returned pair is made exactly feasible by :func:`restore_feasibility`.
"""
import logging
import warnings
from dataclasses import dataclass, field

import cvxpy as cp
import numpy as np
import scipy.sparse as sp

from src.srradar.errors import CapacityError, ConfigError, ConvergenceWarning
from src.srradar.sdp.problem import MAX_SDP_LENGTH
from src.srradar.utils import ModularLogger
from src.srradar.utils.cvx import candidate_solvers, solve_with_fallback

logger = logging.getLogger(__name__)

PSD_TOL = 1e-7
TRACE_TOL = 1e-6

BACKENDS = ('admm', 'cvxpy')


@dataclass(frozen=True)
class SdpOptions:
    """
    Parameters of the conic solvers.

    Parameters
    ----------
    max_iter : int, default 20000

    tol : float, default 1e-6
        Stopping tolerance on the relative primal and dual residuals.

    rho : float, default 1.0
        Initial penalty.

    balance_every : int, default 10
        Residual balancing period; ``rho`` is doubled or halved when one residual exceeds ``balance_factor`` times
        the other.

    balance_factor : float, default 10.0

    log_every : int, default 10

    solver : str or None
        cvxpy solver for the ``'cvxpy'`` backend.

    """
    max_iter: int = 20000
    tol: float = 1e-6
    rho: float = 1.0
    balance_every: int = 10
    balance_factor: float = 10.0
    log_every: int = 10
    solver: str = None

    def __post_init__(self):
        if not self.tol > 0 or not self.rho > 0:
            raise ConfigError(f'tol and rho must be positive, got tol={self.tol}, rho={self.rho}.')
        if self.max_iter < 1 or self.log_every < 1 or self.balance_every < 1:
            raise ConfigError('max_iter, log_every and balance_every must be positive.')
        if not self.balance_factor > 1:
            raise ConfigError(f'balance_factor must exceed 1, got {self.balance_factor}.')


@dataclass(eq=False)
class ConicSolution:
    """
    Dual pair ``(q, Q)`` with diagnostics recomputed from the returned values.

    ``min_eig`` is the smallest eigenvalue of the bordered matrix, ``min_eig_Q`` that of ``Q`` and
    ``trace_residual`` the largest violation of the trace constraints.
    """
    q: np.ndarray
    Q: np.ndarray
    objective: float
    primal_residual: float
    dual_residual: float
    iterations: int
    converged: bool
    min_eig: float = 0.0
    min_eig_Q: float = 0.0
    trace_residual: float = 0.0
    backend: str = 'admm'
    log: ModularLogger = field(default_factory=ModularLogger)

    @property
    def feasible(self):
        return (self.min_eig >= -PSD_TOL and self.min_eig_Q >= -PSD_TOL
                and self.trace_residual <= TRACE_TOL)

    def __repr__(self):
        return (f'ConicSolution(backend={self.backend}, objective={self.objective:.6g}, '
                f'iterations={self.iterations}, converged={self.converged}, min_eig={self.min_eig:.2e}, '
                f'trace_residual={self.trace_residual:.2e})')


def constraint_report(problem, q, Q):
    """
    Recompute the constraint diagnostics of ``(q, Q)`` from scratch.

    Returns
    -------
    dict
        ``min_eig`` (bordered matrix), ``min_eig_Q`` and ``trace_residual``.

    """
    Q = 0.5 * (Q + Q.conj().T)
    M = problem.bordered(q, Q)
    return {
        'min_eig': float(np.linalg.eigvalsh(M)[0]),
        'min_eig_Q': float(np.linalg.eigvalsh(Q)[0]),
        'trace_residual': float(np.abs(problem.trace_sums(Q) - problem.trace_targets).max())
    }


def restore_feasibility(problem, q, Q):
    """
    Rescale a pair satisfying the trace constraints into one whose bordered matrix is PSD.

    With ``eps = max(0, -lambda_min(M(q, Q)))``, the pair ``Q' = (Q + eps I) / (1 + eps L^2)`` and
    ``q' = q / sqrt((1 + eps L^2) (1 + eps))`` is a congruence of ``M + eps I`` and keeps the trace constraints.
    """
    Q = 0.5 * (Q + Q.conj().T)
    eps = max(0.0, -float(np.linalg.eigvalsh(problem.bordered(q, Q))[0]))
    if eps == 0:
        return q, Q, 0.0

    n = problem.n_var
    # a hair above eps so rounding in the rescaling cannot reintroduce a negative eigenvalue
    eps *= 1 + 1e-8
    Q = (Q + eps * np.eye(n)) / (1 + eps * n)
    q = q / np.sqrt((1 + eps * n) * (1 + eps))
    logger.debug(f'Feasibility restoration with eps={eps:.3e}.')
    return q, Q, eps


def _psd_projection(H):
    w, V = np.linalg.eigh(0.5 * (H + H.conj().T))
    return (V * np.maximum(w, 0.0)) @ V.conj().T


def _shrink(u, t):
    norm = np.linalg.norm(u)
    if norm <= t:
        return np.zeros_like(u)
    return u * (1 - t / norm)


def solve_sdp(problem, opts=None, backend='admm'):
    """
    Solve the dual program.

    Parameters
    ----------
    problem : SdpProblem

    opts : SdpOptions or None

    backend : {'admm', 'cvxpy'}

    Returns
    -------
    ConicSolution
        ``converged=False`` (with a :class:`ConvergenceWarning`) if ``opts.max_iter`` was exhausted.

    Raises
    ------
    CapacityError
        If ``L > 31``.

    """
    opts = opts or SdpOptions()
    if problem.L > MAX_SDP_LENGTH:
        raise CapacityError(f'The dual program is limited to L <= {MAX_SDP_LENGTH}, got L={problem.L}.')
    if backend not in BACKENDS:
        raise ConfigError(f"Unknown backend '{backend}', expected one of {BACKENDS}.")

    if not np.any(problem.y):
        q, Q = problem.trivially_feasible()
        logger.info('Zero samples: returning q = 0.')
        return _finalize(problem, q, Q, 0.0, 0.0, 0, True, backend, ModularLogger())

    if backend == 'cvxpy':
        return _solve_cvxpy(problem, opts)
    return _solve_admm(problem, opts)


def _solve_admm(problem, opts):
    n = problem.n_var
    y = problem.y
    beta = problem.beta
    rho = opts.rho
    log = ModularLogger(every=opts.log_every, horizon=opts.max_iter)

    q, Q = problem.trivially_feasible()
    Z = problem.bordered(q, Q)
    U = np.zeros_like(Z)

    converged = False
    primal_res = dual_res = np.inf
    k = 0
    for k in range(1, opts.max_iter + 1):
        V = Z - U
        Q = problem.project_trace(0.5 * (V[:n, :n] + V[:n, :n].conj().T))
        v = 0.5 * (V[:n, n] + V[n, :n].conj())
        u = (problem.coeff_adjoint(v) + y / (2 * rho)) / beta
        q = _shrink(u, problem.delta / (2 * rho * beta))

        A = problem.bordered(q, Q)
        Z_prev = Z
        Z = _psd_projection(A + U)
        U = U + A - Z

        primal_res = np.linalg.norm(A - Z) / max(1.0, np.linalg.norm(A), np.linalg.norm(Z))
        dual_res = rho * np.linalg.norm(Z - Z_prev) / max(1.0, rho * np.linalg.norm(U))

        converged = bool(max(primal_res, dual_res) <= opts.tol)
        if converged or log.due(k):
            log.log(iteration=k, objective=problem.objective(q), primal_residual=primal_res,
                    dual_residual=dual_res, rho=rho)
        if converged:
            break

        if k % opts.balance_every == 0:
            if primal_res > opts.balance_factor * dual_res:
                rho *= 2.0
                U /= 2.0
            elif dual_res > opts.balance_factor * primal_res:
                rho /= 2.0
                U *= 2.0

    if not converged:
        warnings.warn(f'ADMM did not converge in {opts.max_iter} iterations (primal residual={primal_res:.3e}, '
                      f'dual residual={dual_res:.3e}).', ConvergenceWarning)

    return _finalize(problem, q, Q, primal_res, dual_res, k, converged, 'admm', log)


def _solve_cvxpy(problem, opts):
    n = problem.n_var
    L = problem.L

    M = cp.Variable((n + 1, n + 1), hermitian=True)
    q = cp.Variable(L, complex=True)

    # trace constraints as one sparse linear map of the column-major vectorized Q block
    rows = problem.groups.ravel(order='F')
    selector = sp.csr_matrix((np.ones(n * n), (rows, np.arange(n * n))), shape=(problem.n_constraints, n * n))

    constraints = [
        M >> 0,
        M[n, n] == 1,
        M[:n, n] == problem.coeff_matrix() @ q,
        selector @ cp.vec(M[:n, :n]) == problem.trace_targets
    ]
    objective = cp.real(problem.y.conj() @ q)
    if problem.noisy:
        objective = objective - problem.delta * cp.norm(q, 2)

    prob = cp.Problem(cp.Maximize(objective), constraints)
    solver = solve_with_fallback(prob, candidate_solvers(opts.solver, conic_order=('CLARABEL', 'SCS')))
    logger.info(f'cvxpy dual program solved with {solver}: status={prob.status}, value={prob.value:.6g}.')

    log = ModularLogger()
    log.log(iteration=1, objective=float(prob.value))
    return _finalize(problem, np.asarray(q.value), np.asarray(M.value)[:n, :n], 0.0, 0.0, 1,
                     prob.status == cp.OPTIMAL, f'cvxpy:{solver}', log)


def _finalize(problem, q, Q, primal_res, dual_res, iterations, converged, backend, log):
    Q = problem.project_trace(0.5 * (Q + Q.conj().T))
    q, Q, eps = restore_feasibility(problem, q, Q)
    report = constraint_report(problem, q, Q)
    objective = problem.objective(q)

    logger.info(f'solve_sdp[{backend}]: L={problem.L}, iterations={iterations}, objective={objective:.6g}, '
                f'restoration eps={eps:.2e}, min_eig={report["min_eig"]:.2e}, converged={converged}.')

    return ConicSolution(q, Q, objective, float(primal_res), float(dual_res), iterations, converged,
                         backend=backend, log=log, **report)
