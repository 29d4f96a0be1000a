import logging
from warnings import warn

import cvxpy as cp

logger = logging.getLogger(__name__)

SOLVER_ERRS = cp.error.SolverError


def candidate_solvers(solver=None, conic_order=('CLARABEL', 'SCS')):
    """
    Installed cvxpy solvers to try in order, starting with ``solver`` if given.
    """
    solvers = [] if solver is None else [solver]
    installed = cp.installed_solvers()
    solvers.extend(s for s in conic_order if s in installed and s not in solvers)
    if not solvers:
        raise cp.error.SolverError(f'None of the solvers {conic_order} is installed.')
    return solvers


def solve_with_fallback(problem, solvers, **solve_kwargs):
    """
    Solve ``problem`` with the first solver in ``solvers`` that does not fail.

    Returns
    -------
    str
        Name of the solver that succeeded.

    """
    for solver in solvers:
        try:
            problem.solve(solver=solver, **solve_kwargs.get(solver, {}))
        except SOLVER_ERRS as e:
            logger.debug(f'Solver {solver} failed: {e}')
            continue

        if problem.status in (cp.OPTIMAL, cp.OPTIMAL_INACCURATE):
            if problem.status == cp.OPTIMAL_INACCURATE:
                warn(f'Solver {solver} returned an inaccurate solution.')
            return solver

        if problem.status == cp.INFEASIBLE:
            warn('Infeasible problem')

    raise cp.error.SolverError(f'Unable to solve problem with any of the solvers: {solvers}.')
