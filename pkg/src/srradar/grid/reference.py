import logging

import cvxpy as cp
import numpy as np

from src.srradar.core.operators import dictionary_matrix
from src.srradar.grid.solver import GridEstimate, check_inputs
from src.srradar.utils.cvx import candidate_solvers, solve_with_fallback

logger = logging.getLogger(__name__)


def solve_reference(y, x, grid, delta=0.0, solver=None):
    """
    Solve the fine-grid l1 program with cvxpy on the dense dictionary (``K <= 64``).

    Used as an independent oracle for :func:`solve_bpdn`.
    """
    y = check_inputs(y, x, grid)
    R = dictionary_matrix(x, grid)

    s = cp.Variable(R.shape[1], complex=True)
    if delta > 0:
        constraints = [cp.norm(R @ s - y, 2) <= np.sqrt(delta)]
    else:
        constraints = [R @ s == y]

    problem = cp.Problem(cp.Minimize(cp.norm1(s)), constraints)
    used = solve_with_fallback(problem, candidate_solvers(solver))

    coefs = np.asarray(s.value).reshape(grid.shape)
    residual = float(np.linalg.norm(y - R @ coefs.ravel()))
    logger.info(f'Reference solve with {used}: objective={problem.value:.8g}, residual={residual:.3e}.')

    return GridEstimate(coefs, grid, float(delta), 0, residual, float(np.abs(coefs).sum()), True)
