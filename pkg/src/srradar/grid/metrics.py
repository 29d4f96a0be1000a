import numpy as np
from scipy.optimize import linear_sum_assignment

from src.srradar.core.indexing import length, wrap_difference
from src.srradar.errors import UndefinedInputError


def resolution_cost(truth, est, n_half):
    """
    ``L * sqrt(dtau^2 + dnu^2)`` with wrap-around differences, for every (truth, estimate) pair.
    """
    L = length(n_half)
    d_tau = wrap_difference(truth.taus[:, None], est.taus[None, :])
    d_nu = wrap_difference(truth.nus[:, None], est.nus[None, :])
    return L * np.hypot(d_tau, d_nu)


def resolution_error(truth, est, n_half):
    """
    Average resolution error of ``est`` against ``truth`` in units of the natural grid spacing ``1/L``.

    Targets are paired by a minimum-cost one-to-one assignment (Hungarian algorithm) on the wrap-around
    Euclidean cost; each truth target left unmatched counts as the worst case ``L sqrt(2) / 2``.
    """
    if truth.S == 0:
        raise UndefinedInputError('Resolution error needs a non-empty true scene.')

    worst = length(n_half) * np.sqrt(2) / 2
    if est.S == 0:
        return float(worst)

    cost = resolution_cost(truth, est, n_half)
    rows, cols = linear_sum_assignment(cost)
    unmatched = truth.S - len(rows)
    return float((cost[rows, cols].sum() + unmatched * worst) / truth.S)
