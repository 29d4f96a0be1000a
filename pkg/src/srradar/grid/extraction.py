import logging
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial import cKDTree

from src.srradar.core.indexing import reduce_mod1
from src.srradar.core.shifts import tf_shift_columns
from src.srradar.core.atoms import TFShift
from src.srradar.errors import ConfigError, DimensionError, IllConditionedError, SrrWarning
from src.srradar.scene.scene import TargetScene
from src.srradar.scene.synthesis import as_samples

logger = logging.getLogger(__name__)

MAX_CONDITION = 1e10


@dataclass
class Extraction:
    """
    Targets read off a grid estimate.

    ``complete`` is False when fewer clusters than requested were found.
    """
    scene: TargetScene
    n_clusters: int
    complete: bool = True


@dataclass
class Debiased:
    amplitudes: np.ndarray
    residual: float
    condition: float


def _cluster_cells(m, n, grid):
    points = np.column_stack([m, n]).astype(float)
    if points.shape[0] == 1:
        return np.zeros(1, dtype=int)

    # wrap-around adjacency only along axes the active grid covers completely
    box = [grid.K if grid.n_nu == grid.K else 0, grid.K if grid.n_tau == grid.K else 0]
    if any(box):
        box = [b if b else 4 * grid.K for b in box]
        tree = cKDTree(points, boxsize=box)
    else:
        tree = cKDTree(points)

    pairs = tree.query_pairs(r=1.0 + 1e-9, p=np.inf, output_type='ndarray')
    adjacency = coo_matrix((np.ones(len(pairs)), (pairs[:, 0], pairs[:, 1])), shape=(len(points),) * 2)
    _, labels = connected_components(adjacency, directed=False)
    return labels


def _weighted_center(idx, weights, K):
    ref = idx[0]
    offsets = np.mod(idx - ref + K / 2, K) - K / 2
    return ref + np.sum(weights * offsets) / np.sum(weights)


def extract_targets(est, mode='top_S', S=None, threshold=None, cell_threshold=1e-4):
    """
    Turn a grid estimate into point targets.

    Active cells (``|s| > cell_threshold * max|s|``) whose wrap-around infinity distance is at most ``1/K`` are
    grouped into connected clusters. Each cluster yields one target at the magnitude-weighted centroid of its
    cells, with the summed coefficient as amplitude.

    Parameters
    ----------
    est : GridEstimate

    mode : {'top_S', 'threshold'}, default 'top_S'
        Keep the ``S`` clusters of largest total magnitude, or all clusters whose total magnitude is at least
        ``threshold``.

    Returns
    -------
    Extraction

    """
    if mode == 'top_S':
        if S is None or S < 0:
            raise ConfigError(f"mode='top_S' needs a non-negative S, got {S}.")
    elif mode == 'threshold':
        if threshold is None:
            raise ConfigError("mode='threshold' needs a threshold.")
    else:
        raise ConfigError(f"Unknown extraction mode {mode!r}, expected 'top_S' or 'threshold'.")

    grid = est.grid
    m, n = est.support(cell_threshold)
    if m.size == 0:
        complete = mode == 'threshold' or S == 0
        if not complete:
            warnings.warn(f'Grid estimate is empty; requested {S} targets.', SrrWarning)
        return Extraction(TargetScene.empty(), 0, complete)

    coefs = est.s[m, n]
    weights = np.abs(coefs)
    labels = _cluster_cells(m, n, grid)

    clusters = []
    for label in np.unique(labels):
        members = labels == label
        order = np.lexsort((n[members], m[members]))
        cm, cn, cw = m[members][order], n[members][order], weights[members][order]
        clusters.append({
            'mass': cw.sum(),
            'first': (cm[0], cn[0]),
            'm': _weighted_center(cm, cw, grid.K),
            'n': _weighted_center(cn, cw, grid.K),
            'b': coefs[members].sum()
        })

    clusters.sort(key=lambda c: (-c['mass'], c['first']))
    if mode == 'top_S':
        chosen = clusters[:S]
        complete = len(clusters) >= S
        if not complete:
            warnings.warn(f'Found {len(clusters)} clusters but {S} targets were requested.', SrrWarning)
    else:
        chosen = [c for c in clusters if c['mass'] >= threshold]
        complete = True

    if not chosen:
        return Extraction(TargetScene.empty(), len(clusters), complete)

    taus = reduce_mod1(np.array([c['n'] for c in chosen]) / grid.K)
    nus = reduce_mod1(np.array([c['m'] for c in chosen]) / grid.K)
    logger.debug(f'Extracted {len(chosen)} of {len(clusters)} clusters.')
    return Extraction(TargetScene.from_arrays(taus, nus, [c['b'] for c in chosen]), len(clusters), complete)


def debias(y, x, shifts):
    """
    Least-squares amplitudes ``b`` minimizing ``||y - sum_j b_j F_{nu_j} T_{tau_j} x||``.

    Parameters
    ----------
    y : SampleVec or array_like

    x : ProbingSignal

    shifts : sequence of TFShift or TargetScene

    Returns
    -------
    Debiased

    Raises
    ------
    IllConditionedError
        If the condition number of the shifted-probe matrix exceeds ``1e10``.

    """
    y = as_samples(y)
    if isinstance(shifts, TargetScene):
        shifts = shifts.shifts
    shifts = [r if isinstance(r, TFShift) else TFShift(*r) for r in shifts]

    if not shifts:
        return Debiased(np.zeros(0, dtype=complex), float(np.linalg.norm(y)), 1.0)
    if len(shifts) > x.L:
        raise DimensionError(f'Cannot debias {len(shifts)} shifts with only L={x.L} samples.')

    columns = tf_shift_columns(x, [r.tau for r in shifts], [r.nu for r in shifts])
    condition = float(np.linalg.cond(columns))
    if not condition <= MAX_CONDITION:
        raise IllConditionedError(f'Shifted probes are ill-conditioned (cond={condition:.3e}).', condition=condition)

    amplitudes, *_ = np.linalg.lstsq(columns, y, rcond=None)
    residual = float(np.linalg.norm(y - columns @ amplitudes))
    return Debiased(amplitudes, residual, condition)
