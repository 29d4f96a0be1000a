import numpy as np

from src.srradar.core.indexing import length, reduce_mod1, sym_indices
from src.srradar.core.operators import gabor_adjoint
from src.srradar.core.shifts import tf_shift_columns
from src.srradar.errors import DimensionError
from src.srradar.scene.scene import TargetScene
from src.srradar.scene.synthesis import as_samples


def matched_filter(y, x, S):
    """
    Classical matched-filter estimate on the natural ``(1/L, 1/L)`` grid.

    Correlates ``y`` with every ``F_{k/L} T_{l/L} x`` through the Gabor adjoint, keeps the ``S`` largest
    correlations (ties broken by grid position) and refits the amplitudes by least squares on those columns.

    Parameters
    ----------
    y : SampleVec or array_like, shape (L,)

    x : ProbingSignal

    S : int
        Number of targets to report, ``S <= L^2``.

    Returns
    -------
    TargetScene

    """
    L = x.L
    S = int(S)
    if not 0 <= S <= L * L:
        raise DimensionError(f'S must lie in [0, L^2] = [0, {L * L}], got {S}.')
    if S == 0:
        return TargetScene.empty()

    y = as_samples(y)
    magnitude = np.abs(gabor_adjoint(x, y))
    flat = np.arange(magnitude.size)
    order = np.lexsort((flat, -magnitude))[:S]

    idx = sym_indices(x.n_half)
    k, l = np.unravel_index(order, (L, L))
    taus = reduce_mod1(idx[l] / length(x.n_half))
    nus = reduce_mod1(idx[k] / length(x.n_half))

    columns = tf_shift_columns(x, taus, nus)
    amplitudes, *_ = np.linalg.lstsq(columns, y, rcond=None)
    return TargetScene.from_arrays(taus, nus, amplitudes)
