import logging
from dataclasses import dataclass

import numpy as np
import pandas as pd

from src.srradar.core.indexing import n_half_from_length
from src.srradar.errors import UndefinedInputError
from src.srradar.scene.probing import draw_probing_signal
from src.srradar.scene.scene import draw_scene
from src.srradar.scene.synthesis import synthesize_periodic, synthesize_truncated
from src.srradar.utils import RunningMeanStd, map_trials

logger = logging.getLogger(__name__)


@dataclass
class DecayStudy:
    """
    Mean relative model error per length and the fitted log-log slope.
    """
    table: pd.DataFrame
    slope: float
    intercept: float


def model_error(scene, x):
    """
    ``||y - y~|| / ||y||`` between the periodic and truncated samples of ``scene``.
    """
    y = synthesize_periodic(scene, x).samples
    y_trunc = synthesize_truncated(scene, x).samples
    return float(np.linalg.norm(y - y_trunc) / np.linalg.norm(y))


def prop2_decay_study(L_list, trials, seed, S=10, threads=1, verbose=False):
    """
    Empirical decay of the truncation error with the number of samples.

    For every ``L`` in ``L_list`` draws ``trials`` gaussian probes and random-sign scenes, records the mean of
    ``||y - y~|| / ||y||`` and fits ``log(error) = slope * log(L) + intercept``.

    Parameters
    ----------
    L_list : sequence of int
        Odd sample counts.

    trials : int
        Trials per length.

    seed : int
        Base seed; trial ``t`` at length ``L`` uses streams ``(seed, L, t)``.

    S : int, default 10
        Targets per scene.

    Returns
    -------
    DecayStudy

    """
    if S < 1:
        raise UndefinedInputError(f'Decay study needs scenes with at least one target, got S={S}.')

    rows = []
    for L in L_list:
        n_half = n_half_from_length(L)

        def trial(t):
            x = draw_probing_signal(n_half, 'gaussian', seed=(seed, L, t))
            scene = draw_scene(S, b_dist='random_sign_real', seed=(seed, L, t))
            return model_error(scene, x)

        stats = RunningMeanStd()
        stats.update(np.array(map_trials(trial, trials, threads=threads, verbose=verbose, desc=f'L={L}')))
        rows.append({'L': L, 'mean_rel_error': float(stats.mean), 'stderr': float(stats.stderr), 'trials': trials})
        logger.info(f'L={L}: mean relative model error {float(stats.mean):.4e}.')

    table = pd.DataFrame(rows)
    if len(table) > 1:
        slope, intercept = np.polyfit(np.log(table['L']), np.log(table['mean_rel_error']), 1)
    else:
        slope, intercept = np.nan, np.nan

    return DecayStudy(table, float(slope), float(intercept))
