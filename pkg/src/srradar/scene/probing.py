import numpy as np

from src.srradar.core.indexing import check_n_half, length
from src.srradar.core.signal import ProbingSignal
from src.srradar.errors import ConfigError
from src.srradar.utils.rng import make_rng

PROBE_STREAM = 0x70726F62

DISTRIBUTIONS = ('gaussian', 'unit_modulus')


def draw_probing_signal(n_half, dist='gaussian', seed=None):
    """
    Draw a random probing signal with ``E ||x||^2 = 1``.

    Parameters
    ----------
    n_half : int
        Half-length N, L = 2N + 1.

    dist : {'gaussian', 'unit_modulus'}, default 'gaussian'
        ``'gaussian'``: i.i.d. real ``N(0, 1/L)`` samples. ``'unit_modulus'``: ``exp(i phi) / sqrt(L)`` with
        uniform phases.

    seed : int or None
        The draw is a deterministic function of ``(seed, dist, n_half)``.

    Returns
    -------
    ProbingSignal

    """
    n_half = check_n_half(n_half)
    L = length(n_half)
    rng = make_rng(seed, PROBE_STREAM)

    if dist == 'gaussian':
        samples = rng.standard_normal(L) / np.sqrt(L)
    elif dist == 'unit_modulus':
        samples = np.exp(2j * np.pi * rng.uniform(size=L)) / np.sqrt(L)
    else:
        raise ConfigError(f'Unknown probing signal distribution {dist!r}, expected one of {DISTRIBUTIONS}.')

    return ProbingSignal(n_half, samples, distribution=dist, seed=seed)
