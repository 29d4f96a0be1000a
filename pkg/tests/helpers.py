import numpy as np

from src.srradar.core import ProbingSignal
from src.srradar.utils import make_rng


def random_probe(n_half, seed=0, real=False):
    rng = make_rng(seed)
    L = 2 * n_half + 1
    samples = rng.standard_normal(L)
    if not real:
        samples = samples + 1j * rng.standard_normal(L)
    return ProbingSignal(n_half, samples / np.sqrt(L))


def random_complex(shape, seed=0):
    rng = make_rng(seed)
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
