"""
Random number streams.

All randomness in srradar flows through :func:`make_rng`, which builds a numpy ``Generator`` on top of the
counter-based Philox-4x64 bit generator. Philox streams are defined by a 256-bit key and a counter and do not
depend on the platform, so a ``(seed, *stream)`` tuple reproduces the same draws everywhere. Independent
streams (one per Monte-Carlo trial, one per purpose) are derived by appending integers to the seed, which keeps
trials order-independent when they run in parallel.
"""
import numpy as np

BIT_GENERATOR = 'Philox'


def make_rng(seed, *stream):
    """
    Create a Philox-backed generator for ``seed`` and an optional stream path.

    Parameters
    ----------
    seed : int, tuple of int, np.random.Generator or None
        Base seed, or a seed path such as ``(seed, trial)``. A ``Generator`` is returned unchanged so callers can
        thread one through.

    *stream : int
        Extra integers (e.g. trial index, purpose tag) identifying an independent sub-stream.

    Returns
    -------
    np.random.Generator

    """
    if isinstance(seed, np.random.Generator):
        return seed

    if seed is None:
        base = [0]
    elif isinstance(seed, (tuple, list)):
        base = [int(s) for s in seed]
    else:
        base = [int(seed)]

    entropy = base + [int(s) for s in stream]
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy)))


