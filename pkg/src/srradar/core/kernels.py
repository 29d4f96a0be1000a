import numpy as np

from src.srradar.core.indexing import length, sym_indices

SINGULARITY_TOL = 1e-8


def dirichlet(t, n_half):
    """
    Dirichlet kernel ``D_N(t) = (1/L) sum_{k=-N}^{N} exp(i 2 pi t k)``.

    Evaluated in closed form ``sin(L pi t) / (L sin(pi t))``; where ``|sin(pi t)| < 1e-8`` the L-term sum is
    used instead. The kernel is real and 1-periodic.

    Parameters
    ----------
    t : float or array_like
        Evaluation points.

    n_half : int
        Half-length N, L = 2N + 1.

    Returns
    -------
    float or np.ndarray

    """
    L = length(n_half)
    t = np.asarray(t, dtype=float)
    s = np.sin(np.pi * t)
    near = np.abs(s) < SINGULARITY_TOL

    with np.errstate(divide='ignore', invalid='ignore'):
        out = np.sin(L * np.pi * t) / (L * s)

    if np.any(near):
        k = sym_indices(n_half)
        t_near = np.atleast_1d(t[near]) if t.ndim else np.atleast_1d(t)
        direct = np.cos(2 * np.pi * np.outer(t_near, k)).sum(axis=1) / L
        if t.ndim:
            out[near] = direct
        else:
            out = direct[0]

    return out if np.ndim(out) else float(out)


def dirichlet_trunc(t, n_half):
    """
    Truncated Dirichlet kernel ``sum_{k=-1}^{1} sinc(L (t - k))``.
    """
    L = length(n_half)
    t = np.asarray(t, dtype=float)
    out = np.sinc(L * (t + 1)) + np.sinc(L * t) + np.sinc(L * (t - 1))
    return out if np.ndim(out) else float(out)
