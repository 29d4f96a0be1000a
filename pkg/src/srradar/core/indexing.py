"""
Symmetric index conventions.

Length-L objects (L = 2N + 1) are indexed by ``p = -N, ..., N`` and stored in natural order, so array position
``i`` holds index ``p = i - N``. DFT bins follow the same convention: ``sym_fft(v)[k + N] = sum_p v_p
exp(-i 2 pi p k / L)``. Length-L^2 objects indexed by ``(k, l)`` are the row-major flattening of an ``L x L``
array with ``k`` as the outer (row) index.
"""
import numpy as np

from src.srradar.errors import DimensionError


def check_n_half(n_half):
    n_half = int(n_half)
    if n_half < 1:
        raise DimensionError(f'n_half must be >= 1, got {n_half}.')
    return n_half


def length(n_half):
    return 2 * int(n_half) + 1


def n_half_from_length(L):
    L = int(L)
    if L < 3 or L % 2 == 0:
        raise DimensionError(f'L must be an odd integer >= 3, got {L}.')
    return (L - 1) // 2


def sym_indices(n_half):
    return np.arange(-n_half, n_half + 1)


def wrap_index(idx, n_half):
    """
    Map any integer index to its representative in ``[-N, N]`` modulo L.
    """
    L = length(n_half)
    return (np.asarray(idx) + n_half) % L - n_half


def sym_fft(v, axis=-1):
    return np.fft.fftshift(np.fft.fft(np.fft.ifftshift(v, axes=axis), axis=axis), axes=axis)


def sym_ifft(v, axis=-1):
    return np.fft.fftshift(np.fft.ifft(np.fft.ifftshift(v, axes=axis), axis=axis), axes=axis)


def sym_fft2(a):
    return np.fft.fftshift(np.fft.fft2(np.fft.ifftshift(a)))


def sym_ifft2(a):
    return np.fft.fftshift(np.fft.ifft2(np.fft.ifftshift(a)))


def reduce_mod1(t):
    """
    Reduce to [0, 1), snapped to 15 decimals so that e.g. 1.2 and 0.2 reduce to the same value. Values that round to
    1.0 are mapped to 0.0.
    """
    r = np.round(np.mod(t, 1.0), 15)
    return np.where(r >= 1.0, 0.0, r) if np.ndim(r) else (0.0 if r >= 1.0 else float(r))


def wrap_distance(a, b):
    """
    Wrap-around distance on the unit circle, e.g. ``|5/6 - 1/6| = 1/3``.
    """
    d = np.abs(np.mod(np.asarray(a) - np.asarray(b), 1.0))
    return np.minimum(d, 1.0 - d)


def wrap_difference(a, b):
    """
    Signed wrap-around difference ``a - b`` in [-1/2, 1/2).
    """
    return np.mod(np.asarray(a) - np.asarray(b) + 0.5, 1.0) - 0.5
