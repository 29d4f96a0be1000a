import numpy as np

from src.srradar.core.indexing import sym_fft, sym_ifft, sym_indices, reduce_mod1, n_half_from_length


def _as_vector(x):
    v = np.asarray(x, dtype=complex).reshape(-1)
    n_half_from_length(v.shape[0])
    return v


def time_shift(x, tau):
    """
    Fractional time shift ``T_tau x``.

    ``[T_tau x]_p = (1/L) sum_k X_k exp(-i 2 pi k tau) exp(i 2 pi p k / L)`` with ``X = DFT(x)``: a forward DFT,
    a per-bin phase multiply and an inverse DFT. For ``tau = n / L`` this is the circular shift ``x_{p - n}``.

    Parameters
    ----------
    x : ProbingSignal or array_like, shape (L,)
        Sequence to shift.

    tau : float
        Normalized shift, reduced modulo 1.

    Returns
    -------
    np.ndarray, shape (L,)

    """
    v = _as_vector(x)
    n_half = (v.shape[0] - 1) // 2
    k = sym_indices(n_half)
    phase = np.exp(-2j * np.pi * k * reduce_mod1(tau))
    return sym_ifft(sym_fft(v) * phase)


def freq_shift(v, nu):
    """
    Fractional frequency shift ``[F_nu v]_p = v_p exp(i 2 pi p nu)``.
    """
    v = _as_vector(v)
    p = sym_indices((v.shape[0] - 1) // 2)
    return v * np.exp(2j * np.pi * p * reduce_mod1(nu))


def tf_shift(x, tau, nu):
    """
    ``F_nu T_tau x``: the probe delayed by ``tau`` then modulated by ``nu``.
    """
    return freq_shift(time_shift(x, tau), nu)


def tf_shift_columns(x, taus, nus):
    """
    Stack ``F_{nu_j} T_{tau_j} x`` as the columns of an ``L x S`` matrix.

    Parameters
    ----------
    x : ProbingSignal or array_like, shape (L,)

    taus, nus : array_like, shape (S,)

    Returns
    -------
    np.ndarray, shape (L, S)

    """
    v = _as_vector(x)
    n_half = (v.shape[0] - 1) // 2
    taus = reduce_mod1(np.atleast_1d(np.asarray(taus, dtype=float)))
    nus = reduce_mod1(np.atleast_1d(np.asarray(nus, dtype=float)))
    if taus.shape != nus.shape:
        raise ValueError(f'taus and nus must have the same shape, got {taus.shape} and {nus.shape}.')

    k = sym_indices(n_half)
    spectrum = sym_fft(v)[:, None] * np.exp(-2j * np.pi * np.outer(k, taus))
    shifted = sym_ifft(spectrum, axis=0)
    return shifted * np.exp(2j * np.pi * np.outer(k, nus))
