"""
Forward models.

The periodic model is ``y_p = sum_j b_j [F_{nu_j} T_{tau_j} x]_p``. The truncated model replaces the periodized
time kernel by the three-term sinc kernel, which is what sampling a band-limited response over a finite window
actually produces:

    ``y~_p = sum_j b_j sum_{l=-N}^{N} D~_N((p - l) / L - tau_j) x_l exp(i 2 pi p nu_j)``.
"""
import logging
from dataclasses import dataclass

import numpy as np

from src.srradar.core.indexing import length, n_half_from_length, sym_indices
from src.srradar.core.kernels import dirichlet, dirichlet_trunc
from src.srradar.core.shifts import tf_shift_columns
from src.srradar.errors import ConfigError, DimensionError, UndefinedInputError
from src.srradar.utils.rng import make_rng

logger = logging.getLogger(__name__)

MODELS = ('periodic', 'truncated')
NOISE_STREAM = 0x6E6F6973


@dataclass(frozen=True)
class NoiseSpec:
    """
    Additive noise at a prescribed signal-to-noise ratio ``10 log10(||y||^2 / ||n||^2)``.
    """
    snr_db: float = np.inf
    seed: int = None

    @property
    def noiseless(self):
        return np.isposinf(self.snr_db)

    def noise_energy(self, signal_energy):
        """
        ``||n||^2`` realizing ``snr_db`` for a signal of energy ``||y||^2``.
        """
        if self.noiseless:
            return 0.0
        return float(signal_energy) * 10 ** (-float(self.snr_db) / 10)


@dataclass(frozen=True, eq=False)
class SampleVec:
    """
    Observed samples ``y_p``, ``p = -N, ..., N``.

    Parameters
    ----------
    samples : np.ndarray, shape (L,)

    model : {'periodic', 'truncated'}
        Forward model the samples come from.

    noise : NoiseSpec or None
        Noise added to the samples, if any.

    noise_energy : float, default 0
        Realized ``||n||^2``.

    """
    samples: np.ndarray
    model: str = 'periodic'
    noise: NoiseSpec = None
    noise_energy: float = 0.0

    def __post_init__(self):
        samples = np.array(self.samples, dtype=complex).reshape(-1)
        n_half_from_length(samples.shape[0])
        if self.model not in MODELS:
            raise ConfigError(f'Unknown sample model {self.model!r}, expected one of {MODELS}.')
        samples.setflags(write=False)
        object.__setattr__(self, 'samples', samples)

    @property
    def L(self):
        return self.samples.shape[0]

    @property
    def n_half(self):
        return (self.L - 1) // 2

    @property
    def snr_db(self):
        return np.inf if self.noise is None else self.noise.snr_db

    def norm(self):
        return float(np.linalg.norm(self.samples))

    def __array__(self, dtype=None, copy=None):
        return np.array(self.samples, dtype=dtype)

    def __len__(self):
        return self.L


def as_samples(y):
    return y.samples if isinstance(y, SampleVec) else np.asarray(y, dtype=complex).reshape(-1)


def _check_scene(scene, n_half):
    if scene.duration is not None and scene.bandwidth is not None:
        L = scene.duration * scene.bandwidth
        if not np.isclose(L, length(n_half)):
            raise DimensionError(f'Scene time-bandwidth product {L} does not match L={length(n_half)}.')


def synthesize_periodic(scene, x, method='shift'):
    """
    Periodic-model samples of ``scene`` probed by ``x``.

    Parameters
    ----------
    scene : TargetScene

    x : ProbingSignal

    method : {'shift', 'dirichlet'}, default 'shift'
        ``'shift'`` applies the fractional shift operators; ``'dirichlet'`` evaluates the equivalent Dirichlet
        double sum ``sum_{k, l} D_N(l/L - tau_j) D_N(k/L - nu_j) x_{p - l} exp(i 2 pi k p / L)``.

    Returns
    -------
    SampleVec

    """
    _check_scene(scene, x.n_half)
    if scene.S == 0:
        return SampleVec(np.zeros(x.L, dtype=complex), model='periodic')

    if method == 'shift':
        y = tf_shift_columns(x, scene.taus, scene.nus) @ scene.amplitudes
    elif method == 'dirichlet':
        L = x.L
        idx = sym_indices(x.n_half)
        d_tau = dirichlet(idx[:, None] / L - scene.taus[None, :], x.n_half)
        d_nu = dirichlet(idx[:, None] / L - scene.nus[None, :], x.n_half)
        modulation = np.exp(2j * np.pi * np.outer(idx, idx) / L)
        y = ((x.circulant() @ d_tau) * (modulation @ d_nu)) @ scene.amplitudes
    else:
        raise ConfigError(f"Unknown synthesis method {method!r}, expected 'shift' or 'dirichlet'.")

    return SampleVec(y, model='periodic')


def synthesize_truncated(scene, x):
    """
    Truncated-model samples ``y~``; the Doppler sum is collapsed to ``exp(i 2 pi p nu_j)`` so the cost is
    ``O(S L^2)``.
    """
    _check_scene(scene, x.n_half)
    L = x.L
    idx = sym_indices(x.n_half)
    lag = (idx[:, None] - idx[None, :]) / L

    y = np.zeros(L, dtype=complex)
    for r, b in zip(scene.shifts, scene.amplitudes):
        y += b * (dirichlet_trunc(lag - r.tau, x.n_half) @ x.samples) * np.exp(2j * np.pi * idx * r.nu)

    return SampleVec(y, model='truncated')


def add_noise(y, spec):
    """
    Add circularly-symmetric gaussian noise scaled so the realized SNR equals ``spec.snr_db``.

    Raises
    ------
    UndefinedInputError
        If ``y`` is zero and a finite SNR is requested.

    """
    if spec.noiseless:
        return y

    energy = y.norm() ** 2
    if energy == 0:
        raise UndefinedInputError(f'Cannot realize SNR={spec.snr_db} dB on a zero signal.')

    rng = make_rng(spec.seed, NOISE_STREAM)
    noise = rng.standard_normal(y.L) + 1j * rng.standard_normal(y.L)
    target = spec.noise_energy(energy)
    noise *= np.sqrt(target) / np.linalg.norm(noise)

    logger.debug(f'Added noise at {spec.snr_db} dB, ||n||^2={target:.3e}.')
    return SampleVec(y.samples + noise, model=y.model, noise=spec, noise_energy=target)
