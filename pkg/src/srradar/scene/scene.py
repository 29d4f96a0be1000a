import logging
from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from src.srradar.core.atoms import TFShift
from src.srradar.core.indexing import reduce_mod1, wrap_difference, wrap_distance
from src.srradar.errors import CapacityError, ConfigError, UndefinedInputError
from src.srradar.utils.rng import make_rng

logger = logging.getLogger(__name__)

MAX_REJECTIONS = 100_000
SCENE_STREAM = 0x7363656E

AMPLITUDE_DISTRIBUTIONS = ('unit_disc', 'random_sign_real', 'unit_modulus')
DISTINCT_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class TargetScene:
    """
    Point scatterers ``(tau_j, nu_j, b_j)`` on the unit torus.

    Parameters
    ----------
    shifts : sequence of TFShift or (tau, nu) pairs
        Pairwise distinct time-frequency shifts.

    amplitudes : array_like of complex, shape (S,)
        Attenuation coefficients ``b_j``.

    bandwidth, duration : float or None
        Optional physical bandwidth B (Hz) and duration T (s) the normalized shifts refer to.

    min_sep : float or None
        Separation the scene was drawn with, if any.

    """
    shifts: tuple = ()
    amplitudes: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=complex))
    bandwidth: float = None
    duration: float = None
    min_sep: float = None

    def __post_init__(self):
        shifts = tuple(r if isinstance(r, TFShift) else TFShift(*r) for r in self.shifts)
        amplitudes = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if amplitudes.shape[0] != len(shifts):
            raise UndefinedInputError(f'Got {len(shifts)} shifts but {amplitudes.shape[0]} amplitudes.')
        if len(shifts) > 1:
            r = np.array([s.as_tuple() for s in shifts])
            d = np.maximum(wrap_distance(r[:, None, 0], r[None, :, 0]), wrap_distance(r[:, None, 1], r[None, :, 1]))
            if np.any(d[np.triu_indices(len(shifts), k=1)] < DISTINCT_TOL):
                raise UndefinedInputError('Shifts in a scene must be pairwise distinct.')

        amplitudes.setflags(write=False)
        object.__setattr__(self, 'shifts', shifts)
        object.__setattr__(self, 'amplitudes', amplitudes)

    @classmethod
    def from_arrays(cls, taus, nus, amplitudes=None, **kwargs):
        taus = np.atleast_1d(np.asarray(taus, dtype=float))
        nus = np.atleast_1d(np.asarray(nus, dtype=float))
        if amplitudes is None:
            amplitudes = np.ones(taus.shape[0], dtype=complex)
        return cls(tuple(zip(taus, nus)), amplitudes, **kwargs)

    @classmethod
    def empty(cls):
        return cls()

    @property
    def S(self):
        return len(self.shifts)

    def __len__(self):
        return self.S

    @property
    def taus(self):
        return np.array([r.tau for r in self.shifts], dtype=float)

    @property
    def nus(self):
        return np.array([r.nu for r in self.shifts], dtype=float)

    def union(self, other):
        return TargetScene(
            self.shifts + other.shifts,
            np.concatenate([self.amplitudes, other.amplitudes]),
            bandwidth=self.bandwidth,
            duration=self.duration
        )

    def scaled(self, alpha):
        return TargetScene(self.shifts, alpha * self.amplitudes, self.bandwidth, self.duration, self.min_sep)

    def with_amplitudes(self, amplitudes):
        return TargetScene(self.shifts, amplitudes, self.bandwidth, self.duration, self.min_sep)

    def to_frame(self):
        return pd.DataFrame({'tau': self.taus, 'nu': self.nus, 'b': self.amplitudes})

    @classmethod
    def from_frame(cls, df, **kwargs):
        amplitudes = df['b'].to_numpy() if 'b' in df else None
        return cls.from_arrays(df['tau'].to_numpy(), df['nu'].to_numpy(), amplitudes, **kwargs)

    def __repr__(self):
        return f'TargetScene(S={self.S}, shifts={[r.as_tuple() for r in self.shifts]})'


def min_separation(scene):
    """
    Smallest pairwise wrap-around infinity distance between the shifts of ``scene``.
    """
    if scene.S < 2:
        raise UndefinedInputError(f'Minimum separation needs at least two targets, got S={scene.S}.')

    taus, nus = scene.taus, scene.nus
    d = np.maximum(
        wrap_distance(taus[:, None], taus[None, :]),
        wrap_distance(nus[:, None], nus[None, :])
    )
    return float(np.min(d[np.triu_indices(scene.S, k=1)]))


def _normalize_region(region):
    if region is None:
        return (0.0, 1.0), (0.0, 1.0)

    region = np.asarray(region, dtype=float)
    if region.shape == (2,):
        region = np.array([[0.0, region[0]], [0.0, region[1]]])
    if region.shape != (2, 2) or np.any(region[:, 1] <= region[:, 0]) or np.any(region < 0) or np.any(region > 1):
        raise ConfigError(f'region must be ((tau_lo, tau_hi), (nu_lo, nu_hi)) inside [0, 1], got {region.tolist()}.')

    return tuple(map(tuple, region))


def draw_amplitudes(S, b_dist, rng):
    if b_dist == 'unit_disc':
        return np.sqrt(rng.uniform(size=S)) * np.exp(2j * np.pi * rng.uniform(size=S))
    elif b_dist == 'random_sign_real':
        return rng.choice([-1.0, 1.0], size=S).astype(complex)
    elif b_dist == 'unit_modulus':
        return np.exp(2j * np.pi * rng.uniform(size=S))

    raise ConfigError(f'Unknown amplitude distribution {b_dist!r}, expected one of {AMPLITUDE_DISTRIBUTIONS}.')


def draw_scene(S, region=None, min_sep=0.0, b_dist='unit_disc', seed=None):
    """
    Draw ``S`` targets uniformly in ``region`` with pairwise wrap-around separation at least ``min_sep``.

    Shifts are drawn one at a time and rejected while they violate the separation; after ``10^5`` rejections
    a :class:`CapacityError` is raised.

    Parameters
    ----------
    S : int
        Number of targets.

    region : tuple or None, default None
        ``((tau_lo, tau_hi), (nu_lo, nu_hi))`` or ``(tau_max, nu_max)`` for ``[0, tau_max] x [0, nu_max]``.
        Defaults to the whole unit square.

    min_sep : float, default 0
        Minimum wrap-around infinity distance between any two shifts.

    b_dist : {'unit_disc', 'random_sign_real', 'unit_modulus'}, default 'unit_disc'
        Amplitude distribution.

    seed : int or None

    Returns
    -------
    TargetScene

    """
    S = int(S)
    if S < 0:
        raise ConfigError(f'S must be non-negative, got {S}.')

    (tau_lo, tau_hi), (nu_lo, nu_hi) = _normalize_region(region)
    width = min(tau_hi - tau_lo + min_sep, 1.0)
    height = min(nu_hi - nu_lo + min_sep, 1.0)
    if S * min_sep ** 2 > width * height:
        raise CapacityError(
            f'Region {(tau_lo, tau_hi)} x {(nu_lo, nu_hi)} cannot hold S={S} targets at separation {min_sep}.'
        )

    rng = make_rng(seed, SCENE_STREAM)
    taus, nus = [], []
    rejections = 0
    while len(taus) < S:
        tau = rng.uniform(tau_lo, tau_hi)
        nu = rng.uniform(nu_lo, nu_hi)
        if taus:
            d = np.maximum(wrap_distance(tau, np.array(taus)), wrap_distance(nu, np.array(nus)))
            if np.min(d) < min_sep or np.min(d) == 0:
                rejections += 1
                if rejections >= MAX_REJECTIONS:
                    raise CapacityError(
                        f'Could not place S={S} targets at separation {min_sep} after {MAX_REJECTIONS} rejections.'
                    )
                continue
        taus.append(float(reduce_mod1(tau)))
        nus.append(float(reduce_mod1(nu)))

    logger.debug(f'Drew scene with S={S} after {rejections} rejections.')
    amplitudes = draw_amplitudes(S, b_dist, rng)
    return TargetScene(tuple(zip(taus, nus)), amplitudes, min_sep=min_sep if min_sep > 0 else None)


def to_physical(scene, bandwidth=None, duration=None):
    """
    Delay-Doppler pairs ``(tau_bar, nu_bar) = (tau T, nu B)`` on ``[-T/2, T/2) x [-B/2, B/2)``.

    Returns
    -------
    pd.DataFrame
        Columns ``delay`` (s), ``doppler`` (Hz) and ``b``.

    """
    bandwidth = scene.bandwidth if bandwidth is None else bandwidth
    duration = scene.duration if duration is None else duration
    if bandwidth is None or duration is None:
        raise UndefinedInputError('Physical mapping needs both a bandwidth and a duration.')

    return pd.DataFrame({
        'delay': wrap_difference(scene.taus, 0.0) * duration,
        'doppler': wrap_difference(scene.nus, 0.0) * bandwidth,
        'b': scene.amplitudes
    })


def from_physical(delays, dopplers, amplitudes, bandwidth, duration):
    """
    Inverse of :func:`to_physical`: normalize ``tau = tau_bar / T`` and ``nu = nu_bar / B`` modulo 1.
    """
    taus = reduce_mod1(np.asarray(delays, dtype=float) / duration)
    nus = reduce_mod1(np.asarray(dopplers, dtype=float) / bandwidth)
    return TargetScene.from_arrays(taus, nus, amplitudes, bandwidth=bandwidth, duration=duration)
