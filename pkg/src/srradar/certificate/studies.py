import logging
from dataclasses import dataclass

import numpy as np
import pandas as pd
from tqdm import tqdm

from src.srradar.certificate.certificate import build_certificate, validate_certificate
from src.srradar.certificate.fejer import check_even_n_half
from src.srradar.certificate.kernels import gbar, random_kernel
from src.srradar.core.operators import gabor_matrix
from src.srradar.errors import ConfigError, IllConditionedError
from src.srradar.scene.probing import draw_probing_signal
from src.srradar.scene.scene import draw_scene
from src.srradar.utils import RunningMeanStd, make_rng, map_trials

logger = logging.getLogger(__name__)

SIGN_STREAM = 0x7369676E


def random_signs(S, seed=None, unit_modulus=False):
    """
    ``S`` random signs, or uniform unit-modulus phases when ``unit_modulus`` is True.
    """
    rng = make_rng(seed, SIGN_STREAM)
    if unit_modulus:
        return np.exp(2j * np.pi * rng.uniform(size=S))
    return rng.choice([-1.0, 1.0], size=S)


@dataclass
class CertificateStudy:
    """
    Per-trial validation rows and the fraction of trials whose certificate passed every criterion.
    """
    table: pd.DataFrame
    pass_rate: float


def certificate_trial(n_half, S, min_sep, seed, dist='gaussian', deterministic=False, grid_size=None, exact_sep=False):
    """
    Build and validate one certificate on a random support.

    Support and signs use the streams of ``seed``; the probe is drawn from ``dist`` unless ``deterministic``.
    With ``exact_sep`` the support is a row of ``S`` points spaced exactly ``min_sep`` apart in ``tau`` from a
    random start. A refused coefficient solve is reported as a failed trial.
    """
    if exact_sep:
        start = draw_scene(1, seed=seed).shifts[0]
        scene = [(start.tau + j * min_sep, start.nu) for j in range(S)]
    else:
        scene = draw_scene(S, min_sep=min_sep, seed=seed)
    u = random_signs(S, seed=seed)
    x = None if deterministic else draw_probing_signal(n_half, dist, seed=seed)

    try:
        cert = build_certificate(scene, u, x=x, n_half=n_half)
    except IllConditionedError as e:
        logger.info(f'Trial {seed}: {e}')
        return {'solved': False, 'condition': e.condition, 'passed': False}

    row = validate_certificate(cert, grid_size=grid_size).to_dict()
    row.update(solved=True, condition=cert.coeffs.condition if cert.coeffs else 1.0)
    return row


def certificate_study(n_half, S, sep_factor=2.38, trials=50, seed=0, dist='gaussian', deterministic=False,
                      grid_size=None, exact_sep=False, threads=1, verbose=False):
    """
    Pass rate of the certificate construction over random supports.

    Parameters
    ----------
    n_half : int
        Even N.

    S : int
        Support size.

    sep_factor : float, default 2.38
        Minimum separation in units of ``1/N``.

    trials : int, default 50

    seed : int
        Trial ``t`` uses the streams ``(seed, t)``.

    deterministic : bool, default False
        Validate the ``Gbar`` certificate instead of the random one.

    exact_sep : bool, default False
        Place the support at exactly the minimum separation instead of drawing it uniformly.

    Returns
    -------
    CertificateStudy

    """
    n_half = check_even_n_half(n_half)
    min_sep = sep_factor / n_half

    def trial(t):
        row = certificate_trial(n_half, S, min_sep, (seed, t), dist, deterministic, grid_size, exact_sep)
        row['trial'] = t
        return row

    rows = map_trials(trial, trials, threads=threads, verbose=verbose, desc=f'Certificates N={n_half} S={S}')
    table = pd.DataFrame(rows)
    table.insert(0, 'n_half', n_half)
    table.insert(1, 'S', S)
    table.insert(2, 'sep_factor', sep_factor)
    table.insert(3, 'exact_sep', exact_sep)
    pass_rate = float(table['passed'].mean()) if len(table) else np.nan
    logger.info(f'Certificate study N={n_half}, S={S}, sep={sep_factor}/N: pass rate {pass_rate:.2%}.')
    return CertificateStudy(table, pass_rate)


@dataclass
class GramStudy:
    """
    Entrywise Monte-Carlo mean of ``G^H G`` and its standard error, real and imaginary parts separately.
    """
    mean: np.ndarray
    stderr: np.ndarray
    max_deviation: float
    trials: int

    def within(self, n_sigma=5.0, atol=1e-12):
        """
        Whether every entry of the mean lies within ``n_sigma`` standard errors of the identity.
        """
        eye = np.eye(self.mean.shape[-1])
        deviation = np.abs(self.mean - np.stack([eye, np.zeros_like(eye)]))
        return bool(np.all(deviation <= n_sigma * self.stderr + atol))


def gabor_gram_study(n_half, trials, seed=0, dist='gaussian', verbose=False):
    """
    Monte-Carlo check of ``E[G^H G] = I`` for probes drawn from ``dist``.
    """
    if trials < 1:
        raise ConfigError(f'Gram study needs at least one trial, got {trials}.')

    stats = None
    for t in tqdm(range(trials), desc=f'Gram N={n_half}', disable=(not verbose)):
        G = gabor_matrix(draw_probing_signal(n_half, dist, seed=(seed, t)))
        gram = G.conj().T @ G
        if stats is None:
            stats = RunningMeanStd(shape=(2,) + gram.shape)
        stats.update(np.stack([gram.real, gram.imag])[None])

    eye = np.eye(stats.mean.shape[-1])
    max_deviation = float(np.abs(stats.mean[0] + 1j * stats.mean[1] - eye).max())
    logger.info(f'Gram study N={n_half}: max |mean(G^H G) - I| = {max_deviation:.3e} over {trials} trials.')
    return GramStudy(stats.mean, stats.stderr, max_deviation, trials)


@dataclass
class KernelStudy:
    """
    Per-trial deviation of the normalized random kernel from ``Gbar`` on a square around the origin.
    """
    table: pd.DataFrame
    offsets: np.ndarray
    mean_error: np.ndarray


def kernel_study(n_half, trials, seed=0, radius=None, points=21, dist='gaussian', threads=1, verbose=False):
    """
    Compare ``G_{(0,0)}(r, 0) / G_{(0,0)}(0, 0)`` with ``Gbar(r)`` for ``r`` in ``[-radius, radius]^2``.

    Parameters
    ----------
    n_half : int
        Even N.

    trials : int

    radius : float or None
        Half-width of the square; defaults to ``2 / N``.

    points : int, default 21
        Points per axis.

    Returns
    -------
    KernelStudy
        ``table`` has one row per trial with the largest and mean absolute deviation; ``mean_error`` is the
        trial average of the absolute deviation on the ``points x points`` grid of ``offsets``.

    """
    n_half = check_even_n_half(n_half)
    radius = 2.0 / n_half if radius is None else float(radius)
    offsets = np.linspace(-radius, radius, points)
    tau, nu = np.meshgrid(offsets, offsets, indexing='ij')
    expected = gbar((tau, nu), n_half=n_half)

    def trial(t):
        x = draw_probing_signal(n_half, dist, seed=(seed, t))
        kernel = random_kernel(x, (0.0, 0.0))
        return np.abs(kernel(tau, nu) / kernel(0.0, 0.0) - expected)

    errors = np.array(map_trials(trial, trials, threads=threads, verbose=verbose, desc=f'Kernels N={n_half}'))
    table = pd.DataFrame({
        'trial': np.arange(trials),
        'max_error': errors.reshape(trials, -1).max(axis=1),
        'mean_error': errors.reshape(trials, -1).mean(axis=1)
    })
    logger.info(f'Kernel study N={n_half}: median max deviation {table["max_error"].median():.3e}.')
    return KernelStudy(table, offsets, errors.mean(axis=0))
