"""
Dual polynomial and shift localization.

The shifts are estimated as the points where ``|Q(r)| = |<q, F_nu T_tau x>|`` reaches 1: grid local maxima are
refined by damped Newton steps on ``|Q|^2`` and kept when they clear ``1 - tol``.
"""
import logging
from dataclasses import dataclass

import numpy as np

from src.srradar.core.indexing import reduce_mod1, wrap_distance
from src.srradar.core.trig_poly import TrigPoly2D, inner_product_poly, squared_magnitude_derivatives
from src.srradar.errors import DimensionError
from src.srradar.grid.extraction import debias
from src.srradar.scene.scene import TargetScene
from src.srradar.scene.synthesis import as_samples

logger = logging.getLogger(__name__)

GRID_FACTOR = 16
MIN_GRID_FACTOR = 8
NEWTON_STEPS = 10
MAX_BACKTRACK = 20


@dataclass(frozen=True, eq=False)
class DualPoly:
    """
    ``Q(tau, nu) = <q, F_nu T_tau x>`` as a trigonometric polynomial.

    ``provenance`` names the solution the coefficients came from.
    """
    poly: TrigPoly2D
    provenance: str = 'vector'

    @property
    def L(self):
        return self.poly.L

    @property
    def n_half(self):
        return self.poly.degree

    @property
    def coeffs(self):
        return self.poly.coeffs

    def __call__(self, tau, nu, m=0, n=0):
        return self.poly(tau, nu, m=m, n=n)

    def on_grid(self, grid_size=None):
        return self.poly.on_grid(grid_size or GRID_FACTOR * self.L)

    def __repr__(self):
        return f'DualPoly(L={self.L}, provenance={self.provenance!r})'


@dataclass(frozen=True)
class FeasibilityReport:
    """
    Largest grid value of ``|Q|`` and the continuity bound ``grid_max (1 + 2 pi N sqrt(2) / grid_size)``.
    """
    grid_max: float
    bound: float
    grid_size: int

    def __float__(self):
        return self.grid_max


@dataclass(frozen=True, eq=False)
class PrimalRecovery:
    """
    Debiased amplitudes at located shifts and the gap ``sum |b_j| - dual objective``.
    """
    scene: TargetScene
    gap: float
    residual: float


def dual_poly(sol, x):
    """
    Dual polynomial of a :class:`ConicSolution` (or of a raw vector ``q``).

    The coefficients are the 2D DFT of ``G^H q`` reindexed by ``(-s, -t)``.
    """
    q = getattr(sol, 'q', sol)
    provenance = getattr(sol, 'backend', 'vector')
    q = np.asarray(q, dtype=complex).reshape(-1)
    if q.shape[0] != x.L:
        raise DimensionError(f'q has {q.shape[0]} entries but the probe has L={x.L}.')
    return DualPoly(inner_product_poly(x, q), provenance)


def _check_grid_size(grid_size, L):
    grid_size = GRID_FACTOR * L if grid_size is None else int(grid_size)
    if grid_size < MIN_GRID_FACTOR * L:
        raise DimensionError(f'grid_size={grid_size} must be at least {MIN_GRID_FACTOR}L={MIN_GRID_FACTOR * L}.')
    return grid_size


def _continuity_slack(n_half, grid_size):
    # Bernstein: |dQ/dtau|, |dQ/dnu| <= 2 pi N sup|Q|
    return 2 * np.pi * n_half * np.sqrt(2) / grid_size


def verify_dual_feasibility(dp, grid_size=None):
    """
    Grid maximum of ``|Q|`` with its Bernstein continuity bound.

    Returns
    -------
    FeasibilityReport
        ``float(report)`` is the grid maximum.

    """
    grid_size = _check_grid_size(grid_size, dp.L)
    grid_max = float(np.abs(dp.on_grid(grid_size)).max())
    bound = grid_max * (1 + _continuity_slack(dp.n_half, grid_size))
    return FeasibilityReport(grid_max, bound, grid_size)


def _local_maxima(values):
    mask = np.ones(values.shape, dtype=bool)
    for du in (-1, 0, 1):
        for dv in (-1, 0, 1):
            if du or dv:
                mask &= values >= np.roll(values, (du, dv), axis=(0, 1))
    return np.nonzero(mask)


def _squared_magnitude(poly, r):
    return abs(poly(r[0], r[1])) ** 2


def _refine(poly, r, max_step, n_steps=NEWTON_STEPS):
    value = _squared_magnitude(poly, r)
    for _ in range(n_steps):
        _, grad, hess = squared_magnitude_derivatives(poly, r[0], r[1])
        grad, hess = grad[0], hess[0]
        eigs = np.linalg.eigvalsh(hess)
        if eigs[-1] < 0:
            step = -np.linalg.solve(hess, grad)
        else:
            step = grad / max(np.abs(eigs).max(), 1e-12)

        length = np.abs(step).max()
        if length > max_step:
            step *= max_step / length
        if length < 1e-14:
            break

        for _ in range(MAX_BACKTRACK):
            candidate = r + step
            new_value = _squared_magnitude(poly, candidate)
            if new_value >= value:
                r, value = candidate, new_value
                break
            step *= 0.5
        else:
            break

    return np.array([reduce_mod1(r[0]), reduce_mod1(r[1])]), np.sqrt(value)


def locate_shifts(dp, tol=1e-3, grid_size=None):
    """
    Points where ``|Q|`` reaches ``1 - tol``.

    Parameters
    ----------
    dp : DualPoly

    tol : float, default 1e-3

    grid_size : int or None
        Evaluation grid, at least ``8L``; defaults to ``16L``.

    Returns
    -------
    TargetScene
        Located shifts; the amplitudes hold ``Q(r)`` at each shift. Empty if no peak clears ``1 - tol``.

    """
    grid_size = _check_grid_size(grid_size, dp.L)
    values = np.abs(dp.on_grid(grid_size))
    slack = _continuity_slack(dp.n_half, grid_size) * values.max(initial=0.0)

    u, v = _local_maxima(values)
    keep = values[u, v] >= 1 - tol - slack
    u, v = u[keep], v[keep]
    if u.size > dp.L ** 2:
        top = np.argsort(-values[u, v], kind='stable')[:dp.L ** 2]
        u, v = u[top], v[top]

    max_step = 0.25 / dp.L
    peaks = []
    for r0 in zip(u / grid_size, v / grid_size):
        r, magnitude = _refine(dp.poly, np.array(r0, dtype=float), max_step)
        if magnitude >= 1 - tol:
            peaks.append((magnitude, r))

    peaks.sort(key=lambda item: -item[0])
    located = []
    for magnitude, r in peaks:
        if all(max(wrap_distance(r[0], s[0]), wrap_distance(r[1], s[1])) >= 0.5 / dp.L for s in located):
            located.append(r)

    logger.debug(f'locate_shifts: {u.size} candidates, {len(peaks)} refined peaks, {len(located)} shifts.')
    if not located:
        return TargetScene.empty()

    located = np.array(located)
    return TargetScene.from_arrays(located[:, 0], located[:, 1], dp(located[:, 0], located[:, 1]))


def primal_from_dual(sol, y, x, shifts):
    """
    Least-squares amplitudes at ``shifts`` and the duality gap ``sum |b_j| - objective(sol)``.
    """
    y = as_samples(y)
    fit = debias(y, x, shifts)
    shifts = shifts.shifts if isinstance(shifts, TargetScene) else shifts
    scene = TargetScene(tuple(shifts), fit.amplitudes)
    gap = float(np.abs(fit.amplitudes).sum() - sol.objective)
    logger.info(f'primal_from_dual: S={scene.S}, gap={gap:.3e}, residual={fit.residual:.3e}.')
    return PrimalRecovery(scene, gap, fit.residual)
