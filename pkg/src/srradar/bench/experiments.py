"""
Runnable experiments behind the ``srr`` subcommands.

Every command is a function of an :class:`ExperimentConfig` returning a list of :class:`ResultTable`, primary
table first; writing them is left to the caller. Trial ``t`` of a sweep uses the seed path ``(seed, t)`` so rows
do not depend on the thread count.
"""
import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pandas as pd

from src.srradar.certificate import certificate_study, gabor_gram_study, kernel_study
from src.srradar.core.indexing import sym_indices
from src.srradar.core.signal import ProbingSignal
from src.srradar.errors import CapacityError, ConfigError
from src.srradar.grid import GridSpec, SolverOptions, debias, extract_targets, resolution_error, solve_bpdn
from src.srradar.scene import (
    NoiseSpec,
    SampleVec,
    TargetScene,
    add_noise,
    draw_amplitudes,
    draw_probing_signal,
    draw_scene,
    matched_filter,
    prop2_decay_study,
    synthesize_periodic,
    synthesize_truncated
)
from src.srradar.scene.scene import SCENE_STREAM
from src.srradar.sdp import (
    MAX_SDP_LENGTH,
    SdpOptions,
    build_sdp_noisy,
    dual_poly,
    locate_shifts,
    primal_from_dual,
    solve_sdp,
    verify_dual_feasibility
)
from src.srradar.bench.results import ResultTable, run_metadata
from src.srradar.utils import make_rng, map_trials

logger = logging.getLogger(__name__)

SYNTHESIS = {'periodic': synthesize_periodic, 'truncated': synthesize_truncated}
ARTIFACTS = ('scene', 'signal', 'samples')


@dataclass
class Instance:
    """
    One recovery problem: the true scene, the probe and the observed samples.
    """
    scene: TargetScene
    x: ProbingSignal
    y: SampleVec


def _noise(snr_db, seed):
    return NoiseSpec(np.inf if snr_db is None else float(snr_db), seed)


def _solver_options(config):
    return SolverOptions(max_iter=config.max_iter, tol_feas=config.solver_tol, tol_obj=config.solver_tol)


def draw_instance(config, seed=None):
    """
    Scene, probe and samples of ``config``: fixed ``shifts`` if given, otherwise a random scene.
    """
    seed = config.seed if seed is None else seed
    n_half = config.n_half

    if config.shifts is not None:
        amplitudes = config.amplitudes
        if amplitudes is None:
            amplitudes = draw_amplitudes(config.S, config.b_dist, make_rng(seed, SCENE_STREAM))
        scene = TargetScene(tuple(map(tuple, config.shifts)), amplitudes)
    else:
        scene = draw_scene(config.S, region=config.region, min_sep=config.min_sep_factor / n_half,
                           b_dist=config.b_dist, seed=seed)

    x = draw_probing_signal(n_half, config.probe_dist, seed=seed)
    y = add_noise(SYNTHESIS[config.model](scene, x), _noise(config.snr_db, seed))
    return Instance(scene, x, y)


def cmd_simulate(config):
    """
    Draw one instance and tabulate its scene, probe and samples.
    """
    inst = draw_instance(config)
    idx = sym_indices(config.n_half)
    meta = run_metadata(
        config,
        n_half=config.n_half,
        probe_dist=config.probe_dist,
        model=inst.y.model,
        snr_db=config.snr_db,
        noise_energy=inst.y.noise_energy
    )
    logger.info(f'Simulated S={inst.scene.S} targets, L={inst.x.L}, ||y||={inst.y.norm():.4g}.')
    return [
        ResultTable('scene', inst.scene.to_frame(), meta),
        ResultTable('signal', pd.DataFrame({'l': idx, 'x': inst.x.samples}), meta),
        ResultTable('samples', pd.DataFrame({'p': idx, 'y': inst.y.samples}), meta)
    ]


def load_artifacts(directory):
    """
    Read back the scene, probe and samples written by ``simulate``.

    Returns
    -------
    Instance

    """
    directory = Path(directory)
    scene_table, signal_table, samples_table = (ResultTable.read(directory / name) for name in ARTIFACTS)
    meta = signal_table.metadata

    x = ProbingSignal.from_samples(signal_table.frame['x'].to_numpy(dtype=complex),
                                   distribution=meta.get('probe_dist', 'custom'), seed=meta.get('seed'))
    scene = TargetScene.from_frame(scene_table.frame)

    snr_db = samples_table.metadata.get('snr_db')
    y = SampleVec(
        samples_table.frame['y'].to_numpy(dtype=complex),
        model=samples_table.metadata.get('model', 'periodic'),
        noise=None if snr_db is None else _noise(snr_db, meta.get('seed')),
        noise_energy=float(samples_table.metadata.get('noise_energy') or 0.0)
    )
    logger.info(f'Loaded S={scene.S}, L={x.L} instance from {directory}.')
    return Instance(scene, x, y)


def _instance(config):
    return load_artifacts(config.input_dir) if config.input_dir else draw_instance(config)


def bench_region(config):
    """
    Scene and grid restriction of the SRF sweep, ``[2 / sqrt(L)]^2`` unless configured.
    """
    if config.region is not None:
        return tuple(config.region)
    side = min(1.0, 2 / np.sqrt(config.L))
    return side, side


def srf_trial(config, grid, snr_db, seed):
    """
    One scene recovered from periodic and truncated samples on ``grid``, with the matched filter as baseline.
    """
    n_half = grid.n_half
    scene = draw_scene(config.S, region=grid.region, min_sep=config.min_sep_factor / n_half,
                       b_dist=config.b_dist, seed=seed)
    x = draw_probing_signal(n_half, config.probe_dist, seed=seed)
    noise = _noise(snr_db, seed)
    opts = _solver_options(config)

    row = {}
    for model, synthesize in SYNTHESIS.items():
        y = add_noise(synthesize(scene, x), noise)
        delta = config.delta if config.delta is not None else y.noise_energy
        est = solve_bpdn(y, x, grid, delta, opts)
        found = extract_targets(est, 'top_S', S=config.S).scene
        row[f'err_{model}'] = resolution_error(scene, found, n_half)
        row[f'converged_{model}'] = est.converged
        if model == 'periodic':
            row['err_matched'] = resolution_error(scene, matched_filter(y, x, config.S), n_half)

    return row


def cmd_bench_srf(config):
    """
    Average resolution error against the super-resolution factor.

    For every (SRF, SNR) cell, ``config.trials`` scenes are drawn in the bench region and recovered by noise-aware
    basis pursuit from periodic and truncated samples. The primary table has the per-cell mean and standard
    error of each error column; the second table holds the trials.
    """
    region = bench_region(config)
    rows = []
    for srf in config.srf_list:
        grid = GridSpec.from_srf(config.n_half, srf, region=region)
        for snr_db in config.snr_db_list:
            def trial(t):
                return srf_trial(config, grid, snr_db, (config.seed, t))

            desc = f'SRF={srf:g} SNR={snr_db}'
            results = map_trials(trial, config.trials, threads=config.threads, desc=desc)
            for t, row in enumerate(results):
                rows.append({'srf': float(srf), 'snr_db': np.inf if snr_db is None else float(snr_db), 'trial': t,
                             'K': grid.K, **row})

    trials = pd.DataFrame(rows)
    trials['unconverged'] = (~trials['converged_periodic']).astype(int) + (~trials['converged_truncated']).astype(int)

    aggregations = {'trials': ('trial', 'count'), 'unconverged': ('unconverged', 'sum')}
    for col in ('err_periodic', 'err_truncated', 'err_matched'):
        aggregations[f'{col}_mean'] = (col, 'mean')
        aggregations[f'{col}_stderr'] = (col, 'sem')
    summary = trials.groupby(['srf', 'snr_db'], sort=False).agg(**aggregations).reset_index()

    for _, cell in summary.iterrows():
        logger.info(f"SRF={cell['srf']:g}, SNR={cell['snr_db']}: error {cell['err_periodic_mean']:.4f} (periodic), "
                    f"{cell['err_truncated_mean']:.4f} (truncated), {cell['err_matched_mean']:.4f} (matched filter).")

    meta = run_metadata(config, region=list(region), n_half=config.n_half, S=config.S)
    return [ResultTable('bench_srf', summary, meta), ResultTable('bench_srf_trials', trials, meta)]


def cmd_recover_grid(config):
    """
    Fine-grid recovery of a simulated or loaded instance.

    The table lists the extracted targets with their cluster amplitudes and least-squares refits.
    """
    inst = _instance(config)
    x = inst.x
    grid = GridSpec.from_srf(x.n_half, config.srf, region=config.region)
    delta = config.delta if config.delta is not None else inst.y.noise_energy

    est = solve_bpdn(inst.y, x, grid, delta, _solver_options(config))
    S = inst.scene.S if inst.scene.S else config.S
    found = extract_targets(est, 'top_S', S=S).scene

    frame = found.to_frame()
    frame['b_debiased'] = debias(inst.y, x, found).amplitudes
    error = resolution_error(inst.scene, found, x.n_half) if inst.scene.S else None
    logger.info(f'Recovered {found.S} targets on K={grid.K}: resolution error {error}.')

    meta = run_metadata(
        config,
        K=grid.K,
        delta=delta,
        objective=est.objective,
        residual=est.residual,
        iterations=est.iterations,
        converged=est.converged,
        resolution_error=error
    )
    return [ResultTable('recover_grid', frame, meta)]


def cmd_recover_an(config):
    """
    Atomic-norm recovery through the dual semidefinite program.

    The primary table lists the located shifts with ``Q(r)`` and the debiased amplitudes; the second table dumps
    ``|Q|`` on the evaluation grid.

    Raises
    ------
    CapacityError
        If ``L > 31``.

    """
    inst = _instance(config)
    x = inst.x
    if x.L > MAX_SDP_LENGTH:
        raise CapacityError(f'recover-an is limited to L <= {MAX_SDP_LENGTH}, got L={x.L}.')

    delta = config.delta if config.delta is not None else np.sqrt(inst.y.noise_energy)
    problem = build_sdp_noisy(inst.y, x, delta)
    sol = solve_sdp(problem, SdpOptions(max_iter=config.max_iter, tol=config.solver_tol), backend=config.backend)

    dp = dual_poly(sol, x)
    feasibility = verify_dual_feasibility(dp, config.grid_size)
    located = locate_shifts(dp, tol=config.tol, grid_size=config.grid_size)
    recovery = primal_from_dual(sol, inst.y, x, located)

    shifts = pd.DataFrame({
        'tau': located.taus,
        'nu': located.nus,
        'q_value': located.amplitudes,
        'b': recovery.scene.amplitudes
    })

    grid_size = feasibility.grid_size
    axis = np.arange(grid_size) / grid_size
    tau, nu = np.meshgrid(axis, axis, indexing='ij')
    dump = pd.DataFrame({'tau': tau.ravel(), 'nu': nu.ravel(), 'abs_q': np.abs(dp.on_grid(grid_size)).ravel()})

    error = resolution_error(inst.scene, located, x.n_half) if inst.scene.S else None
    conclusive = bool(located.S > 0 or np.linalg.norm(inst.y.samples) <= delta)
    if not conclusive:
        logger.warning(f'No peak of |Q| reaches 1 - {config.tol}; the relaxation is inconclusive for this instance.')
    logger.info(f'Located {located.S} shifts; sup |Q| on grid {feasibility.grid_max:.6f}.')

    meta = run_metadata(
        config,
        delta=delta,
        backend=sol.backend,
        objective=sol.objective,
        iterations=sol.iterations,
        converged=sol.converged,
        min_eig=sol.min_eig,
        trace_residual=sol.trace_residual,
        grid_max=feasibility.grid_max,
        grid_bound=feasibility.bound,
        gap=recovery.gap,
        relaxation_conclusive=conclusive,
        resolution_error=error
    )
    return [ResultTable('recover_an', shifts, meta), ResultTable('dual_poly_grid', dump, meta)]


def cmd_certify(config):
    """
    Certificate construction and validation over random supports.
    """
    study = certificate_study(
        config.n_half,
        config.S,
        sep_factor=config.sep_factor,
        trials=config.trials,
        seed=config.seed,
        dist=config.probe_dist,
        deterministic=config.deterministic,
        grid_size=config.grid_size,
        exact_sep=config.exact_sep,
        threads=config.threads
    )
    table = study.table

    margins = {}
    for col in ('far_max', 'global_max', 'near_trace_max', 'interpolation_residual', 'stationarity'):
        if col in table:
            margins[f'{col}_worst'] = float(table[col].max())
    if 'separated' in table:
        margins['separated_rate'] = float(table['separated'].fillna(False).astype(bool).mean())

    meta = run_metadata(
        config,
        pass_rate=study.pass_rate,
        solved_rate=float(table['solved'].mean()),
        **margins
    )
    return [ResultTable('certify', table, meta)]


def cmd_prop2(config):
    """
    Decay of the truncation model error with ``L`` and its log-log slope.
    """
    study = prop2_decay_study(config.L_list, config.trials, config.seed, S=config.S, threads=config.threads)
    logger.info(f'Model error slope {study.slope:.3f}.')
    meta = run_metadata(config, slope=study.slope, intercept=study.intercept)
    return [ResultTable('prop2', study.table, meta)]


def cmd_kernel_study(config):
    """
    Random kernel against its expectation near the origin, optionally with the Gram study.
    """
    study = kernel_study(config.n_half, config.trials, seed=config.seed, radius=config.radius,
                         points=config.points, dist=config.probe_dist, threads=config.threads)
    tau, nu = np.meshgrid(study.offsets, study.offsets, indexing='ij')
    mean_error = pd.DataFrame({'tau': tau.ravel(), 'nu': nu.ravel(), 'mean_error': study.mean_error.ravel()})

    extra = {}
    if config.gram_trials:
        gram = gabor_gram_study(config.n_half, config.gram_trials, seed=config.seed, dist=config.probe_dist)
        extra = {'gram_max_deviation': gram.max_deviation, 'gram_within_5_sigma': gram.within(5)}

    meta = run_metadata(config, max_error_median=float(study.table['max_error'].median()), **extra)
    return [ResultTable('kernel_study', mean_error, meta), ResultTable('kernel_study_trials', study.table, meta)]


COMMANDS = {
    'simulate': cmd_simulate,
    'bench-srf': cmd_bench_srf,
    'recover-grid': cmd_recover_grid,
    'recover-an': cmd_recover_an,
    'certify': cmd_certify,
    'prop2': cmd_prop2,
    'kernel-study': cmd_kernel_study
}


def run_experiment(config):
    try:
        command = COMMANDS[config.experiment]
    except KeyError:
        raise ConfigError(f'No command for experiment {config.experiment!r}.')
    logger.info(f'Running {config.experiment} (config {config.config_hash[:12]}).')
    return command(config)
