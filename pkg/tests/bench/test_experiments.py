import tempfile
from pathlib import Path
from unittest import TestCase

import numpy as np
import pandas as pd
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from src.srradar.bench import (
    ExperimentConfig,
    cmd_bench_srf,
    cmd_certify,
    cmd_kernel_study,
    cmd_prop2,
    cmd_recover_an,
    cmd_recover_grid,
    cmd_simulate,
    draw_instance,
    load_artifacts,
    run_experiment
)
from src.srradar.errors import CapacityError, ConfigError, DimensionError


def write_tables(tables, directory):
    return [table.write(directory) for table in tables]


class TestSimulate(TestCase):
    def setUp(self):
        self.config = ExperimentConfig('simulate', n_half=5, S=1, seed=3)

    def test_tables(self):
        scene, signal, samples = cmd_simulate(self.config)
        self.assertEqual(len(scene.frame), 1)
        self.assertEqual(len(signal.frame), 11)
        self.assertEqual(len(samples.frame), 11)
        assert_array_equal(signal.frame['l'], np.arange(-5, 6))
        self.assertEqual(samples.metadata['seed'], 3)

    def test_reload(self):
        inst = draw_instance(self.config)
        with tempfile.TemporaryDirectory() as tmp:
            write_tables(cmd_simulate(self.config), tmp)
            loaded = load_artifacts(tmp)

        assert_array_equal(loaded.x.samples, inst.x.samples)
        assert_array_equal(loaded.y.samples, inst.y.samples)
        assert_array_equal(loaded.scene.taus, inst.scene.taus)
        assert_array_equal(loaded.scene.amplitudes, inst.scene.amplitudes)
        self.assertEqual(loaded.x.distribution, 'gaussian')

    def test_byte_identical(self):
        with tempfile.TemporaryDirectory() as first, tempfile.TemporaryDirectory() as second:
            paths_a = write_tables(cmd_simulate(self.config), first)
            paths_b = write_tables(cmd_simulate(self.config), second)
            for a, b in zip(paths_a, paths_b):
                self.assertEqual(a.read_bytes(), b.read_bytes())

    def test_noisy_reload(self):
        config = self.config.replace(snr_db=20.0)
        with tempfile.TemporaryDirectory() as tmp:
            write_tables(cmd_simulate(config), tmp)
            loaded = load_artifacts(tmp)
        self.assertEqual(loaded.y.snr_db, 20.0)
        assert_allclose(loaded.y.noise_energy, draw_instance(config).y.noise_energy, rtol=1e-15)

    def test_fixed_shifts(self):
        config = ExperimentConfig('simulate', n_half=3, S=2, shifts=[[0.1, 0.2], [0.6, 0.4]], amplitudes=[1, 1j])
        inst = draw_instance(config)
        assert_allclose(inst.scene.taus, [0.1, 0.6])
        assert_allclose(inst.scene.amplitudes, [1, 1j])

    def test_capacity(self):
        config = ExperimentConfig('simulate', n_half=5, S=5, region=[0.01, 0.01], min_sep_factor=1.0)
        with self.assertRaises(CapacityError):
            cmd_simulate(config)


class TestBenchSrf(TestCase):
    def setUp(self):
        self.config = ExperimentConfig('bench-srf', n_half=5, S=2, srf_list=[1, 2], snr_db_list=[None, 20],
                                       trials=2, seed=1, max_iter=2000)

    def test_summary(self):
        summary, trials = cmd_bench_srf(self.config)
        self.assertEqual(len(summary.frame), 4)
        self.assertEqual(len(trials.frame), 8)
        for col in ('err_periodic_mean', 'err_periodic_stderr', 'err_truncated_mean', 'err_matched_mean',
                    'unconverged', 'trials'):
            self.assertIn(col, summary.frame.columns)
        assert_array_equal(summary.frame['trials'], 2)
        self.assertTrue(np.isinf(summary.frame['snr_db'].iloc[0]))
        side = 2 / np.sqrt(11)
        assert_allclose(summary.metadata['region'], [side, side])

    def test_deterministic(self):
        config = self.config.replace(srf_list=[2], snr_db_list=[None])
        first = cmd_bench_srf(config)[1].frame
        second = cmd_bench_srf(config.replace(threads=2))[1].frame
        pd.testing.assert_frame_equal(first, second)

    @pytest.mark.slow
    def test_error_decays_with_srf(self):
        from src.srradar.bench import load_config
        config = load_config(Path(__file__).parents[2] / 'configs' / 'bench_srf.json').replace(trials=10)
        summary = cmd_bench_srf(config)[0].frame.sort_values('srf')
        assert_array_equal(summary['srf'], [1.0, 2.0, 5.0, 10.0, 20.0])

        err = summary['err_periodic_mean'].to_numpy()
        stderr = summary['err_periodic_stderr'].to_numpy()
        self.assertTrue(np.all(np.diff(err) <= 2 * (stderr[1:] + stderr[:-1])), msg=f'{err}')
        self.assertGreaterEqual(err[-1], 0.01)
        self.assertLessEqual(err[-1], 0.04)

        truncated = summary['err_truncated_mean'].to_numpy()
        assert_allclose(truncated, err, rtol=0.1)


class TestRecoverGrid(TestCase):
    def test_recover(self):
        config = ExperimentConfig('recover-grid', n_half=5, S=1, srf=2, seed=2, max_iter=5000)
        table, = cmd_recover_grid(config)
        self.assertEqual(list(table.frame.columns), ['tau', 'nu', 'b', 'b_debiased'])
        self.assertLessEqual(len(table.frame), 1)
        self.assertEqual(table.metadata['K'], 22)
        self.assertIn('converged', table.metadata)
        self.assertIsNotNone(table.metadata['resolution_error'])

    def test_from_artifacts(self):
        simulate = ExperimentConfig('simulate', n_half=5, S=1, seed=2)
        config = ExperimentConfig('recover-grid', n_half=5, S=1, srf=2, seed=2, max_iter=5000)
        with tempfile.TemporaryDirectory() as tmp:
            write_tables(cmd_simulate(simulate), tmp)
            loaded = cmd_recover_grid(config.replace(input_dir=tmp))[0].frame
        fresh = cmd_recover_grid(config)[0].frame
        pd.testing.assert_frame_equal(loaded, fresh)


class TestRecoverAn(TestCase):
    def test_zero_signal(self):
        config = ExperimentConfig('recover-an', n_half=2, S=0)
        shifts, dump = cmd_recover_an(config)
        self.assertEqual(len(shifts.frame), 0)
        self.assertEqual(len(dump.frame), (16 * 5) ** 2)
        assert_allclose(dump.frame['abs_q'], 0)
        self.assertIsNone(shifts.metadata['resolution_error'])
        self.assertTrue(shifts.metadata['relaxation_conclusive'])

    def test_ceiling(self):
        with self.assertRaises(CapacityError):
            cmd_recover_an(ExperimentConfig('recover-an', n_half=16, S=1))

    @pytest.mark.slow
    def test_two_shifts(self):
        config = ExperimentConfig('recover-an', n_half=8, S=2, shifts=[[0.2, 0.5], [0.8, 0.5]],
                                  b_dist='unit_modulus', probe_dist='unit_modulus')
        shifts, dump = cmd_recover_an(config)
        frame = shifts.frame.sort_values('tau')
        self.assertEqual(len(frame), 2)
        assert_allclose(frame[['tau', 'nu']].to_numpy(), [[0.2, 0.5], [0.8, 0.5]], atol=1e-3)
        self.assertLessEqual(dump.frame['abs_q'].max(), 1 + 1e-4)


class TestStudies(TestCase):
    def test_certify(self):
        table, = cmd_certify(ExperimentConfig('certify', n_half=8, S=1, trials=2, deterministic=True))
        self.assertEqual(len(table.frame), 2)
        self.assertTrue(0 <= table.metadata['pass_rate'] <= 1)
        self.assertEqual(table.metadata['solved_rate'], 1.0)
        self.assertIn('far_max_worst', table.metadata)

    def test_certify_parity(self):
        with self.assertRaises(DimensionError):
            cmd_certify(ExperimentConfig('certify', n_half=7, S=1, trials=1))

    def test_prop2(self):
        table, = cmd_prop2(ExperimentConfig('prop2', L_list=[7, 15], S=2, trials=3))
        assert_array_equal(table.frame['L'], [7, 15])
        self.assertTrue(np.isfinite(table.metadata['slope']))

    def test_kernel_study(self):
        mean_error, trials = cmd_kernel_study(ExperimentConfig('kernel-study', n_half=4, trials=3, points=5,
                                                               gram_trials=10))
        self.assertEqual(len(mean_error.frame), 25)
        self.assertEqual(len(trials.frame), 3)
        self.assertIn('gram_max_deviation', mean_error.metadata)

    def test_dispatch(self):
        tables = run_experiment(ExperimentConfig('prop2', L_list=[7], S=1, trials=2))
        self.assertEqual(tables[0].name, 'prop2')
        self.assertTrue(np.isnan(tables[0].metadata['slope']))


class TestShippedConfigs(TestCase):
    def test_bench_region(self):
        from src.srradar.bench import load_config
        config = load_config(Path(__file__).parents[2] / 'configs' / 'bench_srf.json')
        self.assertEqual(config.L, 201)
        self.assertEqual(config.srf_list, [1.0, 2.0, 5.0, 10.0, 20.0])
        with self.assertRaises(ConfigError):
            config.replace(srf_list=[128])
