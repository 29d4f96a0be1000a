import warnings
from unittest import TestCase

import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.srradar.errors import CapacityError, ConfigError
from src.srradar.scene import NoiseSpec, TargetScene, add_noise, draw_probing_signal, draw_scene, synthesize_periodic
from src.srradar.sdp import (
    SdpOptions,
    build_sdp,
    build_sdp_noisy,
    constraint_report,
    dual_poly,
    locate_shifts,
    restore_feasibility,
    solve_sdp,
    verify_dual_feasibility
)
from tests.helpers import random_complex, random_probe


def solve_quietly(problem, **kwargs):
    with warnings.catch_warnings():
        warnings.simplefilter('ignore')
        return solve_sdp(problem, **kwargs)


class TestSdpOptions(TestCase):
    def test_validation(self):
        with self.assertRaises(ConfigError):
            SdpOptions(tol=0)
        with self.assertRaises(ConfigError):
            SdpOptions(rho=-1)
        with self.assertRaises(ConfigError):
            SdpOptions(balance_factor=1)


class TestSolveSdpEdgeCases(TestCase):
    def test_zero_samples(self):
        x = random_probe(2, seed=0)
        sol = solve_sdp(build_sdp(np.zeros(x.L), x))
        assert_allclose(sol.q, 0)
        self.assertEqual(sol.objective, 0)
        self.assertTrue(sol.feasible)
        self.assertTrue(sol.converged)

    def test_capacity_ceiling(self):
        x = random_probe(16, seed=0)
        with self.assertRaises(CapacityError):
            solve_sdp(build_sdp(np.ones(x.L), x))

    def test_unknown_backend(self):
        x = random_probe(1, seed=0)
        with self.assertRaises(ConfigError):
            solve_sdp(build_sdp(np.ones(x.L), x), backend='sdpt3')

    def test_restore_feasibility(self):
        x = random_probe(1, seed=1)
        problem = build_sdp(np.ones(x.L), x)
        _, Q = problem.trivially_feasible()
        q = random_complex(x.L, seed=2)
        q *= 2 / (x.L * np.linalg.norm(problem.coeff_map(q)))
        self.assertLess(constraint_report(problem, q, Q)['min_eig'], -1e-3)

        q_new, Q_new, eps = restore_feasibility(problem, q, Q)
        report = constraint_report(problem, q_new, Q_new)
        self.assertGreater(eps, 0)
        self.assertGreaterEqual(report['min_eig'], -1e-12)
        self.assertLessEqual(report['trace_residual'], 1e-12)
        assert_allclose(q_new / np.linalg.norm(q_new), q / np.linalg.norm(q))


class TestSolveSdpSingleTarget(TestCase):
    @classmethod
    def setUpClass(cls):
        cls.x = draw_probing_signal(2, 'gaussian', seed=3)
        cls.truth = TargetScene.from_arrays([0.31], [0.64], [0.8 * np.exp(0.4j)])
        cls.y = synthesize_periodic(cls.truth, cls.x)
        cls.problem = build_sdp(cls.y, cls.x)
        cls.sol = solve_quietly(cls.problem)

    def test_constraints_recomputed(self):
        report = constraint_report(self.problem, self.sol.q, self.sol.Q)
        self.assertGreaterEqual(report['min_eig'], -1e-7)
        self.assertGreaterEqual(report['min_eig_Q'], -1e-7)
        self.assertLessEqual(report['trace_residual'], 1e-6)
        self.assertTrue(self.sol.feasible)

    def test_objective_equals_atomic_norm(self):
        assert_allclose(self.sol.objective, 0.8, rtol=1e-3)

    def test_weak_duality(self):
        self.assertLessEqual(np.vdot(self.y.samples, self.sol.q).real, 0.8 + 1e-4)

    def test_dual_polynomial_bounded(self):
        report = verify_dual_feasibility(dual_poly(self.sol, self.x))
        self.assertLessEqual(float(report), 1 + 1e-4)
        self.assertGreaterEqual(report.bound, report.grid_max)

    def test_log(self):
        frame = self.sol.log.to_frame()
        self.assertIn('primal_residual', frame.columns)
        self.assertEqual(frame['iteration'].iloc[-1], self.sol.iterations)


class TestSolveSdpTwoTargets(TestCase):
    def test_weak_duality(self):
        x = draw_probing_signal(2, 'unit_modulus', seed=7)
        truth = TargetScene.from_arrays([0.1, 0.6], [0.2, 0.7], [1.0, -0.5j])
        y = synthesize_periodic(truth, x)
        sol = solve_quietly(build_sdp(y, x), opts=SdpOptions(max_iter=3000))
        self.assertTrue(sol.feasible)
        self.assertLessEqual(np.vdot(y.samples, sol.q).real, 1.5 + 1e-4)


class TestCvxpyBackend(TestCase):
    def test_agrees_with_admm(self):
        x = draw_probing_signal(1, 'gaussian', seed=5)
        truth = TargetScene.from_arrays([0.45], [0.15], [1.2])
        problem = build_sdp(synthesize_periodic(truth, x), x)
        admm = solve_quietly(problem)
        reference = solve_quietly(problem, backend='cvxpy')

        self.assertTrue(reference.feasible)
        self.assertTrue(reference.backend.startswith('cvxpy'))
        assert_allclose(reference.objective, 1.2, rtol=1e-3)
        assert_allclose(admm.objective, reference.objective, rtol=1e-3)


@pytest.mark.slow
class TestLocalizationFromSdp(TestCase):
    def test_two_shift_example(self):
        x = draw_probing_signal(8, 'unit_modulus', seed=0)
        b = np.exp(2j * np.pi * np.array([0.3, 0.75]))
        truth = TargetScene.from_arrays([0.2, 0.8], [0.5, 0.5], b)
        y = synthesize_periodic(truth, x)

        sol = solve_quietly(build_sdp(y, x))
        self.assertTrue(sol.feasible)
        self.assertLessEqual(max(sol.primal_residual, sol.dual_residual), 1e-6)

        dp = dual_poly(sol, x)
        self.assertLessEqual(float(verify_dual_feasibility(dp)), 1 + 1e-4)
        located = locate_shifts(dp, tol=1e-3)
        self.assertEqual(located.S, 2)
        order = np.argsort(located.taus)
        assert_allclose(located.taus[order], [0.2, 0.8], atol=1e-3)
        assert_allclose(located.nus[order], [0.5, 0.5], atol=1e-3)

    def test_noisy_single_shift(self):
        hits = 0
        for seed in range(10):
            x = draw_probing_signal(5, 'unit_modulus', seed=seed)
            truth = TargetScene.from_arrays([0.5], [0.8], [np.exp(1j * seed)])
            y = add_noise(synthesize_periodic(truth, x), NoiseSpec(snr_db=10, seed=seed))
            located = locate_shifts(dual_poly(solve_quietly(build_sdp_noisy(y, x, 0.8)), x), tol=1e-3)
            if located.S and min(max(abs(r.tau - 0.5), abs(r.nu - 0.8)) for r in located.shifts) <= 2e-2:
                hits += 1
        self.assertGreaterEqual(hits, 8)

    def test_true_shifts_are_located(self):
        n_half = 6
        hits = 0
        for seed in range(50):
            x = draw_probing_signal(n_half, 'gaussian', seed=seed)
            truth = draw_scene(2, min_sep=2.38 / n_half, b_dist='unit_modulus', seed=seed)
            y = synthesize_periodic(truth, x)
            located = locate_shifts(dual_poly(solve_quietly(build_sdp(y, x)), x), tol=1e-3)
            found = all(
                any(r.distance(s) <= 1e-2 for s in located.shifts) for r in truth.shifts
            )
            hits += found
        self.assertGreaterEqual(hits, 48)
