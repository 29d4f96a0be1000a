from unittest import TestCase
from unittest.mock import patch

import cvxpy as cp
import numpy as np
from numpy.testing import assert_allclose

from src.srradar.utils.cvx import candidate_solvers, solve_with_fallback


class TestCandidateSolvers(TestCase):
    def test_clarabel_then_scs(self):
        with patch('cvxpy.installed_solvers', return_value=['ECOS', 'SCS', 'CLARABEL']):
            self.assertEqual(candidate_solvers(), ['CLARABEL', 'SCS'])

    def test_scs_when_clarabel_missing(self):
        with patch('cvxpy.installed_solvers', return_value=['SCS']):
            self.assertEqual(candidate_solvers(), ['SCS'])

    def test_requested_solver_first(self):
        with patch('cvxpy.installed_solvers', return_value=['SCS', 'CLARABEL']):
            self.assertEqual(candidate_solvers('SCS'), ['SCS', 'CLARABEL'])

    def test_nothing_installed(self):
        with patch('cvxpy.installed_solvers', return_value=[]):
            with self.assertRaises(cp.error.SolverError):
                candidate_solvers()


class TestSolveWithFallback(TestCase):
    def test_scs_solves_socp(self):
        if 'SCS' not in cp.installed_solvers():
            self.skipTest('SCS is not installed.')

        z = cp.Variable(3)
        target = np.array([3.0, -4.0, 0.0])
        problem = cp.Problem(cp.Minimize(cp.norm(z - target, 2)), [cp.norm(z, 2) <= 1])
        used = solve_with_fallback(problem, ['SCS'], SCS={'eps_abs': 1e-9, 'eps_rel': 1e-9})
        self.assertEqual(used, 'SCS')
        assert_allclose(z.value, target / 5, atol=1e-4)
