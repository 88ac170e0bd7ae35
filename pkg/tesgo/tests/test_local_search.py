# SPDX-License-Identifier: Apache-2.0
# Copyright (C) 2024 tesgo contributors. All rights reserved.

import logging

from django.test import SimpleTestCase
import numpy as np

from tesgo.core.exceptions import ContractViolation
from tesgo.core.local_search import (
    ConvexSolverConfig,
    LocalSearchConfig,
    convex_minimize,
    dc_local_search,
)
from tesgo.core.problem import SolveContext, eval_f
from tesgo.data.problems import make


logger = logging.getLogger()


class ConvexMinimizeTest(SimpleTestCase):
    def test_smooth_quadratic(self):
        logger.info('TEST: Normalized subgradient steps reach a smooth minimizer')

        target = np.array([0.3, -1.7])

        def f(x):
            return float((x - target) @ (x - target))

        def g(x):
            return 2.0 * (x - target)

        solution = convex_minimize((f, g), np.zeros(2))
        np.testing.assert_allclose(solution.x, target, atol=1e-5)
        self.assertLessEqual(solution.value, f(np.zeros(2)))
        self.assertTrue(solution.converged)
        logger.info('PASSED')

    def test_lattice_steps(self):
        logger.info('TEST: Unit steps stop exactly at a zero subgradient')

        solution = convex_minimize(
            (lambda x: float((x[0] - 3.0) ** 2), lambda x: 2.0 * (x - 3.0)),
            np.zeros(1),
        )
        self.assertEqual(solution.x[0], 3.0)
        self.assertEqual(solution.value, 0.0)
        self.assertEqual(solution.iterations, 4)
        logger.info('PASSED')

    def test_subproblems(self):
        logger.info('TEST: Escape-type subproblems of the example and of P16')

        solution = convex_minimize(
            (lambda x: float(x[0] ** 2 - 6.1 * x[0] + 2.1), lambda x: 2.0 * x - 6.1),
            np.ones(1),
        )
        self.assertAlmostEqual(solution.x[0], 3.05, places=6)
        self.assertAlmostEqual(solution.value, -7.2025, places=9)

        solution = convex_minimize(
            (
                lambda x: float(x @ x) + 50.0 - 10.0 * x[0],
                lambda x: 2.0 * x - np.array([10.0, 0.0]),
            ),
            np.zeros(2),
        )
        np.testing.assert_array_equal(solution.x, [5.0, 0.0])
        self.assertEqual(solution.value, 25.0)

        def norm_subgrad(x):
            norm = np.linalg.norm(x)
            return x / norm if norm > 0.0 else np.zeros_like(x)

        for x0 in ([3.0, -4.0], [0.1, 0.0, 7.0]):
            solution = convex_minimize(
                (lambda x: float(np.linalg.norm(x)), norm_subgrad),
                np.array(x0),
            )
            self.assertLess(solution.value, 1e-6)
        logger.info('PASSED')

    def test_nonsmooth(self):
        logger.info('TEST: Step decay reaches the kink of a polyhedral function')

        def f(x):
            return abs(x[0]) + abs(x[1] - 1.0)

        def g(x):
            return np.array([np.sign(x[0]), np.sign(x[1] - 1.0)])

        x0 = np.array([2.5, -3.3])
        solution = convex_minimize((f, g), x0)
        self.assertLess(solution.value, 1e-4)
        self.assertLessEqual(solution.value, f(x0))
        logger.info('PASSED')

    def test_config_checks(self):
        logger.info('TEST: Solver configurations reject out-of-range values')

        with self.assertRaises(ValueError):
            ConvexSolverConfig(decay=1.5)
        with self.assertRaises(ValueError):
            ConvexSolverConfig(patience=0)
        with self.assertRaises(ValueError):
            LocalSearchConfig(tol_step=0.0)
        logger.info('PASSED')


class DcLocalSearchTest(SimpleTestCase):
    def test_reaches_critical_point(self):
        logger.info('TEST: DCA from (1, 1) reaches the minimizer (5, 5) of P16')

        problem = make('P16', 2)
        point = dc_local_search(problem, [1.0, 1.0])
        np.testing.assert_allclose(point.x, [5.0, 5.0], atol=1e-5)
        self.assertAlmostEqual(point.f_value, 0.0, places=6)
        self.assertLess(point.criticality_residual, 1e-3)
        self.assertTrue(point.converged)

        point = dc_local_search(problem, [6.0, 6.0])
        np.testing.assert_allclose(point.x, [5.0, 5.0], atol=1e-5)
        self.assertAlmostEqual(point.f_value, 0.0, places=6)
        logger.info('PASSED')

    def test_stays_at_critical_point(self):
        logger.info('TEST: DCA does not leave the non-global critical point 0 of P16')

        problem = make('P16', 2)
        ctx = SolveContext(problem)
        point = dc_local_search(ctx, np.zeros(2))
        np.testing.assert_array_equal(point.x, np.zeros(2))
        self.assertEqual(point.f_value, 50.0)
        self.assertGreater(ctx.counters.n_f1, 0)
        self.assertGreater(ctx.counters.n_g2, 0)
        logger.info('PASSED')

    def test_never_increases(self):
        logger.info('TEST: Local search values never exceed the start value')

        rng = np.random.default_rng(11)
        for name, n in (('P15', 2), ('P17', 2), ('P18', 5), ('P20', 5)):
            problem = make(name, n)
            for _ in range(3):
                x0 = problem.box.sample(rng)
                point = dc_local_search(problem, x0)
                logger.info(f'{name}: {eval_f(problem, x0):.6g} -> {point.f_value:.6g}')
                self.assertLessEqual(point.f_value, eval_f(problem, x0) + 1e-12)
        logger.info('PASSED')

    def test_wrong_dimension(self):
        logger.info('TEST: Local search checks the start point dimension')

        with self.assertRaises(ContractViolation):
            dc_local_search(make('P16', 2), np.zeros(3))
        logger.info('PASSED')
