# SPDX-License-Identifier: Apache-2.0
# Copyright (C) 2024 tesgo contributors. All rights reserved.

from io import StringIO
import logging

from django.test import SimpleTestCase
import numpy as np

from tesgo.core.driver import Preset, preset
from tesgo.core.exceptions import ContractViolation, ResultsFormatError
from tesgo.core.metrics import accuracy_profile
from tesgo.core.problem import EvalCounters
from tesgo.core.runs import (
    PROFILE_HEADER,
    RESULTS_HEADER,
    RunRequest,
    SolverName,
    build_tasks,
    execute_tasks,
    read_results,
    start_points,
    write_profiles,
    write_results,
)
from tesgo.data.problems import make
from tesgo.tests.fake_generator import gen_run_record


logger = logging.getLogger()


class StartPointsTest(SimpleTestCase):
    def test_start_points(self):
        logger.info('TEST: Start points are reproducible and lie in the box')

        points = start_points('P16', 5, 4, seed=3)
        self.assertEqual(len(points), 4)
        np.testing.assert_array_equal(points[0], np.zeros(5))
        box = make('P16', 5).box
        self.assertTrue(all(box.contains(x) for x in points))

        again = start_points('P16', 5, 4, seed=3)
        for x, y in zip(points, again):
            np.testing.assert_array_equal(x, y)

        random_only = start_points('P16', 5, 2, seed=3, random_starts=True)
        self.assertFalse(np.array_equal(random_only[0], np.zeros(5)))
        logger.info('PASSED')

    def test_tasks(self):
        logger.info('TEST: Tasks cover every (problem, start) pair in order')

        request = RunRequest(problems=[('P16', 2), ('EX1', 1)], seed=9, starts=2)
        tasks = build_tasks(request, lambda n: preset(Preset.SIMPLE, n))
        self.assertEqual(
            [(task.problem, task.n, task.start_id) for task in tasks],
            [('P16', 2, 0), ('P16', 2, 1), ('EX1', 1, 0), ('EX1', 1, 1)],
        )
        self.assertTrue(all(task.cfg.seed == 9 for task in tasks))
        self.assertEqual(tasks[0].cfg.K, 10)

        with self.assertRaises(ContractViolation):
            RunRequest(problems=[('P16', 2)], starts=0)
        with self.assertRaises(ContractViolation):
            RunRequest(problems=[('P16', 2)], solver='newton')
        logger.info('PASSED')

    def test_execute(self):
        logger.info('TEST: Both solvers on the one-dimensional example')

        records = []
        for solver in SolverName.all():
            request = RunRequest(problems=[('EX1', 1)], solver=solver)
            tasks = build_tasks(request, lambda n: preset(Preset.FULL, n))
            records.extend(execute_tasks(tasks))

        by_solver = {record.solver: record for record in records}
        self.assertAlmostEqual(by_solver[SolverName.TESGO].f_opt, -11.0, places=9)
        self.assertAlmostEqual(by_solver[SolverName.DCA_LOCAL].f_opt, -7.0, places=9)
        self.assertEqual(by_solver[SolverName.DCA_LOCAL].status, 'local_only')
        self.assertEqual(by_solver[SolverName.TESGO].f_star, -11.0)
        logger.info('PASSED')


class ResultsFormatTest(SimpleTestCase):
    def test_results_csv(self):
        logger.info('TEST: Results CSV layout')

        record = gen_run_record(
            set_data={
                'f_opt': -0.3524,
                'f_star': -0.3524,
                'counters': EvalCounters(1, 2, 3, 4),
            },
        )
        stream = StringIO()
        write_results([record], stream)
        lines = stream.getvalue().splitlines()

        self.assertEqual(lines[0], ','.join(RESULTS_HEADER))
        self.assertEqual(lines[1], 'tesgo,P16,2,0,-0.3524,-0.3524,0,1,2,3,4,1,approx_global')

        stream.seek(0)
        self.assertEqual(read_results(stream), [record])
        logger.info('PASSED')

    def test_results_errors(self):
        logger.info('TEST: Malformed results files are rejected')

        with self.assertRaises(ResultsFormatError):
            read_results(StringIO('solver,problem\ntesgo,P16\n'))

        header = ','.join(RESULTS_HEADER)
        bad_row = 'tesgo,P16,2,0,abc,,,1,2,3,4,1,approx_global'
        with self.assertRaises(ResultsFormatError) as cm:
            read_results(StringIO(f'{header}\n{bad_row}\n'), origin='runs.csv')
        self.assertIn('runs.csv:2', str(cm.exception))
        logger.info('PASSED')

    def test_profiles_csv(self):
        logger.info('TEST: Profiles CSV layout')

        records = [
            gen_run_record('tesgo', set_data={'f_opt': 0.0}),
            gen_run_record('dca_local', set_data={'f_opt': 1.0}),
        ]
        stream = StringIO()
        write_profiles([accuracy_profile(records, tau_grid=[0.0, 1.0])], stream)
        lines = stream.getvalue().splitlines()

        self.assertEqual(lines[0], ','.join(PROFILE_HEADER))
        self.assertEqual(
            lines[1:],
            [
                'accuracy,dca_local,0,0',
                'accuracy,dca_local,1,1',
                'accuracy,tesgo,0,1',
                'accuracy,tesgo,1,1',
            ],
        )
        logger.info('PASSED')
