# SPDX-License-Identifier: Apache-2.0
# Copyright (C) 2024 tesgo contributors. All rights reserved.

from io import StringIO
import json
import logging
import os
import tempfile

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from tesgo.core.runs import PROFILE_HEADER, read_results, write_results
from tesgo.interfaces.management.commands.solve import resolve_problems
from tesgo.tests.fake_generator import gen_run_records


logger = logging.getLogger()


class CommandTestCase(SimpleTestCase):
    def setUp(self):
        self.tmpdir = tempfile.TemporaryDirectory()

    def tearDown(self):
        self.tmpdir.cleanup()

    def path(self, name):
        return os.path.join(self.tmpdir.name, name)

    def call(self, *args):
        out, err = StringIO(), StringIO()
        call_command(*args, stdout=out, stderr=err)
        return out.getvalue(), err.getvalue()

    def assertReturnCode(self, returncode, *args):
        with self.assertRaises(CommandError) as cm:
            self.call(*args)
        logger.info(f'{args} -> {cm.exception}')
        self.assertEqual(cm.exception.returncode, returncode)


class SolveCommandTest(CommandTestCase):
    def test_solve_to_stdout(self):
        logger.info('TEST: solve writes one CSV row per run')

        out, _ = self.call('solve', '--problem', 'EX1', '--preset', 'full')
        records = read_results(StringIO(out))
        self.assertEqual(len(records), 1)
        self.assertEqual(records[0].problem, 'EX1')
        self.assertAlmostEqual(records[0].f_opt, -11.0, places=6)
        self.assertEqual(records[0].f_star, -11.0)
        logger.info('PASSED')

    def test_solve_to_file(self):
        logger.info('TEST: solve with a configuration file, a log and an output file')

        conf = self.path('conf.json')
        with open(conf, 'w') as conf_file:
            json.dump({'solver': {'K': 20}}, conf_file)

        out, _ = self.call(
            'solve',
            '--problem',
            'EX1',
            '--problem',
            'P19',
            '--solver',
            'dca_local',
            '--starts',
            '2',
            '--config',
            conf,
            '--log',
            self.path('run.log'),
            '--out',
            self.path('runs.csv'),
        )
        self.assertIn('4 runs written', out)

        with open(self.path('runs.csv'), newline='') as stream:
            records = read_results(stream, origin='runs.csv')
        self.assertEqual(
            [(r.solver, r.problem, r.start_id) for r in records],
            [
                ('dca_local', 'EX1', 0),
                ('dca_local', 'EX1', 1),
                ('dca_local', 'P19', 0),
                ('dca_local', 'P19', 1),
            ],
        )
        with open(self.path('run.log')) as log:
            entries = [json.loads(line) for line in log if line.strip()]
        self.assertTrue(any(entry['name'] == 'tesgo.solver' for entry in entries))
        logger.info('PASSED')

    def test_repeatable_runs(self):
        logger.info('TEST: Seeded runs give identical rows apart from the wall time')

        args = ('solve', '--problem', 'P16', '--solver', 'dca_local', '--starts', '3')
        first, _ = self.call(*args, '--seed', '7')
        second, _ = self.call(*args, '--seed', '7')

        header = first.splitlines()[0].split(',')
        wall = header.index('wall_seconds')

        def strip_wall(output):
            rows = [line.split(',') for line in output.splitlines()]
            return [row[:wall] + row[wall + 1 :] for row in rows]

        self.assertEqual(strip_wall(first), strip_wall(second))
        records = read_results(StringIO(first))
        self.assertEqual(len(records), 3)
        self.assertEqual(records[0].f_opt, 50.0)
        self.assertEqual(records[0].status, 'local_only')
        logger.info('PASSED')

    def test_resolve_problems(self):
        logger.info('TEST: Fixed-dimension problems ignore requested dimensions')

        self.assertEqual(
            resolve_problems(['P15', 'P18'], [2, 10]),
            [('P15', 2), ('P18', 2), ('P18', 10)],
        )
        self.assertEqual(resolve_problems(['P16'], []), [('P16', 2)])
        logger.info('PASSED')

    def test_usage_errors(self):
        logger.info('TEST: Usage errors exit with 1')

        self.assertReturnCode(1, 'solve', '--problem', 'P99')
        self.assertReturnCode(1, 'solve', '--problem', 'P3')
        self.assertReturnCode(1, 'solve', '--problem', 'P16', '--n', '1')
        self.assertReturnCode(1, 'solve', '--problem', 'P16', '--preset', 'fastest')
        self.assertReturnCode(1, 'solve', '--problem', 'P16', '--config', self.path('none'))
        logger.info('PASSED')

    def test_runtime_error(self):
        logger.info('TEST: Failures while writing results exit with 2')

        target = os.path.join(self.path('missing-dir'), 'runs.csv')
        self.assertReturnCode(2, 'solve', '--problem', 'EX1', '--out', target)
        logger.info('PASSED')


class ProfilesCommandTest(CommandTestCase):
    def write_runs(self, name, table):
        path = self.path(name)
        with open(path, 'w', newline='') as stream:
            write_results(gen_run_records(table), stream)
        return path

    def test_profiles(self):
        logger.info('TEST: profiles merges results files')

        first = self.write_runs('tesgo.csv', {'tesgo': {('P16', 2, 0): {'f_opt': 0.0}}})
        second = self.write_runs('dca.csv', {'dca_local': {('P16', 2, 0): {'f_opt': 1.0}}})

        out, err = self.call(
            'profiles',
            '--in',
            first,
            second,
            '--measure',
            'accuracy',
            '--measure',
            'time',
        )
        lines = out.splitlines()
        self.assertEqual(lines[0], ','.join(PROFILE_HEADER))
        measures = {line.split(',')[0] for line in lines[1:]}
        self.assertEqual(measures, {'accuracy', 'time'})
        self.assertEqual(err, '')
        logger.info('PASSED')

    def test_missing_runs(self):
        logger.info('TEST: profiles warns about missing runs')

        path = self.write_runs(
            'runs.csv',
            {
                'tesgo': {('P16', 2, 0): {}, ('P19', 2, 0): {'f_opt': -0.25}},
                'dca_local': {('P16', 2, 0): {}},
            },
        )
        out, err = self.call('profiles', '--in', path, '--out', self.path('profiles.csv'))
        self.assertIn('no dca_local run on', err)
        self.assertIn('1 profiles written', out)
        logger.info('PASSED')

    def test_errors(self):
        logger.info('TEST: profiles exit codes')

        self.assertReturnCode(1, 'profiles', '--in', self.path('none.csv'))

        broken = self.path('broken.csv')
        with open(broken, 'w') as stream:
            stream.write('solver,problem\ntesgo,P16\n')
        self.assertReturnCode(2, 'profiles', '--in', broken)
        self.assertReturnCode(1, 'profiles', '--in', broken, '--tau', '-1')
        logger.info('PASSED')


class ListProblemsCommandTest(CommandTestCase):
    def test_listproblems(self):
        logger.info('TEST: listproblems prints the registry')

        out, _ = self.call('listproblems')
        lines = out.splitlines()
        self.assertTrue(lines[0].startswith('name'))
        self.assertTrue(any(line.startswith('P18') and '-3.0417' in line for line in lines))
        self.assertTrue(any(line.startswith('P1 ') and 'externally' in line for line in lines))

        out, _ = self.call('listproblems', '--group', 'external')
        self.assertEqual(len(out.splitlines()), 15)
        logger.info('PASSED')


class SummaryCommandTest(CommandTestCase):
    def test_summary(self):
        logger.info('TEST: summary prints per-run rows and totals')

        path = self.path('runs.csv')
        with open(path, 'w', newline='') as stream:
            write_results(
                gen_run_records(
                    {
                        'tesgo': {
                            ('P19', 2, 0): {'f_opt': -0.25, 'f_star': -0.25},
                            ('P19', 2, 1): {'f_opt': 0.0, 'f_star': -0.25},
                        },
                    },
                ),
                stream,
            )

        out, _ = self.call('summary', '--in', path, '--tau', '0.01')
        self.assertIn('f_opt', out.splitlines()[0])
        self.assertIn('tesgo: 2 runs, 1/2 solved with tau=0.01', out)
        logger.info('PASSED')
