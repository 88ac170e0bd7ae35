# SPDX-License-Identifier: Apache-2.0
# Copyright (C) 2024 tesgo contributors. All rights reserved.

import logging

from tesgo.core.argparse import parser_type_positive_int, parser_type_problem
from tesgo.core.config.services import build_config, load_conf_file
from tesgo.core.driver import Preset
from tesgo.core.exceptions import TesgoError, UnsupportedProblemError
from tesgo.core.logging import get_or_create_run_logger, release_run_logger
from tesgo.core.runs import RunRequest, SolverName, build_tasks, execute_tasks, write_results
from tesgo.data.problems import get_spec
from tesgo.interfaces.management.base import TesgoCommand


logger = logging.getLogger('tesgo.solver')

DEFAULT_PARAMETRIC_N = 2


def resolve_problems(names, dimensions):
    '''
    (name, n) pairs: fixed-dimension problems use their own n, parametric
    ones are paired with every requested n.
    '''

    pairs = []
    for name in names:
        spec = get_spec(name)
        if not spec.parametric:
            pairs.append((name, spec.fixed_n))
            continue
        for n in dimensions or [DEFAULT_PARAMETRIC_N]:
            if not spec.supports(n):
                raise UnsupportedProblemError(name, n=n, supported=['n >= 2'])
            pairs.append((name, n))
    return pairs


class Command(TesgoCommand):
    help = '''Run a solver on registered problems and write one CSV row per
              (problem, start) run. Fixed-dimension problems ignore --n.'''

    def add_arguments(self, parser):
        parser.add_argument(
            '-p',
            '--problem',
            type=parser_type_problem,
            action='append',
            required=True,
            help='Problem name, may be repeated',
        )
        parser.add_argument(
            '-n',
            '--n',
            type=parser_type_positive_int,
            action='append',
            default=[],
            help='Dimension of parametric problems, may be repeated',
        )
        parser.add_argument(
            '--solver',
            choices=SolverName.all(),
            default=SolverName.TESGO,
            help='Global solver or the local comparator',
        )
        parser.add_argument(
            '--preset',
            choices=Preset.all(),
            default=None,
            help='Solver parameter preset (DEFAULT_PRESET when omitted)',
        )
        parser.add_argument(
            '--seed',
            type=int,
            default=0,
            help='Seed of random directions and random start points',
        )
        parser.add_argument(
            '--starts',
            type=parser_type_positive_int,
            default=1,
            help='Number of start points per problem',
        )
        parser.add_argument(
            '--random-starts',
            action='store_true',
            help='Draw start 0 at random too instead of using the default start',
        )
        parser.add_argument(
            '-j',
            '--jobs',
            type=parser_type_positive_int,
            default=1,
            help='Number of worker processes',
        )
        parser.add_argument(
            '--config',
            type=str,
            help='JSON configuration file (see solver_conf.json)',
        )
        parser.add_argument(
            '--log',
            type=str,
            help='Write a JSON log of the runs to this file',
        )
        parser.add_argument(
            '-o',
            '--out',
            type=str,
            help='Results CSV file (standard output when omitted)',
        )

    def handle(self, *args, **options):
        try:
            conf = load_conf_file(options['config']) if options['config'] else None
            overrides = (conf or {}).get('solver')
            request = RunRequest(
                problems=resolve_problems(options['problem'], options['n']),
                solver=options['solver'],
                preset=options['preset'],
                seed=options['seed'],
                starts=options['starts'],
                random_starts=options['random_starts'],
                jobs=options['jobs'],
                overrides=overrides or {},
            )
            tasks = build_tasks(
                request,
                lambda n: build_config(request.preset, n, request.overrides, conf),
            )
        except TesgoError as e:
            raise self.usage_error(e) from e

        run_logger = handler = None
        if options['log']:
            run_logger, handler = get_or_create_run_logger(options['log'])

        try:
            logger.info('running %d tasks with %s', len(tasks), request.solver)
            records = execute_tasks(tasks, request.jobs)
            if options['out']:
                with open(options['out'], 'w', newline='', encoding='utf-8') as out:
                    write_results(records, out)
                msg = f'{len(records)} runs written to {options["out"]}'
                self.stdout.write(self.style.SUCCESS(msg))
            else:
                write_results(records, self.stdout)
        except Exception as e:
            raise self.runtime_error(e) from e
        finally:
            if handler is not None:
                release_run_logger(run_logger, handler)
