# SPDX-License-Identifier: Apache-2.0
# Copyright (C) 2024 tesgo contributors. All rights reserved.

import logging

from tesgo.core.argparse import parser_type_non_negative_real
from tesgo.core.config.services import getattr_from_conf
from tesgo.core.exceptions import ResultsFormatError, TesgoError
from tesgo.core.metrics import (
    ProfileMeasure,
    accuracy_profile,
    drop_incomplete,
    find_missing_runs,
    performance_profile,
)
from tesgo.core.runs import load_results, write_profiles
from tesgo.interfaces.management.base import TesgoCommand


logger = logging.getLogger('tesgo.solver')


class Command(TesgoCommand):
    help = '''Build accuracy and performance profiles from results CSV files.
              Problems some solver did not run on are left out with a warning.'''

    def add_arguments(self, parser):
        parser.add_argument(
            '-i',
            '--in',
            dest='inputs',
            nargs='+',
            required=True,
            help='Results CSV files written by the solve command',
        )
        parser.add_argument(
            '-m',
            '--measure',
            choices=ProfileMeasure.all(),
            action='append',
            help='Profile to build, may be repeated (default: accuracy)',
        )
        parser.add_argument(
            '--tau',
            type=parser_type_non_negative_real,
            default=None,
            help='A run is solved when its relative error is at most tau (PROFILE_TAU)',
        )
        parser.add_argument(
            '--solved-only',
            action='store_true',
            help='Count unsolved runs as infinitely inaccurate in the accuracy profile',
        )
        parser.add_argument(
            '-o',
            '--out',
            type=str,
            help='Profiles CSV file (standard output when omitted)',
        )

    def handle(self, *args, **options):
        measures = options['measure'] or [ProfileMeasure.ACCURACY]

        try:
            records = load_results(options['inputs'])
        except OSError as e:
            raise self.usage_error(e) from e
        except ResultsFormatError as e:
            raise self.runtime_error(e) from e

        missing = find_missing_runs(records)
        if missing:
            for solver, key in missing:
                self.stderr.write(f'Warning: no {solver} run on {key}, problem left out')
            logger.warning('%d missing runs, incomplete problems left out', len(missing))
            records = drop_incomplete(records, missing)

        tau = options['tau']
        if tau is None:
            tau = float(getattr_from_conf('PROFILE_TAU', default=0.2))

        try:
            tables = []
            for measure in dict.fromkeys(measures):
                if measure == ProfileMeasure.ACCURACY:
                    solved_tau = tau if options['solved_only'] else None
                    tables.append(accuracy_profile(records, solved_tau=solved_tau))
                else:
                    tables.append(performance_profile(records, measure, tau=tau))
        except TesgoError as e:
            raise self.runtime_error(e) from e

        if options['out']:
            with open(options['out'], 'w', newline='', encoding='utf-8') as out:
                write_profiles(tables, out)
            msg = f'{len(tables)} profiles written to {options["out"]}'
            self.stdout.write(self.style.SUCCESS(msg))
        else:
            write_profiles(tables, self.stdout)
