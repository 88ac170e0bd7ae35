# SPDX-License-Identifier: Apache-2.0
# Copyright (C) 2024 tesgo contributors. All rights reserved.

from tesgo.core.argparse import parser_type_non_negative_real
from tesgo.core.config.services import getattr_from_conf
from tesgo.core.exceptions import ResultsFormatError
from tesgo.core.metrics import is_tau_approx, relative_error
from tesgo.core.runs import load_results
from tesgo.core.utils import unordered_group_by
from tesgo.interfaces.management.base import TesgoCommand


HEADER_FORMAT = '{:<10} {:<5} {:>4} {:>5} {:>14} {:>10} {:>10} {:>8} {:>8} {:>8} {:>8} {:>9}'
ROW_FORMAT = (
    '{:<10} {:<5} {:>4} {:>5} {:>14.6f} {:>10} {:>10} {:>8} {:>8} {:>8} {:>8} {:>9.4f}'
)

COLUMNS = ('solver', 'prob', 'n', 'start', 'f_opt', 'f_star', 'E')
COLUMNS += ('n_f1', 'n_f2', 'n_g1', 'n_g2', 'CPU')


def summary_row(record):
    f_star = error = ''
    if record.f_star is not None:
        f_star = f'{record.f_star:.4f}'
        error = f'{relative_error(record.f_opt, record.f_star):.2e}'
    counters = record.counters
    return ROW_FORMAT.format(
        record.solver,
        record.problem,
        record.n,
        record.start_id,
        record.f_opt,
        f_star,
        error,
        counters.n_f1,
        counters.n_f2,
        counters.n_g1,
        counters.n_g2,
        record.wall_time,
    )


class Command(TesgoCommand):
    help = '''Print a per-run table of results CSV files: optimal values,
              relative errors, evaluation counts and CPU time.'''

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
            '--tau',
            type=parser_type_non_negative_real,
            default=None,
            help='Relative error bound of solved runs in the totals (PROFILE_TAU)',
        )

    def handle(self, *args, **options):
        try:
            records = load_results(options['inputs'])
        except OSError as e:
            raise self.usage_error(e) from e
        except ResultsFormatError as e:
            raise self.runtime_error(e) from e

        tau = options['tau']
        if tau is None:
            tau = float(getattr_from_conf('PROFILE_TAU', default=0.2))

        self.stdout.write(HEADER_FORMAT.format(*COLUMNS))
        for record in sorted(records, key=lambda r: (r.solver, r.key)):
            self.stdout.write(summary_row(record).rstrip())

        self.stdout.write('')
        for solver, runs in sorted(unordered_group_by(records, 'solver').items()):
            known = [run for run in runs if run.f_star is not None]
            solved = sum(is_tau_approx(run.f_opt, run.f_star, tau) for run in known)
            cpu = sum(run.wall_time for run in runs)
            self.stdout.write(
                f'{solver}: {len(runs)} runs, {solved}/{len(known)} solved '
                f'with tau={tau:g}, CPU {cpu:.4f}s',
            )
