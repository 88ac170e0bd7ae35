# SPDX-License-Identifier: Apache-2.0
# Copyright (C) 2024 tesgo contributors. All rights reserved.

from tesgo.data.problems import ProblemGroup, external_names, iter_specs, make
from tesgo.interfaces.management.base import TesgoCommand


ROW_FORMAT = '{:<5} {:<9} {:>4} {:>10} {:<16} {}'


def problem_rows(group=None):
    '''
    (name, group, n, f_star, box, description) in registry order, one row per
    listed dimension; externally defined names come last.
    '''

    rows = []
    if group in (None, ProblemGroup.BUILTIN):
        for spec in iter_specs():
            for n in spec.listed_dimensions():
                problem = make(spec.name, n)
                low, high = problem.box.lower[0], problem.box.upper[0]
                f_star = '' if problem.f_star is None else f'{problem.f_star:.4f}'
                box = f'[{low:g}, {high:g}]^{n}'
                rows.append((spec.name, ProblemGroup.BUILTIN, n, f_star, box, spec.description))

    if group in (None, ProblemGroup.EXTERNAL):
        rows.extend(
            (name, ProblemGroup.EXTERNAL, '', '', '', 'externally defined')
            for name in external_names()
        )
    return rows


class Command(TesgoCommand):
    help = 'List registered problems with their dimensions, optimal values and boxes.'

    def add_arguments(self, parser):
        parser.add_argument(
            '-g',
            '--group',
            choices=ProblemGroup.all(),
            default=None,
            help='Only list problems of this group',
        )

    def handle(self, *args, **options):
        header = ROW_FORMAT.format('name', 'group', 'n', 'f_star', 'box', 'description')
        self.stdout.write(header)
        for row in problem_rows(options['group']):
            self.stdout.write(ROW_FORMAT.format(*row).rstrip())
