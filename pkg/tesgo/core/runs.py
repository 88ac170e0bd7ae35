# SPDX-License-Identifier: Apache-2.0
# Copyright (C) 2024 tesgo contributors. All rights reserved.

'''
Benchmark runs: start points, execution of (problem, start) tasks and the
results / profile CSV formats.
'''

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
import csv
import logging

from attrs import Factory, evolve, field, frozen
import numpy as np

from tesgo.core.driver import solve_local, tesgo_solve
from tesgo.core.exceptions import ContractViolation, ResultsFormatError
from tesgo.core.metrics import RunRecord, relative_error
from tesgo.core.problem import EvalCounters
from tesgo.core.utils import format_real, parse_optional_real
from tesgo.data.problems import default_start, make


logger = logging.getLogger('tesgo.solver')

RESULTS_HEADER = [
    'solver',
    'problem',
    'n',
    'start_id',
    'f_opt',
    'f_star',
    'rel_error',
    'n_f1',
    'n_f2',
    'n_g1',
    'n_g2',
    'wall_seconds',
    'status',
]

PROFILE_HEADER = ['measure', 'solver', 'tau', 'value']


class SolverName:
    '''
    This is an interface to describe all solvers a run can use.
    '''

    TESGO = 'tesgo'
    DCA_LOCAL = 'dca_local'

    @classmethod
    def all(cls):
        return [value for name, value in vars(cls).items() if name.isupper()]


@frozen
class RunRequest:
    problems: list = field(converter=list)
    solver: str = SolverName.TESGO
    preset: str | None = None
    seed: int = 0
    starts: int = 1
    random_starts: bool = False
    jobs: int = 1
    overrides: dict = Factory(dict)

    def __attrs_post_init__(self):
        if self.starts < 1:
            msg = f'starts must be at least 1, got {self.starts}'
            raise ContractViolation(msg)
        if self.solver not in SolverName.all():
            msg = f'Unknown solver {self.solver}. Possible are: {", ".join(SolverName.all())}'
            raise ContractViolation(msg)


@frozen
class RunTask:
    solver: str
    problem: str
    n: int
    start_id: int
    x0: np.ndarray = field(eq=False)
    cfg: object = field(eq=False)


def start_points(name, n, count, seed, random_starts=False):
    '''
    `count` start points for one problem. Start 0 is the default start
    unless `random_starts`; the others are drawn uniformly in the box from a
    generator seeded with `seed`, so start i is the same for every run with
    the same seed.
    '''

    problem = make(name, n)
    rng = np.random.default_rng(seed)
    points = []
    if not random_starts:
        points.append(default_start(name, n))
    while len(points) < count:
        points.append(problem.box.sample(rng))
    return points


def build_tasks(request, config_for):
    '''
    Tasks in deterministic (problem, start) order; `config_for(n)` returns
    the TesgoConfig for dimension n.
    '''

    tasks = []
    for name, n in request.problems:
        cfg = evolve(config_for(n), seed=request.seed)
        points = start_points(name, n, request.starts, request.seed, request.random_starts)
        tasks.extend(
            RunTask(request.solver, name, n, start_id, x0, cfg)
            for start_id, x0 in enumerate(points)
        )
    return tasks


def execute_task(task):
    problem = make(task.problem, task.n)
    if task.solver == SolverName.TESGO:
        report = tesgo_solve(problem, task.x0, task.cfg)
    else:
        report = solve_local(problem, task.x0, task.cfg.local, task.cfg.gamma)

    return RunRecord(
        solver=task.solver,
        problem=task.problem,
        n=task.n,
        start_id=task.start_id,
        f_opt=report.f_best,
        counters=report.counters,
        wall_time=report.wall_time,
        status=report.status,
        f_star=problem.f_star,
    )


def execute_tasks(tasks, jobs=1):
    if jobs <= 1 or len(tasks) <= 1:
        return [execute_task(task) for task in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as executor:
        return list(executor.map(execute_task, tasks))


def record_row(record):
    rel_error = None
    if record.f_star is not None:
        rel_error = relative_error(record.f_opt, record.f_star)
    return [
        record.solver,
        record.problem,
        str(record.n),
        str(record.start_id),
        format_real(record.f_opt),
        format_real(record.f_star),
        format_real(rel_error),
        *(str(value) for value in record.counters.as_dict().values()),
        format_real(record.wall_time),
        record.status,
    ]


def write_results(records, stream):
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow(RESULTS_HEADER)
    for record in records:
        writer.writerow(record_row(record))


def _parse_row(row, origin):
    try:
        return RunRecord(
            solver=row['solver'],
            problem=row['problem'],
            n=int(row['n']),
            start_id=int(row['start_id']),
            f_opt=float(row['f_opt']),
            counters=EvalCounters(*(int(row[name]) for name in EvalCounters.FIELDS)),
            wall_time=float(row['wall_seconds']),
            status=row['status'],
            f_star=parse_optional_real(row['f_star']),
        )
    except (AttributeError, TypeError, ValueError) as e:
        msg = f'{origin}: invalid results row {row}: {e}'
        raise ResultsFormatError(msg) from e


def read_results(stream, origin='<stream>'):
    reader = csv.DictReader(stream)
    if reader.fieldnames != RESULTS_HEADER:
        msg = (
            f'{origin}: unexpected results header {reader.fieldnames}, '
            f'expected {",".join(RESULTS_HEADER)}'
        )
        raise ResultsFormatError(msg)
    return [
        _parse_row(row, f'{origin}:{line}')
        for line, row in enumerate(reader, start=2)
    ]


def load_results(paths):
    records = []
    for path in paths:
        with open(path, newline='', encoding='utf-8') as stream:
            records.extend(read_results(stream, origin=path))
    return records


def write_profiles(tables, stream):
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow(PROFILE_HEADER)
    for table in tables:
        for measure, solver, x, value in table.rows():
            writer.writerow([measure, solver, format_real(x), format_real(value)])
