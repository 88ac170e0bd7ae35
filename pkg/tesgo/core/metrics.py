# SPDX-License-Identifier: Apache-2.0
# Copyright (C) 2024 tesgo contributors. All rights reserved.

'''
Solution quality and benchmarking metrics: relative error, tau-approximate
classification, accuracy profiles and Dolan-More performance profiles.

Every (problem, n, start_id) triple counts as a separate problem of the
profiles; several starts of one problem are not averaged.
'''

from __future__ import annotations

import logging
import math

from attrs import Factory, define, field, frozen
import numpy as np

from tesgo.core.config.services import getattr_from_conf
from tesgo.core.exceptions import ContractViolation, MissingRunsError
from tesgo.core.problem import EvalCounters
from tesgo.core.utils import unordered_group_by


logger = logging.getLogger('tesgo.solver')


class ProfileMeasure:
    '''
    This is an interface to describe all measures profiles can be built on.
    '''

    ACCURACY = 'accuracy'
    TIME = 'time'
    NFEV = 'nfev'

    @classmethod
    def all(cls):
        return [value for name, value in vars(cls).items() if name.isupper()]

    @classmethod
    def performance(cls):
        return [cls.TIME, cls.NFEV]


@frozen
class RunRecord:
    solver: str
    problem: str
    n: int
    start_id: int
    f_opt: float
    counters: EvalCounters = Factory(EvalCounters)
    wall_time: float = 0.0
    status: str = ''
    f_star: float | None = None

    def __attrs_post_init__(self):
        if not math.isfinite(self.f_opt):
            msg = f'{self.solver}@{self.key}: f_opt must be finite, got {self.f_opt}'
            raise ContractViolation(msg)
        if self.wall_time < 0:
            msg = f'{self.solver}@{self.key}: negative wall time {self.wall_time}'
            raise ContractViolation(msg)

    @property
    def key(self):
        return (self.problem, self.n, self.start_id)

    @property
    def nfev(self):
        '''Average of the evaluation counts of the two DC components.'''
        return (self.counters.n_f1 + self.counters.n_f2) / 2.0

    def measure(self, name):
        if name == ProfileMeasure.TIME:
            return self.wall_time
        if name == ProfileMeasure.NFEV:
            return self.nfev
        possible = ', '.join(ProfileMeasure.performance())
        msg = f'Unknown performance measure {name}. Possible are: {possible}'
        raise ContractViolation(msg)


@define
class ProfileTable:
    '''
    Profile curves of several solvers on a common grid. `samples` keeps the
    sorted per-problem errors (or ratios) of every solver so the curves can
    be evaluated anywhere.
    '''

    measure: str
    grid: np.ndarray = field(eq=False)
    curves: dict = Factory(dict)
    samples: dict = Factory(dict)
    problems: int = 0
    excluded: list = Factory(list)

    @property
    def solvers(self):
        return list(self.curves)

    def at(self, solver, x):
        if self.problems == 0:
            return 0.0
        values = self.samples[solver]
        return float(np.searchsorted(values, x, side='right')) / self.problems

    def rows(self):
        for solver, curve in self.curves.items():
            for x, value in zip(self.grid, curve):
                yield self.measure, solver, float(x), float(value)


def relative_error(f_val, f_ref):
    return (f_val - f_ref) / (abs(f_ref) + 1.0)


def is_tau_approx(f_val, f_ref, tau):
    if tau < 0:
        msg = f'tau must be non-negative, got {tau}'
        raise ContractViolation(msg)
    return relative_error(f_val, f_ref) <= tau


def find_missing_runs(records):
    '''(solver, key) pairs absent from records, in a stable order.'''

    solvers = sorted({record.solver for record in records})
    keys = sorted({record.key for record in records})
    present = {(record.solver, record.key) for record in records}
    return [(solver, key) for key in keys for solver in solvers if (solver, key) not in present]


def drop_incomplete(records, missing):
    '''Records of the problems every solver ran on.'''

    incomplete = {key for _, key in missing}
    return [record for record in records if record.key not in incomplete]


def _by_key(records):
    missing = find_missing_runs(records)
    if missing:
        raise MissingRunsError(missing)

    table = {}
    for key, group in unordered_group_by(records, 'key').items():
        per_solver = {}
        for solver, runs in unordered_group_by(group, 'solver').items():
            if len(runs) > 1:
                logger.warning('%d runs of %s on %s, keeping the best', len(runs), solver, key)
            per_solver[solver] = min(runs, key=lambda run: run.f_opt)
        table[key] = per_solver
    return dict(sorted(table.items()))


def _reference(per_solver):
    '''Known optimum of a problem when recorded, else the best value found.'''

    for record in per_solver.values():
        if record.f_star is not None:
            return record.f_star
    return min(record.f_opt for record in per_solver.values())


def _curves(samples, grid, problems):
    return {
        solver: np.searchsorted(values, grid, side='right') / problems
        for solver, values in samples.items()
    }


def _grid_size():
    return int(getattr_from_conf('PROFILE_GRID', default=200))


def accuracy_profile(records, tau_grid=None, solved_tau=None):
    '''
    sigma_s(tau): the fraction of problems on which solver s has
    E = (f - V) / (|V| + 1) <= tau, where V is the best value any solver
    reached on that problem (ties get E = 0).

    With `solved_tau` set, runs that are not solved_tau-approximate against
    the known optimum (or V when none is recorded) get E = +inf.
    '''

    table = _by_key(records)
    solvers = sorted({record.solver for record in records})
    errors = {solver: [] for solver in solvers}

    for per_solver in table.values():
        best = min(record.f_opt for record in per_solver.values())
        reference = _reference(per_solver)
        for solver, record in per_solver.items():
            error = relative_error(record.f_opt, best)
            unsolved = solved_tau is not None and not is_tau_approx(
                record.f_opt,
                reference,
                solved_tau,
            )
            errors[solver].append(math.inf if unsolved else error)

    samples = {solver: np.sort(np.asarray(values)) for solver, values in errors.items()}
    if tau_grid is None:
        finite = [e for values in errors.values() for e in values if math.isfinite(e)]
        e_max = max(finite, default=0.0)
        tau_grid = np.linspace(0.0, e_max, _grid_size()) if e_max > 0 else np.zeros(1)
    tau_grid = np.asarray(tau_grid, dtype=float)

    return ProfileTable(
        measure=ProfileMeasure.ACCURACY,
        grid=tau_grid,
        curves=_curves(samples, tau_grid, len(table)),
        samples=samples,
        problems=len(table),
    )


def _ratio(value, best):
    if best > 0:
        return value / best
    return 1.0 if value <= best else math.inf


def performance_profile(records, measure, ratio_grid=None, tau=None):
    '''
    Dolan-More profile rho_s(theta) over wall time or evaluations. A run
    counts as solved when it is tau-approximate against the known optimum
    (or the best value found); unsolved runs get ratio +inf. Problems no
    solver solved are left out and listed in `excluded`.
    '''

    if measure not in ProfileMeasure.performance():
        possible = ', '.join(ProfileMeasure.performance())
        msg = f'Unknown performance measure {measure}. Possible are: {possible}'
        raise ContractViolation(msg)
    if tau is None:
        tau = float(getattr_from_conf('PROFILE_TAU', default=0.2))

    table = _by_key(records)
    solvers = sorted({record.solver for record in records})
    ratios = {solver: [] for solver in solvers}
    excluded = []

    for key, per_solver in table.items():
        reference = _reference(per_solver)
        solved = {
            solver: record
            for solver, record in per_solver.items()
            if is_tau_approx(record.f_opt, reference, tau)
        }
        if not solved:
            excluded.append(key)
            continue
        best = min(record.measure(measure) for record in solved.values())
        for solver, record in per_solver.items():
            ratio = _ratio(record.measure(measure), best) if solver in solved else math.inf
            ratios[solver].append(ratio)

    if excluded:
        logger.warning('%d problems solved by no solver excluded: %s', len(excluded), excluded)

    problems = len(table) - len(excluded)
    samples = {
        solver: np.sort(np.asarray(values, dtype=float)) for solver, values in ratios.items()
    }
    if ratio_grid is None:
        finite = [r for values in ratios.values() for r in values if math.isfinite(r)]
        r_max = max(finite, default=1.0)
        ratio_grid = np.geomspace(1.0, r_max, _grid_size()) if r_max > 1 else np.ones(1)
    ratio_grid = np.asarray(ratio_grid, dtype=float)
    if problems:
        curves = _curves(samples, ratio_grid, problems)
    else:
        curves = {solver: np.zeros(ratio_grid.size) for solver in solvers}

    return ProfileTable(
        measure=measure,
        grid=ratio_grid,
        curves=curves,
        samples=samples,
        problems=problems,
        excluded=excluded,
    )
