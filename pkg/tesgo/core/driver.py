# SPDX-License-Identifier: Apache-2.0
# Copyright (C) 2024 tesgo contributors. All rights reserved.

'''
The global solver: local search to a critical point, a sweep of sampling
radii t over (0, t_bar], escape whenever the sampled f2 subgradients stick
out of the sampled f1 hull by more than delta, restart from the escape
point, stop when a whole sweep finds nothing.

For n = 1 with directions {-1, +1} the sampled sets are the exact
t-spherical subdifferentials, so the same loop is the conceptual
exact-subdifferential method.
'''

from __future__ import annotations

import logging
import time

from attrs import Factory, define, field, frozen
import numpy as np

from tesgo.core.escape import deviation, escape_step, sample_directions, spherical_subdiff
from tesgo.core.exceptions import ConfigurationError
from tesgo.core.local_search import ConvexSolverConfig, LocalSearchConfig, dc_local_search
from tesgo.core.problem import DEFAULT_PENALTY_GAMMA, EvalCounters, SolveContext, penalize


logger = logging.getLogger('tesgo.solver')


class SolveStatus:
    '''
    This is an interface to describe all outcomes of a solve.
    '''

    APPROX_GLOBAL = 'approx_global'
    ITERATION_CAP = 'iteration_cap'
    LOCAL_ONLY = 'local_only'

    @classmethod
    def all(cls):
        return [value for name, value in vars(cls).items() if name.isupper()]


class TraceKind:
    '''
    This is an interface to describe all kinds of solver trace entries.
    '''

    CRITICAL = 'critical'
    CHECK = 'check'
    ESCAPE_ACCEPTED = 'escape_accepted'
    ESCAPE_REJECTED = 'escape_rejected'
    STOP = 'stop'

    @classmethod
    def all(cls):
        return [value for name, value in vars(cls).items() if name.isupper()]


class Preset:
    '''
    This is an interface to describe the parameter presets of the global solver.
    '''

    SIMPLE = 'simple'
    FULL = 'full'
    FULL_150 = 'full_150'
    FULL_200 = 'full_200'

    @classmethod
    def all(cls):
        return [value for name, value in vars(cls).items() if name.isupper()]


# name -> (K, m1 cap, m1 factor of n, m2 cap, m2 factor of n)
PRESET_PARAMETERS = {
    Preset.SIMPLE: (10, 50, 2, 10, 1),
    Preset.FULL: (80, 100, 2, 30, 2),
    Preset.FULL_150: (80, 150, 2, 30, 2),
    Preset.FULL_200: (80, 200, 2, 30, 2),
}

DEFAULT_DELTA = 0.01
DEFAULT_IMPROVEMENT_ETA = 1e-6
DEFAULT_MAX_RESTARTS = 100
DEFAULT_ESCAPE_CANDIDATES = 1

# budget of the local search screening an escape point
SCREEN_MAX_OUTER = 3
SCREEN_MAX_ITERS = 200
SCREEN_PATIENCE = 5


def screening_config():
    return LocalSearchConfig(
        max_outer=SCREEN_MAX_OUTER,
        inner=ConvexSolverConfig(max_iters=SCREEN_MAX_ITERS, patience=SCREEN_PATIENCE),
    )


@frozen
class TesgoConfig:
    delta: float = DEFAULT_DELTA
    K: int = 80
    m1: int = 2
    m2: int = 2
    gamma: float = DEFAULT_PENALTY_GAMMA
    seed: int = 0
    improvement_eta: float = DEFAULT_IMPROVEMENT_ETA
    max_restarts: int = DEFAULT_MAX_RESTARTS
    escape_candidates: int = DEFAULT_ESCAPE_CANDIDATES
    local: LocalSearchConfig = Factory(LocalSearchConfig)
    escape_local: LocalSearchConfig = Factory(screening_config)
    preset: str = Preset.FULL

    def __attrs_post_init__(self):
        checks = (
            (self.delta > 0, f'delta must be positive, got {self.delta}'),
            (self.K >= 1, f'K must be at least 1, got {self.K}'),
            (self.m1 >= 1, f'm1 must be at least 1, got {self.m1}'),
            (self.m2 >= 1, f'm2 must be at least 1, got {self.m2}'),
            (self.gamma > 0, f'gamma must be positive, got {self.gamma}'),
            (self.improvement_eta > 0, 'improvement_eta must be positive'),
            (self.max_restarts >= 1, 'max_restarts must be at least 1'),
            (self.escape_candidates >= 1, 'escape_candidates must be at least 1'),
        )
        for ok, msg in checks:
            if not ok:
                raise ConfigurationError(msg)


@frozen
class TraceEntry:
    k: int
    kind: str
    value: float
    t: float | None = None
    sq_dist: float | None = None


@define
class SolveReport:
    x_best: np.ndarray = field(eq=False)
    f_best: float
    status: str
    counters: EvalCounters
    trace: list = Factory(list)
    wall_time: float = 0.0

    def entries(self, kind):
        return [entry for entry in self.trace if entry.kind == kind]

    @property
    def escapes(self):
        return len(self.entries(TraceKind.ESCAPE_ACCEPTED))


def preset(name, n):
    if name not in PRESET_PARAMETERS:
        msg = f'Unknown preset {name}. Possible are: {", ".join(Preset.all())}'
        raise ConfigurationError(msg)

    k, m1_cap, m1_factor, m2_cap, m2_factor = PRESET_PARAMETERS[name]
    return TesgoConfig(
        delta=DEFAULT_DELTA,
        K=k,
        m1=min(m1_cap, m1_factor * n),
        m2=min(m2_cap, m2_factor * n),
        gamma=DEFAULT_PENALTY_GAMMA,
        preset=name,
    )


def compute_tbar(x_bar, box):
    x_bar = np.asarray(x_bar, dtype=float)
    return float(max(np.max(x_bar - box.lower), np.max(box.upper - x_bar)))


class _Tracker:
    '''Best point, trace and stopping bookkeeping of one solve.'''

    def __init__(self, ctx, x0):
        self.ctx = ctx
        self.trace = []
        self.best_x = x0
        self.best_f = ctx.eval_f(x0)

    def offer(self, x, value):
        if value < self.best_f:
            self.best_x, self.best_f = x, value

    def record(self, *args, **kwargs):
        self.trace.append(TraceEntry(*args, **kwargs))


def _sweep(ctx, tracker, k, x_bar, f_bar, dirs1, dirs2, cfg):
    '''
    One sweep t = t_bar/K, 2 t_bar/K, ..., t_bar at the critical point x_bar.
    Returns the accepted critical point or None when the sweep completes.

    Escape points are screened with the `cfg.escape_local` budget; only a
    screened point that already improves on f_bar gets the full local
    search, so a rejected escape costs at most that budget.
    '''

    t_bar = compute_tbar(x_bar, ctx.box)
    if t_bar <= 0:
        return None, t_bar

    step = t_bar / cfg.K
    required = cfg.improvement_eta * (1.0 + abs(f_bar))
    for s in range(1, cfg.K + 1):
        t = s * step
        d1 = spherical_subdiff(ctx, 1, x_bar, t, dirs1)
        d2 = spherical_subdiff(ctx, 2, x_bar, t, dirs2)
        dev = deviation(d2, d1)
        tracker.record(k, TraceKind.CHECK, f_bar, t=t, sq_dist=dev.sq_dist)
        logger.debug('k=%d t=%.6g deviation=%.6g', k, t, dev.sq_dist)
        if dev.sq_dist <= cfg.delta:
            continue

        for candidate in dev.candidates(cfg.delta, cfg.escape_candidates):
            escape = escape_step(ctx, x_bar, candidate, cfg.delta * t, cfg.escape_local.inner)
            tracker.offer(escape.y, escape.f_value)
            point = dc_local_search(ctx, escape.y, cfg.escape_local)
            tracker.offer(point.x, point.f_value)
            if point.f_value < f_bar - required:
                point = dc_local_search(ctx, point.x, cfg.local)
                tracker.offer(point.x, point.f_value)
                tracker.record(
                    k,
                    TraceKind.ESCAPE_ACCEPTED,
                    point.f_value,
                    t=t,
                    sq_dist=candidate.sq_dist,
                )
                logger.info(
                    'escape accepted at k=%d, t=%.6g: f %.10g -> %.10g',
                    k,
                    t,
                    f_bar,
                    point.f_value,
                )
                return point, t_bar

            tracker.record(
                k,
                TraceKind.ESCAPE_REJECTED,
                point.f_value,
                t=t,
                sq_dist=candidate.sq_dist,
            )
            logger.warning(
                'escape rejected at k=%d, t=%.6g: f %.10g does not improve %.10g',
                k,
                t,
                point.f_value,
                f_bar,
            )

    return None, t_bar


def tesgo_solve(problem, x0, cfg=None):
    '''
    Global minimization of a box-constrained DC problem from x0.

    The box is folded into f1 with the exact penalty, then critical points
    are improved by escapes until a full t-sweep finds no deviation above
    delta (status approx_global) or `cfg.max_restarts` escapes have been
    accepted (status iteration_cap). The best point ever evaluated is
    returned; values are those of the penalized function, which equal the
    original ones inside the box.
    '''

    cfg = cfg or preset(Preset.FULL, problem.dimension)
    started = time.perf_counter()

    ctx = SolveContext(penalize(problem, cfg.gamma))
    x0 = problem.check_point(x0)
    tracker = _Tracker(ctx, x0)

    point = dc_local_search(ctx, x0, cfg.local)
    tracker.offer(point.x, point.f_value)
    k = 0
    x_bar, f_bar = point.x, point.f_value
    tracker.record(k, TraceKind.CRITICAL, f_bar)
    logger.info('%s: critical point k=0 with f=%.10g', problem.name, f_bar)

    dirs1 = sample_directions(problem.dimension, cfg.m1, cfg.seed)
    dirs2 = sample_directions(problem.dimension, cfg.m2, cfg.seed + 1)

    status = SolveStatus.APPROX_GLOBAL
    while True:
        accepted, t_bar = _sweep(ctx, tracker, k, x_bar, f_bar, dirs1, dirs2, cfg)
        if accepted is None:
            tracker.record(k, TraceKind.STOP, f_bar, t=t_bar)
            break

        k += 1
        x_bar, f_bar = accepted.x, accepted.f_value
        tracker.record(k, TraceKind.CRITICAL, f_bar)
        if k >= cfg.max_restarts:
            status = SolveStatus.ITERATION_CAP
            tracker.record(k, TraceKind.STOP, f_bar)
            logger.warning('%s: restart cap %d reached', problem.name, cfg.max_restarts)
            break

    report = SolveReport(
        x_best=tracker.best_x,
        f_best=tracker.best_f,
        status=status,
        counters=ctx.counters,
        trace=tracker.trace,
        wall_time=time.perf_counter() - started,
    )
    logger.info(
        '%s: %s f_best=%.10g escapes=%d counters=%s in %.3fs',
        problem.name,
        status,
        report.f_best,
        report.escapes,
        ctx.counters.as_dict(),
        report.wall_time,
    )
    return report


def solve_local(problem, x0, local_cfg=None, gamma=DEFAULT_PENALTY_GAMMA):
    '''The local comparator: one penalized local search, no escapes.'''

    started = time.perf_counter()
    ctx = SolveContext(penalize(problem, gamma))
    x0 = problem.check_point(x0)
    tracker = _Tracker(ctx, x0)
    point = dc_local_search(ctx, x0, local_cfg)
    tracker.offer(point.x, point.f_value)
    tracker.record(0, TraceKind.CRITICAL, point.f_value)
    report = SolveReport(
        x_best=tracker.best_x,
        f_best=tracker.best_f,
        status=SolveStatus.LOCAL_ONLY,
        counters=ctx.counters,
        trace=tracker.trace,
        wall_time=time.perf_counter() - started,
    )
    logger.info(
        '%s: local search f=%.10g in %.3fs',
        problem.name,
        point.f_value,
        report.wall_time,
    )
    return report
