# SPDX-License-Identifier: Apache-2.0
# Copyright (C) 2024 tesgo contributors. All rights reserved.

'''
Local search for DC problems: a DCA outer loop around a normalized
subgradient method for the convex subproblems.
'''

from __future__ import annotations

import logging
from typing import Callable

from attrs import Factory, field, frozen, validators
import numpy as np

from tesgo.core.problem import as_context, as_vector


logger = logging.getLogger('tesgo.solver')


def _positive(instance, attribute, value):
    if not value > 0:
        msg = f'{attribute.name} must be positive, got {value}'
        raise ValueError(msg)


@frozen
class ConvexSolverConfig:
    step0: float = field(default=1.0, validator=_positive)
    decay: float = field(default=0.5, validator=[validators.gt(0), validators.lt(1)])
    max_iters: int = field(default=2000, validator=_positive)
    tol: float = field(default=1e-8, validator=_positive)
    patience: int = field(default=10, validator=_positive)


@frozen
class LocalSearchConfig:
    tol_step: float = field(default=1e-6, validator=_positive)
    tol_crit: float = field(default=1e-5, validator=_positive)
    max_outer: int = field(default=200, validator=_positive)
    inner: ConvexSolverConfig = Factory(ConvexSolverConfig)


@frozen
class ConvexSolution:
    x: np.ndarray = field(eq=False)
    value: float
    iterations: int
    converged: bool


@frozen
class CriticalPoint:
    x: np.ndarray = field(eq=False)
    f_value: float
    criticality_residual: float
    iterations: int = 0
    converged: bool = True


def convex_minimize(objective, x0, cfg=None):
    '''
    Minimize a convex function given as an (eval, subgrad) pair.

    Every iteration moves by the current step along the normalized negative
    subgradient. After `cfg.patience` iterations without a new best value the
    method restarts from the best point with the step multiplied by
    `cfg.decay`. It stops when the step drops below `cfg.tol`, after
    `cfg.max_iters` iterations or at a zero subgradient. The best iterate is
    returned, so the value never exceeds objective(x0).

    For a non-convex objective nothing is guaranteed beyond that.
    '''

    cfg = cfg or ConvexSolverConfig()
    evaluate: Callable = objective[0]
    subgradient: Callable = objective[1]

    x = as_vector(x0).copy()
    best_x, best_value = x, float(evaluate(x))
    step = cfg.step0
    stalled = 0
    converged = False

    iteration = 0
    while iteration < cfg.max_iters:
        iteration += 1
        g = subgradient(x)
        g_norm = float(np.linalg.norm(g))
        if g_norm == 0.0:
            converged = True
            break

        x = x - (step / g_norm) * g
        value = float(evaluate(x))
        if value < best_value:
            best_x, best_value = x, value
            stalled = 0
            continue

        stalled += 1
        if stalled >= cfg.patience:
            step *= cfg.decay
            x = best_x
            stalled = 0
            if step < cfg.tol:
                converged = True
                break

    return ConvexSolution(best_x, best_value, iteration, converged)


def dc_local_search(problem, x0, cfg=None):
    '''
    DCA from x0 on an (already penalized) DC problem: at x_j take
    xi2 = subgrad(2, x_j) and let x_{j+1} minimize f1(y) - <xi2, y>.

    The values f(x_j) never increase: an outer step that would increase f is
    discarded and the search stops at x_j. The criticality residual is
    |subgrad(1, x) - subgrad(2, x)| at the returned point, an estimate only,
    since single-subgradient oracles cannot certify that the
    subdifferentials intersect.

    `problem` may be a DcProblem or a SolveContext whose counters are to be
    charged.
    '''

    cfg = cfg or LocalSearchConfig()
    ctx = as_context(problem)
    x = ctx.problem.check_point(x0)
    fx = ctx.eval_f(x)
    converged = False

    outer = 0
    while outer < cfg.max_outer:
        outer += 1
        xi2 = ctx.subgrad(2, x)

        def shape(y, xi2=xi2):
            return ctx.eval_component(1, y) - float(xi2 @ y)

        def shape_subgrad(y, xi2=xi2):
            return ctx.subgrad(1, y) - xi2

        solution = convex_minimize((shape, shape_subgrad), x, cfg.inner)
        f_next = ctx.eval_f(solution.x)
        if f_next > fx:
            logger.debug('local search step increases f (%.10g > %.10g), stopping', f_next, fx)
            converged = True
            break

        moved = float(np.linalg.norm(solution.x - x))
        x, fx = solution.x, f_next
        if moved <= cfg.tol_step:
            converged = True
            break

    if not converged:
        logger.debug('local search hit max_outer=%d at f=%.10g', cfg.max_outer, fx)

    residual = float(np.linalg.norm(ctx.subgrad(1, x) - ctx.subgrad(2, x)))
    if residual > cfg.tol_crit:
        logger.debug('criticality residual %.3e above %.1e', residual, cfg.tol_crit)
    return CriticalPoint(x, fx, residual, outer, converged)
