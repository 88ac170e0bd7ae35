# SPDX-License-Identifier: Apache-2.0
# Copyright (C) 2024 tesgo contributors. All rights reserved.

'''
Escaping from a critical point x_bar.

Truncated spherical subdifferentials of both DC components are sampled at
x_bar + t * u over a direction set U. When the sampled f2 set sticks out of
the convex hull of the sampled f1 set, the sticking-out subgradient xi2
defines the convex overestimate

    f_hat(y) = f1(y) - [f2(x_bar) + <xi2, y - x_bar> - epsilon]

whose minimizer is the escape point.
'''

from __future__ import annotations

import logging

from attrs import field, frozen
import numpy as np

from tesgo.core.exceptions import ContractViolation
from tesgo.core.local_search import convex_minimize
from tesgo.core.min_norm import DEFAULT_TOL, Polytope, nearest_point
from tesgo.core.problem import as_context


logger = logging.getLogger('tesgo.solver')

DUPLICATE_TOL = 1e-9


@frozen
class DirectionSet:
    directions: np.ndarray = field(eq=False)
    seed: int = 0

    def __len__(self):
        return self.directions.shape[0]

    def __iter__(self):
        return iter(self.directions)


@frozen
class Deviation:
    sq_dist: float
    xi2: np.ndarray = field(eq=False)
    xi1: np.ndarray = field(eq=False)
    exact: bool = True
    ranked: tuple = field(default=(), eq=False, repr=False)

    def candidates(self, threshold, limit=None):
        '''
        Deviations of the individual vertices of the f2 set, largest first,
        restricted to those above `threshold`.
        '''

        chosen = [
            Deviation(sq_dist, xi2, xi1, self.exact)
            for sq_dist, xi2, xi1 in self.ranked
            if sq_dist > threshold
        ]
        return chosen if limit is None else chosen[:limit]


@frozen
class FhatObjective:
    problem: object = field(eq=False, repr=False)
    x_bar: np.ndarray = field(eq=False)
    xi2: np.ndarray = field(eq=False)
    epsilon: float
    f2_at_anchor: float

    def shape(self, y):
        '''The y-dependent part f1(y) - <xi2, y - x_bar>.'''
        return self.problem.eval_component(1, y) - float(self.xi2 @ (y - self.x_bar))

    def eval(self, y):
        return self.shape(y) - (self.f2_at_anchor - self.epsilon)

    def subgrad(self, y):
        return self.problem.subgrad(1, y) - self.xi2


@frozen
class EscapeResult:
    y: np.ndarray = field(eq=False)
    f_value: float
    converged: bool


def sample_directions(n, m, seed=0):
    '''
    {+-e_1, ..., +-e_n} in the order e_1, -e_1, e_2, -e_2, ... when m >= 2n,
    otherwise m seeded standard-normal vectors scaled to unit length.
    '''

    if m < 1:
        msg = f'Number of directions must be at least 1, got {m}'
        raise ContractViolation(msg)

    if m >= 2 * n:
        directions = np.zeros((2 * n, n))
        directions[0::2] = np.eye(n)
        directions[1::2] = -np.eye(n)
        return DirectionSet(directions, seed)

    rng = np.random.default_rng(seed)
    raw = rng.standard_normal((m, n))
    norms = np.linalg.norm(raw, axis=1, keepdims=True)
    while np.any(norms == 0.0):
        zero = norms[:, 0] == 0.0
        raw[zero] = rng.standard_normal((int(zero.sum()), n))
        norms = np.linalg.norm(raw, axis=1, keepdims=True)
    return DirectionSet(raw / norms, seed)


def spherical_subdiff(problem, component, x, t, dirs):
    '''
    Polytope of subgradients of one DC component sampled at x + t * u for
    every u in dirs; vertices closer than 1e-9 to an earlier one are dropped.
    '''

    if not t > 0:
        msg = f'Sampling radius must be positive, got {t}'
        raise ContractViolation(msg)

    ctx = as_context(problem)
    x = ctx.problem.check_point(x)
    vertices = []
    for u in dirs:
        g = ctx.subgrad(component, x + t * u)
        if all(np.linalg.norm(g - v) > DUPLICATE_TOL for v in vertices):
            vertices.append(g)
    return Polytope(np.array(vertices))


def deviation(d2, d1, tol=DEFAULT_TOL):
    '''
    max over vertices xi2 of d2 of the squared distance from xi2 to conv(d1),
    with its certifying pair. The first vertex wins on ties.
    '''

    if d2.dimension != d1.dimension:
        msg = f'Polytopes of different dimensions: {d2.dimension} != {d1.dimension}'
        raise ContractViolation(msg)

    rows = []
    exact = True
    for xi2 in d2.vertices:
        projection = nearest_point(xi2, d1, tol)
        exact = exact and projection.exact
        rows.append((projection.sq_norm, xi2.copy(), projection.point))

    # stable sort keeps the first vertex ahead on ties
    ranked = tuple(sorted(rows, key=lambda row: -row[0]))
    sq_dist, xi2, xi1 = ranked[0]
    return Deviation(sq_dist, xi2, xi1, exact, ranked)


def build_fhat(problem, x_bar, xi2, epsilon):
    if epsilon < 0:
        msg = f'epsilon must be non-negative, got {epsilon}'
        raise ContractViolation(msg)

    ctx = as_context(problem)
    x_bar = ctx.problem.check_point(x_bar)
    xi2 = np.atleast_1d(np.asarray(xi2, dtype=float))
    return FhatObjective(
        problem=ctx,
        x_bar=x_bar,
        xi2=xi2,
        epsilon=float(epsilon),
        f2_at_anchor=ctx.eval_component(2, x_bar),
    )


def linearization_error(problem, x_bar, z, xi2):
    '''
    f2(x_bar) - f2(z) - <xi2, x_bar - z> for xi2 taken from the subdifferential
    of f2 at z. Non-negative by convexity; with this epsilon f_hat majorizes f.
    '''

    ctx = as_context(problem)
    x_bar = ctx.problem.check_point(x_bar)
    z = ctx.problem.check_point(z)
    return (
        ctx.eval_component(2, x_bar)
        - ctx.eval_component(2, z)
        - float(np.asarray(xi2, dtype=float) @ (x_bar - z))
    )


def escape_step(problem, x_bar, dev, epsilon, cfg=None):
    '''
    Minimize f_hat built from dev.xi2 starting at x_bar. Only the
    epsilon-free part of f_hat is minimized, so the escape point does not
    depend on epsilon. Returns the TRUE objective value f(y), not f_hat(y).
    '''

    ctx = as_context(problem)
    fhat = build_fhat(ctx, x_bar, dev.xi2, epsilon)
    solution = convex_minimize((fhat.shape, fhat.subgrad), fhat.x_bar, cfg)
    if not solution.converged:
        logger.info('escape subproblem stopped after %d iterations', solution.iterations)
    return EscapeResult(solution.x, ctx.eval_f(solution.x), solution.converged)
