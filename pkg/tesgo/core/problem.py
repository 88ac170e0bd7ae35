# SPDX-License-Identifier: Apache-2.0
# Copyright (C) 2024 tesgo contributors. All rights reserved.

'''
DC problems: f(x) = f1(x) - f2(x) with convex f1, f2 given by evaluation and
single-subgradient oracles, box constraints [a, b] and the exact penalty that
folds the box into f1.

Oracles are pure functions. Evaluation counters belong to the solve that
performs the calls (SolveContext), never to the problem itself.
'''

from __future__ import annotations

from typing import Callable, ClassVar

from attrs import define, evolve, field, frozen
import numpy as np

from tesgo.core.exceptions import ContractViolation


DEFAULT_PENALTY_GAMMA = 100.0


def as_vector(x):
    return np.atleast_1d(np.asarray(x, dtype=float))


@frozen
class BoxBounds:
    lower: np.ndarray = field(converter=as_vector, eq=False)
    upper: np.ndarray = field(converter=as_vector, eq=False)

    def __attrs_post_init__(self):
        if self.lower.shape != self.upper.shape or self.lower.ndim != 1:
            msg = f'Box bounds of different shapes: {self.lower.shape} != {self.upper.shape}'
            raise ContractViolation(msg)
        if np.any(self.lower > self.upper):
            msg = 'Box lower bound exceeds upper bound'
            raise ContractViolation(msg)

    @classmethod
    def uniform(cls, low, high, n):
        return cls(np.full(n, float(low)), np.full(n, float(high)))

    @property
    def dimension(self):
        return self.lower.size

    def center(self):
        return (self.lower + self.upper) / 2.0

    def contains(self, x):
        x = as_vector(x)
        return bool(np.all(x >= self.lower) and np.all(x <= self.upper))

    def sample(self, rng):
        return rng.uniform(self.lower, self.upper)


@define
class EvalCounters:
    n_f1: int = 0
    n_f2: int = 0
    n_g1: int = 0
    n_g2: int = 0

    FIELDS: ClassVar[tuple] = ('n_f1', 'n_f2', 'n_g1', 'n_g2')

    def as_dict(self):
        return {name: getattr(self, name) for name in self.FIELDS}

    def __add__(self, other):
        return EvalCounters(
            *(getattr(self, name) + getattr(other, name) for name in self.FIELDS),
        )


@frozen
class DcProblem:
    '''
    Unconstrained form of a box-constrained DC problem. The box is kept as
    metadata: it defines the default start and the escape radius even when
    the penalty has already been folded into f1.
    '''

    name: str
    box: BoxBounds
    f1_eval: Callable[[np.ndarray], float] = field(eq=False, repr=False)
    f2_eval: Callable[[np.ndarray], float] = field(eq=False, repr=False)
    f1_subgrad: Callable[[np.ndarray], np.ndarray] = field(eq=False, repr=False)
    f2_subgrad: Callable[[np.ndarray], np.ndarray] = field(eq=False, repr=False)
    f_star: float | None = None
    gamma: float | None = None

    @property
    def dimension(self):
        return self.box.dimension

    @property
    def penalized(self):
        return self.gamma is not None

    def check_point(self, x):
        x = as_vector(x)
        if x.shape != (self.dimension,):
            msg = f'{self.name}: point of dimension {x.size} given, {self.dimension} expected'
            raise ContractViolation(msg)
        return x


def _check_component(component):
    if component not in (1, 2):
        msg = f'DC component must be 1 or 2, got {component}'
        raise ContractViolation(msg)


def eval_component(problem, component, x, counters=None):
    _check_component(component)
    x = problem.check_point(x)
    if component == 1:
        if counters is not None:
            counters.n_f1 += 1
        return float(problem.f1_eval(x))
    if counters is not None:
        counters.n_f2 += 1
    return float(problem.f2_eval(x))


def eval_f(problem, x, counters=None):
    x = problem.check_point(x)
    return eval_component(problem, 1, x, counters) - eval_component(problem, 2, x, counters)


def subgrad(problem, component, x, counters=None):
    _check_component(component)
    x = problem.check_point(x)
    if component == 1:
        if counters is not None:
            counters.n_g1 += 1
        return as_vector(problem.f1_subgrad(x))
    if counters is not None:
        counters.n_g2 += 1
    return as_vector(problem.f2_subgrad(x))


def _violations(box, x):
    return np.maximum(box.lower - x, x - box.upper)


def penalize(problem, gamma=DEFAULT_PENALTY_GAMMA):
    '''
    Fold the box into f1: f1(x) + gamma * max{0, a_i - x_i, x_i - b_i}.
    The subgradient of the penalty is gamma * (+-e_j) for the most violated
    coordinate j (lowest index on ties) and zero inside the box.
    '''

    if not gamma > 0:
        msg = f'Penalty parameter must be positive, got {gamma}'
        raise ContractViolation(msg)

    box = problem.box
    f1_eval = problem.f1_eval
    f1_subgrad = problem.f1_subgrad

    def penalized_eval(x):
        return f1_eval(x) + gamma * max(0.0, float(np.max(_violations(box, x))))

    def penalized_subgrad(x):
        g = np.array(f1_subgrad(x), dtype=float)
        violations = _violations(box, x)
        j = int(np.argmax(violations))
        if violations[j] > 0:
            g[j] += gamma if x[j] > box.upper[j] else -gamma
        return g

    return evolve(
        problem,
        f1_eval=penalized_eval,
        f1_subgrad=penalized_subgrad,
        gamma=float(gamma),
    )


@define
class SolveContext:
    '''A problem together with the evaluation counters of one solve.'''

    problem: DcProblem
    counters: EvalCounters = field(factory=EvalCounters)

    @property
    def dimension(self):
        return self.problem.dimension

    @property
    def box(self):
        return self.problem.box

    def eval_f(self, x):
        return eval_f(self.problem, x, self.counters)

    def eval_component(self, component, x):
        return eval_component(self.problem, component, x, self.counters)

    def subgrad(self, component, x):
        return subgrad(self.problem, component, x, self.counters)


def as_context(problem):
    if isinstance(problem, SolveContext):
        return problem
    return SolveContext(problem)
