# SPDX-License-Identifier: Apache-2.0
# Copyright (C) 2024 tesgo contributors. All rights reserved.

'''
Built-in box-constrained DC test problems.

Subgradient oracles pick the lowest-index active branch of every max-type
term and use sign(0) = 0 for absolute values, so every oracle is
deterministic.
'''

from __future__ import annotations

from typing import Callable, ClassVar

from attrs import evolve, field, frozen
import numpy as np

from tesgo.core.exceptions import ExternallyDefinedProblemError, UnsupportedProblemError
from tesgo.core.problem import BoxBounds, DcProblem


__all__ = [
    'ProblemGroup',
    'ProblemSpec',
    'default_start',
    'external_names',
    'get_spec',
    'iter_specs',
    'make',
    'supported_dimensions',
]


LISTED_DIMENSIONS = (2, 5, 10, 50, 100, 200)


class ProblemGroup:
    '''
    This is an interface to describe the origin of registered problem names.
    '''

    BUILTIN = 'builtin'
    EXTERNAL = 'external'

    @classmethod
    def all(cls):
        return [value for name, value in vars(cls).items() if name.isupper()]


@frozen
class ProblemSpec:
    name: str
    description: str
    build: Callable[[int], DcProblem]
    fixed_n: int | None = None
    f_stars: dict = field(factory=dict)
    f_star_any_n: float | None = None
    start: Callable[[BoxBounds], np.ndarray] | None = None

    @property
    def parametric(self):
        return self.fixed_n is None

    def supports(self, n):
        if self.parametric:
            return n >= 2
        return n == self.fixed_n

    def listed_dimensions(self):
        return list(LISTED_DIMENSIONS) if self.parametric else [self.fixed_n]

    def f_star(self, n):
        if self.f_star_any_n is not None:
            return self.f_star_any_n
        return self.f_stars.get(n)


# DC version of Aluffi-Pentini's problem


def _build_p15(n):
    def f1(x):
        return 0.25 * x[0] ** 4 + 0.1 * x[0] + 0.5 * x[1] ** 2

    def g1(x):
        return np.array([x[0] ** 3 + 0.1, x[1]])

    def f2(x):
        return 0.5 * x[0] ** 2

    def g2(x):
        return np.array([x[0], 0.0])

    return DcProblem('P15', BoxBounds.uniform(-10, 10, n), f1, f2, g1, g2)


# Generalized DC Becker and Lago problem; f = sum((|x_i| - 5)^2)


def _build_p16(n):
    def f1(x):
        return float(np.dot(x, x)) + 25.0 * n

    def g1(x):
        return 2.0 * x

    def f2(x):
        return 10.0 * float(np.sum(np.abs(x)))

    def g2(x):
        return 10.0 * np.sign(x)

    return DcProblem('P16', BoxBounds.uniform(-10, 10, n), f1, f2, g1, g2)


# Modified DC Camel Back problem


def _build_p17(n):
    def f1(x):
        return 1.0 / 6.0 + x[0] ** 6 + 4.0 * x[0] ** 2 + 4.0 * x[1] ** 4 + abs(x[0])

    def g1(x):
        return np.array([
            6.0 * x[0] ** 5 + 8.0 * x[0] + np.sign(x[0]),
            16.0 * x[1] ** 3,
        ])

    def f2(x):
        return 2.1 * x[0] ** 4 + 4.0 * x[1] ** 2

    def g2(x):
        return np.array([8.4 * x[0] ** 3, 8.0 * x[1]])

    return DcProblem('P17', BoxBounds.uniform(-5, 5, n), f1, f2, g1, g2)


def _build_p18(n):
    def f1(x):
        head, tail = x[:-1], x[1:]
        return float(np.sum((tail - 1.0) ** 2 + head**2 + tail**2))

    def g1(x):
        g = np.zeros(n)
        g[1:] += 2.0 * (x[1:] - 1.0) + 2.0 * x[1:]
        g[:-1] += 2.0 * x[:-1]
        return g

    def f2(x):
        return float(np.sum(np.abs(x[:-1] + x[1:])))

    def g2(x):
        s = np.sign(x[:-1] + x[1:])
        g = np.zeros(n)
        g[:-1] += s
        g[1:] += s
        return g

    return DcProblem('P18', BoxBounds.uniform(-n, n, n), f1, f2, g1, g2)


def _build_p19(n):
    def f1(x):
        return 2.0 * float(np.dot(x, x))

    def g1(x):
        return 4.0 * x

    def f2(x):
        return abs(x[0] + x[1])

    def g2(x):
        return np.sign(x[0] + x[1]) * np.ones(2)

    return DcProblem('P19', BoxBounds.uniform(-10, 10, n), f1, f2, g1, g2)


# f = sum(|x_{i+1} - x_i + 1 - x_i^2|)


def _build_p20(n):
    def f1(x):
        linear = x[1:] - x[:-1] + 1.0
        return 2.0 * float(np.sum(np.maximum(linear, x[:-1] ** 2)))

    def g1(x):
        g = np.zeros(n)
        linear_active = x[1:] - x[:-1] + 1.0 >= x[:-1] ** 2
        g[:-1] += np.where(linear_active, -2.0, 4.0 * x[:-1])
        g[1:] += np.where(linear_active, 2.0, 0.0)
        return g

    def f2(x):
        return float(np.sum(x[:-1] ** 2 + x[1:] - x[:-1] + 1.0))

    def g2(x):
        g = np.zeros(n)
        g[:-1] += 2.0 * x[:-1] - 1.0
        g[1:] += 1.0
        return g

    return DcProblem('P20', BoxBounds.uniform(-10, 10, n), f1, f2, g1, g2)


# One-dimensional illustration: local minimizer at x = 1, global at x = 5.

EX1_BRANCHES = np.array([[-3.0, 8.0], [1.0, 1.0], [5.0, -12.0]])


def _build_ex1(n):
    def f1(x):
        return x[0] ** 2 - 5.0 * x[0] + 2.0

    def g1(x):
        return np.array([2.0 * x[0] - 5.0])

    def f2(x):
        return float(np.max(EX1_BRANCHES[:, 0] * x[0] + EX1_BRANCHES[:, 1]))

    def g2(x):
        active = int(np.argmax(EX1_BRANCHES[:, 0] * x[0] + EX1_BRANCHES[:, 1]))
        return np.array([EX1_BRANCHES[active, 0]])

    return DcProblem('EX1', BoxBounds.uniform(-100, 100, n), f1, f2, g1, g2)


class ProblemRegistry:
    '''
    Immutable name -> ProblemSpec mapping. Names P1-P14 are reserved for
    problems whose formulas are published elsewhere and are not built in.
    '''

    EXTERNAL_NAMES: ClassVar[tuple] = tuple(f'P{i}' for i in range(1, 15))

    def __init__(self, specs):
        self._specs = {spec.name: spec for spec in specs}

    def names(self):
        return list(self._specs)

    def __iter__(self):
        return iter(self._specs.values())

    def get(self, name):
        if name in self._specs:
            return self._specs[name]
        if name in self.EXTERNAL_NAMES:
            raise ExternallyDefinedProblemError(name, supported=self.names())
        raise UnsupportedProblemError(name, supported=self.names())


REGISTRY = ProblemRegistry(
    [
        ProblemSpec(
            'P15',
            'DC version of Aluffi-Pentini problem',
            _build_p15,
            fixed_n=2,
            f_stars={2: -0.3524},
        ),
        ProblemSpec(
            'P16',
            'Generalized DC Becker and Lago problem',
            _build_p16,
            f_star_any_n=0.0,
        ),
        # Listed elsewhere as -0.8332; -0.8333 is what every solver reaches.
        ProblemSpec(
            'P17',
            'Modified DC Camel Back problem',
            _build_p17,
            fixed_n=2,
            f_stars={2: -0.8333},
        ),
        ProblemSpec(
            'P18',
            'Chained quadratic with absolute pair sums',
            _build_p18,
            f_stars={
                2: -0.375,
                5: -1.375,
                10: -3.0417,
                50: -16.375,
                100: -33.0417,
                200: -66.375,
            },
        ),
        ProblemSpec(
            'P19',
            'Quadratic minus absolute sum',
            _build_p19,
            fixed_n=2,
            f_stars={2: -0.25},
        ),
        ProblemSpec(
            'P20',
            'Chained max-quadratic problem',
            _build_p20,
            f_star_any_n=0.0,
        ),
        ProblemSpec(
            'EX1',
            'One-dimensional example with a non-global local minimizer at 1',
            _build_ex1,
            fixed_n=1,
            f_stars={1: -11.0},
            start=lambda box: np.ones(1),
        ),
    ],
)


def get_spec(name):
    return REGISTRY.get(name)


def iter_specs():
    return iter(REGISTRY)


def supported_dimensions(name):
    return get_spec(name).listed_dimensions()


def _checked_spec(name, n):
    spec = get_spec(name)
    if not spec.supports(n):
        raise UnsupportedProblemError(
            name,
            n=n,
            supported=[f'{name}(n={dim})' for dim in spec.listed_dimensions()],
        )
    return spec


def make(name, n=None):
    '''
    Build the (unpenalized) DcProblem for a registered name. Fixed-dimension
    problems accept n=None.
    '''

    spec = get_spec(name)
    if n is None:
        n = spec.fixed_n if spec.fixed_n is not None else spec.listed_dimensions()[0]
    spec = _checked_spec(name, n)
    return evolve(spec.build(n), f_star=spec.f_star(n))


def default_start(name, n=None):
    problem = make(name, n)
    spec = get_spec(name)
    if spec.start is not None:
        return np.asarray(spec.start(problem.box), dtype=float)
    return problem.box.center()


def external_names():
    return list(ProblemRegistry.EXTERNAL_NAMES)
