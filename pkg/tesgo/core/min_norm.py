# SPDX-License-Identifier: Apache-2.0
# Copyright (C) 2024 tesgo contributors. All rights reserved.

'''
Minimum-norm point of the convex hull of a finite vertex set (Wolfe's
method with major and minor cycles).
'''

from __future__ import annotations

import logging

from attrs import field, frozen
import numpy as np

from tesgo.core.exceptions import ContractViolation


logger = logging.getLogger('tesgo.solver')

DEFAULT_TOL = 1e-10
# Barycentric weights at or below this value leave the corral.
WEIGHT_EPS = 1e-12
ITERATIONS_PER_VERTEX = 100
# Rounding slack, in units of machine epsilon, of a stalled optimality test.
ROUNDOFF_ULPS = 64


def _as_vertices(vertices):
    array = np.asarray(vertices, dtype=float)
    if array.ndim == 1:
        array = array.reshape(-1, 1)
    return array


@frozen
class Polytope:
    '''Convex hull of the rows of `vertices`; duplicate rows are allowed.'''

    vertices: np.ndarray = field(converter=_as_vertices, eq=False)

    def __attrs_post_init__(self):
        if self.vertices.ndim != 2 or self.vertices.shape[0] == 0:
            msg = 'Polytope needs a non-empty list of equal-length vertices'
            raise ContractViolation(msg)

    @property
    def dimension(self):
        return self.vertices.shape[1]

    def __len__(self):
        return self.vertices.shape[0]

    def translated(self, shift):
        return Polytope(self.vertices + np.asarray(shift, dtype=float))


@frozen
class MinNormResult:
    point: np.ndarray = field(eq=False)
    weights: np.ndarray = field(eq=False)
    sq_norm: float
    residual: float
    exact: bool = True


def wolfe_residual(point, vertices):
    return float(point @ point - np.min(vertices @ point))


def _roundoff_bound(point, vertices, tol):
    sq_norm = float(point @ point)
    scale = 1.0 + sq_norm + float(np.max(np.abs(vertices @ point)))
    return tol * (1.0 + sq_norm) + ROUNDOFF_ULPS * np.finfo(float).eps * scale


def _affine_minimizer(corral):
    '''
    Weights alpha (summing to one) of the point of minimum norm in the affine
    hull of the corral, from the KKT system [[G, 1], [1^T, 0]].
    '''

    size = corral.shape[0]
    kkt = np.zeros((size + 1, size + 1))
    kkt[:size, :size] = corral @ corral.T
    kkt[:size, size] = 1.0
    kkt[size, :size] = 1.0
    rhs = np.zeros(size + 1)
    rhs[size] = 1.0
    solution = np.linalg.lstsq(kkt, rhs, rcond=None)[0]
    alpha = solution[:size]
    return alpha / np.sum(alpha)


def _minor_cycle(vertices, corral, lam):
    '''
    Shrink the corral until the affine minimizer lies in its relative
    interior. Returns the surviving corral and its weights.
    '''

    while True:
        alpha = _affine_minimizer(vertices[corral])
        if np.all(alpha > WEIGHT_EPS):
            return corral, alpha

        leaving = alpha <= WEIGHT_EPS
        gaps = lam - alpha
        ratios = np.full(lam.size, np.inf)
        movable = leaving & (gaps > 0)
        ratios[movable] = lam[movable] / gaps[movable]
        ratios[leaving & ~movable] = 0.0
        blocking = int(np.argmin(ratios))
        theta = min(max(float(ratios[blocking]), 0.0), 1.0)

        lam = lam + theta * (alpha - lam)
        keep = lam > WEIGHT_EPS
        keep[blocking] = False
        corral = [idx for idx, kept in zip(corral, keep) if kept]
        lam = lam[keep]

        if not corral:
            return [], lam
        lam = lam / np.sum(lam)


def min_norm_point(polytope, tol=DEFAULT_TOL):
    '''
    Point of minimum Euclidean norm in conv(polytope.vertices).

    Optimality certificate: |w|^2 - <w, v_i> <= tol * (1 + |w|^2) for every
    vertex v_i. When the iteration cap (100 per vertex) is hit the current
    iterate is returned with exact=False and a warning. A corral that repeats
    is a stall: the iterate counts as exact when its residual is within
    rounding of the certificate, otherwise it is flagged inexact quietly.
    '''

    if not tol > 0:
        msg = f'Tolerance must be positive, got {tol}'
        raise ContractViolation(msg)

    vertices = polytope.vertices
    count = vertices.shape[0]

    start = int(np.argmin(np.einsum('ij,ij->i', vertices, vertices)))
    corral = [start]
    lam = np.ones(1)
    x = vertices[start].copy()
    exact = False
    stalled = False

    for _ in range(ITERATIONS_PER_VERTEX * count):
        sq_norm = float(x @ x)
        dots = vertices @ x
        candidate = int(np.argmin(dots))
        if sq_norm - dots[candidate] <= tol * (1.0 + sq_norm):
            exact = True
            break
        if candidate in corral:
            stalled = True
            break

        previous = sorted(corral)
        new_corral, new_lam = _minor_cycle(
            vertices,
            [*corral, candidate],
            np.append(lam, 0.0),
        )
        if not new_corral or sorted(new_corral) == previous:
            stalled = True
            break
        corral, lam = new_corral, new_lam
        x = lam @ vertices[corral]

    weights = np.zeros(count)
    weights[corral] = lam
    point = weights @ vertices
    sq_norm = float(point @ point)
    residual = wolfe_residual(point, vertices)
    if stalled and residual <= _roundoff_bound(point, vertices, tol):
        exact = True
    result = MinNormResult(
        point=point,
        weights=weights,
        sq_norm=sq_norm,
        residual=residual,
        exact=exact,
    )
    if not exact:
        log = logger.debug if stalled else logger.warning
        log(
            'min-norm point is inexact (%s): %d vertices, residual %.3e',
            'stalled' if stalled else 'iteration cap',
            count,
            result.residual,
        )
    return result


def nearest_point(q, polytope, tol=DEFAULT_TOL):
    '''
    Projection of q onto conv(polytope) as a MinNormResult whose point is
    already translated back (the nearest point, not the difference).
    '''

    q = np.atleast_1d(np.asarray(q, dtype=float))
    if q.shape != (polytope.dimension,):
        msg = f'Point of dimension {q.size} given, polytope has dimension {polytope.dimension}'
        raise ContractViolation(msg)

    shifted = min_norm_point(Polytope(polytope.vertices - q), tol)
    return MinNormResult(
        point=shifted.point + q,
        weights=shifted.weights,
        sq_norm=shifted.sq_norm,
        residual=shifted.residual,
        exact=shifted.exact,
    )


def dist_to_polytope(q, polytope, tol=DEFAULT_TOL):
    '''Returns (squared distance, nearest point) from q to conv(polytope).'''

    projection = nearest_point(q, polytope, tol)
    return projection.sq_norm, projection.point
