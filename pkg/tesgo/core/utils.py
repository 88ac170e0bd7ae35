# SPDX-License-Identifier: Apache-2.0
# Copyright (C) 2024 tesgo contributors. All rights reserved.

from __future__ import annotations

import math

from tesgo.core.config.services import getattr_from_conf


def unordered_group_by(iterable, key):
    '''
    Group objects by an attribute name or a key function, keeping the order
    of first appearance of every group.
    '''

    key_fn = key if callable(key) else (lambda obj: getattr(obj, key))
    groups = {}
    for obj in iterable:
        groups.setdefault(key_fn(obj), []).append(obj)
    return groups


def format_real(value, digits=None):
    '''Render a real for CSV output: significant digits, '' for None.'''

    if value is None:
        return ''
    if digits is None:
        digits = getattr_from_conf('CSV_DIGITS', default=10)
    value = float(value)
    if math.isinf(value):
        return 'inf' if value > 0 else '-inf'
    return f'{value:.{digits}g}'


def parse_optional_real(value):
    value = value.strip()
    return float(value) if value else None
