# SPDX-License-Identifier: Apache-2.0
# Copyright (C) 2024 tesgo contributors. All rights reserved.

from argparse import ArgumentTypeError

from tesgo.core.exceptions import UnsupportedProblemError
from tesgo.data.problems import get_spec


def parser_type_problem(s):
    try:
        get_spec(s)
    except UnsupportedProblemError as e:
        raise ArgumentTypeError(str(e)) from e
    return s


def parser_type_positive_int(s):
    try:
        value = int(s)
    except ValueError:
        value = 0
    if value < 1:
        msg = f'Invalid positive integer: {s}'
        raise ArgumentTypeError(msg)
    return value


def parser_type_non_negative_real(s):
    try:
        value = float(s)
    except ValueError:
        value = -1.0
    if not value >= 0:
        msg = f'Invalid non-negative real: {s}'
        raise ArgumentTypeError(msg)
    return value
