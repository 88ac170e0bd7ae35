#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
# Copyright (C) 2024 tesgo contributors. All rights reserved.

import os
import sys


if __name__ == '__main__':
    os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'tesgo.settings')
    try:
        from django.core.management import execute_from_command_line
    except ImportError:
        msg = 'Django is required to run tesgo commands, install requirements.txt first'
        raise ImportError(msg) from ImportError
    execute_from_command_line(sys.argv)
