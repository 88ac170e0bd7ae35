# SPDX-License-Identifier: Apache-2.0
# Copyright (C) 2024 tesgo contributors. All rights reserved.

import sys

from django.core.management.base import BaseCommand, CommandError


USAGE_ERROR = 1
RUNTIME_ERROR = 2


class TesgoCommand(BaseCommand):
    '''
    Base of tesgo commands: usage errors exit with 1, failures while
    running exit with 2.
    '''

    requires_system_checks = []

    def create_parser(self, prog_name, subcommand, **kwargs):
        parser = super().create_parser(prog_name, subcommand, **kwargs)

        def usage_error(message):
            if parser.called_from_command_line:
                parser.print_usage(sys.stderr)
                parser.exit(USAGE_ERROR, f'{parser.prog}: error: {message}\n')
            msg = f'Error: {message}'
            raise CommandError(msg, returncode=USAGE_ERROR)

        parser.error = usage_error
        return parser

    @staticmethod
    def usage_error(e):
        return CommandError(str(e), returncode=USAGE_ERROR)

    @staticmethod
    def runtime_error(e):
        return CommandError(str(e), returncode=RUNTIME_ERROR)
