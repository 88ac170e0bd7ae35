# SPDX-License-Identifier: Apache-2.0
# Copyright (C) 2024 tesgo contributors. All rights reserved.


class TesgoError(Exception):
    '''Base class of all errors raised by tesgo.'''


class ContractViolation(TesgoError, ValueError):
    '''A precondition of an operation is broken (wrong dimension, bad parameter).'''


class UnsupportedProblemError(TesgoError, KeyError):
    def __init__(self, name, n=None, supported=None):
        self.name = name
        self.n = n
        self.supported = supported or []
        what = name if n is None else f'{name} with n={n}'
        msg = f'Unsupported problem {what}. Possible are: {", ".join(self.supported)}'
        super().__init__(msg)

    def __str__(self):
        return self.args[0]


class ExternallyDefinedProblemError(UnsupportedProblemError):
    def __init__(self, name, supported=None):
        super().__init__(name, supported=supported)
        self.args = (
            f'Problem {name} is defined externally (its formulas are not part of the '
            f'registry). Possible are: {", ".join(self.supported)}',
        )


class ConfigurationError(TesgoError, ValueError):
    '''Unknown preset or invalid solver configuration content.'''


class MissingRunsError(TesgoError):
    def __init__(self, missing):
        self.missing = list(missing)
        listed = ', '.join(f'{solver}@{key}' for solver, key in self.missing)
        msg = f'Missing runs for (solver, problem) pairs: {listed}'
        super().__init__(msg)


class ResultsFormatError(TesgoError):
    '''Results CSV does not follow the expected schema.'''
