# SPDX-License-Identifier: Apache-2.0
# Copyright (C) 2024 tesgo contributors. All rights reserved.

from django.conf import settings
from django.core.checks import Error, register

from tesgo.core.config.services import load_conf_file, validate_conf
from tesgo.core.exceptions import ConfigurationError


@register()
def check_solver_conf(app_configs, **kwargs):
    '''Validate settings.TESGO and the optional TESGO_CONF file.'''

    errors = []
    sources = [('settings.TESGO', lambda: validate_conf(settings.TESGO))]
    if settings.TESGO_CONF_FILE:
        path = settings.TESGO_CONF_FILE
        sources.append((path, lambda: load_conf_file(path)))

    for origin, load in sources:
        try:
            load()
        except ConfigurationError as e:
            errors.append(Error(str(e), obj=origin, id='tesgo.E001'))
    return errors
