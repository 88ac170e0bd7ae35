# SPDX-License-Identifier: Apache-2.0
# Copyright (C) 2024 tesgo contributors. All rights reserved.

import logging
import os

from django.conf import settings
from pythonjsonlogger import jsonlogger


def get_or_create_run_logger(logpath, level=logging.INFO):
    '''
    Attach a JSON file handler writing to `logpath` to the solver logger.
    Returns the logger and the handler, the caller detaches the handler
    when the run is over.
    '''

    folder = os.path.dirname(os.path.abspath(logpath))
    if not os.path.exists(folder):
        os.makedirs(folder)

    logger = logging.getLogger('tesgo.solver')
    handler = logging.FileHandler(logpath)
    handler.setLevel(level)

    formatter = jsonlogger.JsonFormatter(settings.LOGGING['formatters']['json']['format'])
    handler.setFormatter(formatter)
    logger.addHandler(handler)
    if logger.getEffectiveLevel() > level:
        logger.setLevel(level)

    return logger, handler


def release_run_logger(logger, handler):
    logger.removeHandler(handler)
    handler.close()
    logger.setLevel(settings.LOGGING['loggers'][logger.name]['level'])
