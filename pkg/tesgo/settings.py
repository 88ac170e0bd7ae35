# SPDX-License-Identifier: Apache-2.0
# Copyright (C) 2024 tesgo contributors. All rights reserved.

'''
Django settings of the tesgo project. There is no database and no web
surface: Django provides settings, logging configuration, management
commands and the test runner.
'''

import os


BASE_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))

SECRET_KEY = os.environ.get('TESGO_SECRET_KEY', 'tesgo-local-only')

DEBUG = False

ALLOWED_HOSTS = []

INSTALLED_APPS = [
    'tesgo.interfaces',
]

DATABASES = {}

USE_TZ = True

TEST_RUNNER = 'django.test.runner.DiscoverRunner'

LOG_LEVEL = os.environ.get('TESGO_LOG_LEVEL', 'WARNING').upper()

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'json': {
            '()': 'pythonjsonlogger.jsonlogger.JsonFormatter',
            'format': '%(asctime)s %(levelname)s %(name)s %(module)s %(message)s',
        },
        'console': {
            'format': '%(asctime)s [%(levelname)s] %(name)s: %(message)s',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'console',
        },
    },
    'loggers': {
        'tesgo.solver': {
            'handlers': ['console'],
            'level': LOG_LEVEL,
            'propagate': False,
        },
    },
}

# Optional JSON file overlaying TESGO (validated against solver_conf.json).
TESGO_CONF_FILE = os.environ.get('TESGO_CONF') or None

TESGO = {
    'PENALTY_GAMMA': 100.0,
    'DEFAULT_PRESET': 'full',
    'MAX_RESTARTS': 100,
    'IMPROVEMENT_ETA': 1e-6,
    'CSV_DIGITS': 10,
    'PROFILE_GRID': 200,
    'PROFILE_TAU': 0.2,
}
