# SPDX-License-Identifier: Apache-2.0
# Copyright (C) 2024 tesgo contributors. All rights reserved.

from __future__ import annotations

from functools import lru_cache
import json
import logging
import os

from attrs import evolve
from django.conf import settings
import jsonschema
from jsonschema import validate

from tesgo.core.driver import preset
from tesgo.core.exceptions import ConfigurationError


logger = logging.getLogger('tesgo.solver')

TESGO_DIR = os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
SCHEMAS_DIR = os.path.join(TESGO_DIR, 'data', 'schemas')


def load_schema(schema_name):
    with open(os.path.join(SCHEMAS_DIR, f'{schema_name}.json')) as schema_file:
        return json.load(schema_file)


def validate_conf(content):
    '''Check configuration content against the solver_conf schema.'''

    try:
        validate(instance=content, schema=load_schema('solver_conf'))
    except jsonschema.exceptions.ValidationError as jeve:
        jeve_msg = jeve.message[0].lower() + jeve.message[1:]
        msg = f'Invalid format: {jeve_msg}'
        raise ConfigurationError(msg) from jeve
    return content


def load_conf_file(path):
    try:
        with open(path) as conf_file:
            content = json.load(conf_file)
    except OSError as e:
        msg = f'Unable to read configuration file {path}: {e}'
        raise ConfigurationError(msg) from e
    except json.JSONDecodeError as e:
        msg = f'Invalid format: {path} is not valid JSON ({e.msg})'
        raise ConfigurationError(msg) from e
    return validate_conf(content)


@lru_cache(maxsize=8)
def _file_conf(path):
    logger.debug('loading configuration from %s', path)
    return load_conf_file(path)


def getattr_from_conf(data_key, default=None, required=False, conf=None):
    '''
    Look a configuration key up in, by priority: the explicit `conf` mapping,
    the file named by settings.TESGO_CONF_FILE and the settings.TESGO
    defaults.
    '''

    layers = [conf or {}]
    conf_file = getattr(settings, 'TESGO_CONF_FILE', None)
    if conf_file:
        layers.append(_file_conf(conf_file))
    layers.append(getattr(settings, 'TESGO', {}))

    for layer in layers:
        if data_key in layer:
            return layer[data_key]
    if required:
        msg = f"'{data_key}' wasn't found in tesgo configuration"
        raise KeyError(msg)
    return default


def build_config(preset_name=None, n=2, overrides=None, conf=None):
    '''
    TesgoConfig for dimension n: the preset first, then the configured
    penalty, improvement and restart defaults, then the `overrides`
    mapping (the "solver" section of a configuration file).
    '''

    if preset_name is None:
        preset_name = getattr_from_conf('DEFAULT_PRESET', default='full', conf=conf)
    cfg = preset(preset_name, n)
    cfg = evolve(
        cfg,
        gamma=getattr_from_conf('PENALTY_GAMMA', default=cfg.gamma, conf=conf),
        improvement_eta=getattr_from_conf(
            'IMPROVEMENT_ETA',
            default=cfg.improvement_eta,
            conf=conf,
        ),
        max_restarts=getattr_from_conf('MAX_RESTARTS', default=cfg.max_restarts, conf=conf),
    )
    if not overrides:
        return cfg

    validate_conf({'solver': overrides})
    overrides = dict(overrides)
    for name in ('local', 'escape_local'):
        overrides[name] = _local_overrides(getattr(cfg, name), overrides.get(name, {}))
    return evolve(cfg, **overrides)


def _local_overrides(local_cfg, local):
    local = dict(local)
    inner = local.pop('inner', {})
    return evolve(local_cfg, inner=evolve(local_cfg.inner, **inner), **local)
