# SPDX-License-Identifier: Apache-2.0
# Copyright (C) 2024 tesgo contributors. All rights reserved.

from django.apps import AppConfig


class InterfacesConfig(AppConfig):
    name = 'tesgo.interfaces'

    def ready(self):
        from tesgo.interfaces import checks  # noqa: F401
