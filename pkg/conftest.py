# SPDX-License-Identifier: Apache-2.0
# Copyright (C) 2024 tesgo contributors. All rights reserved.

# Configure Django for pytest the same way manage.py does for `manage.py test`.

import os

import django


os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'tesgo.settings')
django.setup()
