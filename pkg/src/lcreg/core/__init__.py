# -*- coding: utf-8 -*-

"""
Package metadata, command line interface, configuration and logging of lcreg.

Copyright (c) 2026, the lcreg developers. See the AUTHORS.md file at the top-level directory of this
distribution.

This file is part of lcreg.

lcreg is free software: you can redistribute it and/or modify it under the terms of
the GNU Lesser General Public License as published by the Free Software Foundation,
either version 3 of the License, or (at your option) any later version.

lcreg is distributed in the hope that it will be useful, but WITHOUT ANY WARRANTY;
without even the implied warranty of MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.
See the GNU Lesser General Public License for more details.

You should have received a copy of the GNU Lesser General Public License along with lcreg.
If not, see <https://www.gnu.org/licenses/>.
"""

__all__ = ['ExperimentConfig', 'get_logger']

from importlib import metadata
try:
    __version__ = metadata.version('lcreg')
except metadata.PackageNotFoundError:
    __version__ = 'unknown'

from lcreg.core.config import ExperimentConfig
from lcreg.core.logger import get_logger
