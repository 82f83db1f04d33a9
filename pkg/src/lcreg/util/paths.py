# -*- coding: utf-8 -*-

"""
Default file system locations used by lcreg.

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

__all__ = ['get_default_run_dir', 'get_home_dir', 'get_userdata_dir',
           'get_timestamp_dirname']

import datetime
import os
import re
from typing import Optional


def get_home_dir() -> str:
    """ Returns the path to the home directory, which should definitely exist.

    @return str: absolute path to the home directory
    """
    return os.path.abspath(os.path.expanduser('~'))


def get_userdata_dir(create_missing: Optional[bool] = False) -> str:
    """ Returns the path to the lcreg subfolder in the user home directory.

    @return str: absolute path to <home>/lcreg
    """
    path = os.path.join(get_home_dir(), 'lcreg')
    if create_missing and not os.path.exists(path):
        os.mkdir(path)
    return path


def get_default_run_dir(create_missing: Optional[bool] = False) -> str:
    """ Get the default root directory for training runs <home>/lcreg/runs

    @return str: path to default run root directory
    """
    path = os.path.join(get_userdata_dir(create_missing), 'runs')
    if create_missing and not os.path.exists(path):
        os.mkdir(path)
    return path


def get_timestamp_dirname(timestamp: Optional[datetime.datetime] = None,
                          nametag: Optional[str] = None) -> str:
    """ Run directory name of the form "20210130-1130-59_<nametag>".

    @param datetime.datetime timestamp: optional, timestamp to use (default: now)
    @param str nametag: optional, additional string to include in the name
    """
    if timestamp is None:
        timestamp = datetime.datetime.now()
    datetime_str = timestamp.strftime('%Y%m%d-%H%M-%S')
    if nametag:
        # Consecutive whitespaces are replaced by single underscore
        nametag = re.sub(r'[\s]+', '_', nametag.strip())
    return f'{datetime_str}_{nametag}' if nametag else datetime_str
