# -*- coding: utf-8 -*-

"""
Static file handler and mixin for handling lcreg configuration files (JSON or YAML).

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

__all__ = ['FileHandlerBase', 'ParserError', 'YAMLError', 'DuplicateKeyError', 'ConfigFormatError']

import os
import json
from typing import Any, Dict, Mapping

from lcreg.util.yaml import yaml_dump, yaml_load, ParserError, YAMLError, DuplicateKeyError
from lcreg.util.datastorage import create_dir_for_file, to_builtin

_JSON_EXTENSIONS = ('.json',)
_YAML_EXTENSIONS = ('.yaml', '.yml')


class ConfigFormatError(ValueError):
    """ Raised for unsupported file extensions or unparsable JSON/YAML content """
    pass


class FileHandlerBase:
    """ File handler base class providing static methods for handling raw configuration files.
    """

    @staticmethod
    def _extension(path: str) -> str:
        extension = os.path.splitext(path)[1].lower()
        if extension not in _JSON_EXTENSIONS + _YAML_EXTENSIONS:
            raise ConfigFormatError(
                f'Configuration file "{path}" must have one of the extensions '
                f'{_JSON_EXTENSIONS + _YAML_EXTENSIONS}'
            )
        return extension

    @classmethod
    def _load(cls, path: str) -> Dict[str, Any]:
        if not os.path.isfile(path):
            raise FileNotFoundError(f'Configuration file not found: "{path}"')
        if cls._extension(path) in _YAML_EXTENSIONS:
            try:
                config = yaml_load(path)
            except YAMLError as err:
                raise ConfigFormatError(f'Malformed YAML in "{path}": {err}') from err
        else:
            with open(path, 'r', encoding='utf-8') as file:
                try:
                    config = json.load(file)
                except json.JSONDecodeError as err:
                    raise ConfigFormatError(f'Malformed JSON in "{path}": {err}') from err
        if not isinstance(config, dict):
            raise ConfigFormatError(f'Configuration file "{path}" must contain a mapping')
        return config

    @classmethod
    def _dump(cls, path: str, config: Mapping[str, Any]) -> None:
        extension = cls._extension(path)
        create_dir_for_file(path)
        if extension in _YAML_EXTENSIONS:
            return yaml_dump(path, config)
        with open(path, 'w', encoding='utf-8') as file:
            json.dump(to_builtin(config), file, indent=2, sort_keys=True)
            file.write('\n')
