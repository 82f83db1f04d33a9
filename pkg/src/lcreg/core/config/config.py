# -*- coding: utf-8 -*-

"""
This file contains an object representing an lcreg experiment configuration.

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

__all__ = ['ExperimentConfig', 'ValidationError', 'default_latents', 'DIAGONAL_COVARIANCE_ABOVE']

import copy
from typing import Any, Iterator, Mapping, MutableMapping, Optional, Union
from collections.abc import MutableMapping as _MutableMapping

from .validator import ValidationError
from .validator import validate_config as _validate_config
from .file_handler import FileHandlerBase as _FileHandlerBase

# Full DxD latent covariances are replaced by their diagonal above this feature dimension
DIAGONAL_COVARIANCE_ABOVE = 256


def default_latents(num_classes: int) -> int:
    """ Latent category count by dataset scale: 40 for 10-class, 50 for 100-class and 100 for
    larger label spaces. """
    if num_classes <= 10:
        return 40
    if num_classes <= 100:
        return 50
    return 100


class ExperimentConfig(_FileHandlerBase, _MutableMapping):
    """ Mapping representing a valid lcreg experiment configuration.
    Handles config file loading/dumping. Performs JSON schema validation (and default value
    insertion) upon creation, loading, dumping and every mutation.
    """

    def __init__(self, config: Optional[Mapping[str, Any]] = None, **overrides: Any) -> None:
        self._file_path = None
        self._config = None
        new_config = dict() if config is None else copy.deepcopy(dict(config))
        new_config.update(copy.deepcopy(overrides))
        self.set_config(new_config)

    def __repr__(self) -> str:
        return f'ExperimentConfig({repr(self._config)})'

    def __getitem__(self, key: str) -> Any:
        return copy.deepcopy(self._config[key])

    def __setitem__(self, key: str, value: Any) -> None:
        new_config = self.config_map
        new_config[key] = value
        self.set_config(new_config)

    def __delitem__(self, key: str) -> None:
        # Deleting a key resets it to its default value
        new_config = self.config_map
        del new_config[key]
        self.set_config(new_config)

    def __iter__(self) -> Iterator[str]:
        return iter(self._config)

    def __len__(self) -> int:
        return len(self._config)

    def __eq__(self, other: Any) -> bool:
        if isinstance(other, ExperimentConfig):
            return self._config == other._config
        return NotImplemented

    @property
    def config_map(self) -> MutableMapping[str, Any]:
        """ Deepcopy of the raw config dict """
        return copy.deepcopy(self._config)

    @property
    def file_path(self) -> Union[None, str]:
        """ File path of the associated config file. None if no load/dump has been performed. """
        return self._file_path

    @property
    def covariance_diagonal(self) -> bool:
        """ True if latent covariances are kept as diagonals only """
        mode = self._config['covariance_mode']
        if mode == 'auto':
            return self._config['feature_dim'] > DIAGONAL_COVARIANCE_ABOVE
        return mode == 'diagonal'

    def set_config(self, config: Union[None, Mapping[str, Any]]) -> None:
        """ Validate and reset this ExperimentConfig with the given raw config dict
        """
        new_config = dict() if config is None else copy.deepcopy(dict(config))
        _validate_config(new_config)
        self._config = new_config

    def updated(self, **changes: Any) -> 'ExperimentConfig':
        """ Validated copy with the given top-level keys replaced. Nested dicts are merged. """
        new_config = self.config_map
        for key, value in changes.items():
            if isinstance(value, Mapping) and isinstance(new_config.get(key), dict):
                new_config[key].update(value)
            else:
                new_config[key] = value
        return ExperimentConfig(new_config)

    @classmethod
    def from_file(cls, file_path: str) -> 'ExperimentConfig':
        config = cls()
        config.load(file_path)
        return config

    def load(self, file_path: str) -> None:
        """ Load a config from file (.json, .yaml or .yml), validate it (JSON schema) and reset this
        instance. Unknown keys raise jsonschema.ValidationError, a missing file FileNotFoundError.
        """
        config = self._load(file_path)
        self.set_config(config)
        self._file_path = file_path

    def dump(self, file_path: Optional[str] = None) -> None:
        """ Dumps this instance to file after successful JSON schema validation.
        """
        file_path = self._file_path if file_path is None else file_path
        if file_path is None:
            raise ValueError('No file path defined for configuration to dump into')
        config = self.config_map
        _validate_config(config)
        self._dump(file_path, config)
        self._file_path = file_path
