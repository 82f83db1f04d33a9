# -*- coding: utf-8 -*-

"""
Checkpoint directories.

A checkpoint directory holds one LCT1 tensor file "<name>.lct" per network parameter, optional
statistics tensors (e.g. "stats_n.lct", "stats_mu.lct", "stats_sigma.lct") and a "manifest.json"
listing every tensor name and shape along with the training step, stage, dataset geometry and the
full experiment configuration.

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

__all__ = ['MANIFEST_FILENAME', 'Checkpoint', 'CheckpointError', 'load_checkpoint', 'load_network',
           'save_checkpoint']

import os
import json
import numpy as np
from typing import Any, Dict, List, Mapping, Optional, Sequence

from lcreg.core.logger import get_logger
from lcreg.core.config import ExperimentConfig
from lcreg.numerics.serialization import TensorFormatError, load_array, save_tensor
from lcreg.util.datastorage import to_builtin
from lcreg.model.network import LCRegNetwork

logger = get_logger(__name__)

MANIFEST_FILENAME = 'manifest.json'
_FORMAT_NAME = 'lcreg-checkpoint'
_FORMAT_VERSION = 1


class CheckpointError(KeyError):
    """ Raised for incomplete or inconsistent checkpoint directories. "missing" lists the names of
    all absent tensors. """

    def __init__(self, message: str, missing: Optional[Sequence[str]] = None) -> None:
        super().__init__(message)
        self.message = message
        self.missing = list() if missing is None else list(missing)

    def __str__(self) -> str:
        return self.message


class Checkpoint:
    """ Loaded checkpoint contents """

    def __init__(self, directory: str, manifest: Mapping[str, Any], tensors: Mapping[str, np.ndarray],
                 stats: Mapping[str, np.ndarray]) -> None:
        self.directory = directory
        self.manifest = dict(manifest)
        self.tensors = dict(tensors)
        self.stats = dict(stats)

    @property
    def step(self) -> int:
        return int(self.manifest['step'])

    @property
    def stage(self) -> int:
        return int(self.manifest['stage'])

    @property
    def num_classes(self) -> int:
        return int(self.manifest['num_classes'])

    @property
    def input_shape(self) -> tuple:
        return tuple(self.manifest['input_shape'])

    @property
    def config(self) -> ExperimentConfig:
        return ExperimentConfig(self.manifest['config'])


def save_checkpoint(directory: str, network: LCRegNetwork, config: ExperimentConfig, step: int,
                    stage: int, stats: Optional[Mapping[str, np.ndarray]] = None) -> str:
    """ Write a checkpoint directory (created if missing, existing files overwritten).

    @param str directory: target directory
    @param LCRegNetwork network: network whose parameters are saved
    @param ExperimentConfig config: configuration the network was built and trained with
    @param int step: number of optimizer steps performed so far
    @param int stage: training stage (1 or 2)
    @param dict stats: optional, additional arrays by name (e.g. "stats_mu")

    @return str: path of the written manifest
    """
    os.makedirs(directory, exist_ok=True)
    stats = dict() if stats is None else dict(stats)
    tensor_entries = list()
    for name, array in network.state_arrays().items():
        save_tensor(os.path.join(directory, f'{name}.lct'), array)
        tensor_entries.append({'name': name, 'shape': list(array.shape)})
    stats_entries = list()
    for name, array in stats.items():
        array = np.asarray(array, dtype=np.float64)
        save_tensor(os.path.join(directory, f'{name}.lct'), array)
        stats_entries.append({'name': name, 'shape': list(array.shape)})
    manifest = {'format': _FORMAT_NAME,
                'version': _FORMAT_VERSION,
                'stage': int(stage),
                'step': int(step),
                'num_classes': network.num_classes,
                'input_shape': list(network.input_shape),
                'config': config.config_map,
                'tensors': tensor_entries,
                'stats': stats_entries}
    manifest_path = os.path.join(directory, MANIFEST_FILENAME)
    with open(manifest_path, 'w', encoding='utf-8') as file:
        json.dump(to_builtin(manifest), file, indent=2, sort_keys=True)
        file.write('\n')
    logger.info(f'Saved stage {stage:d} checkpoint at step {step:d} to "{directory}"')
    return manifest_path


def _load_entries(directory: str, entries: List[Mapping[str, Any]]) -> Dict[str, np.ndarray]:
    arrays = dict()
    missing = [entry['name'] for entry in entries
               if not os.path.isfile(os.path.join(directory, f'{entry["name"]}.lct'))]
    if missing:
        raise CheckpointError(f'Checkpoint "{directory}" is missing tensors: {", ".join(missing)}',
                              missing)
    for entry in entries:
        path = os.path.join(directory, f'{entry["name"]}.lct')
        try:
            array = load_array(path)
        except TensorFormatError as err:
            raise CheckpointError(f'Corrupt checkpoint tensor "{path}": {err}') from err
        if list(array.shape) != list(entry['shape']):
            raise CheckpointError(f'Checkpoint tensor "{entry["name"]}" has shape {array.shape}, '
                                  f'manifest says {tuple(entry["shape"])}')
        arrays[entry['name']] = array
    return arrays


def load_checkpoint(directory: str) -> Checkpoint:
    manifest_path = os.path.join(directory, MANIFEST_FILENAME)
    if not os.path.isfile(manifest_path):
        raise CheckpointError(f'No checkpoint manifest found at "{manifest_path}"',
                              [MANIFEST_FILENAME])
    with open(manifest_path, 'r', encoding='utf-8') as file:
        try:
            manifest = json.load(file)
        except json.JSONDecodeError as err:
            raise CheckpointError(f'Malformed checkpoint manifest "{manifest_path}": {err}') from err
    if manifest.get('format') != _FORMAT_NAME:
        raise CheckpointError(f'"{manifest_path}" is not an lcreg checkpoint manifest')
    tensors = _load_entries(directory, manifest.get('tensors', list()))
    stats = _load_entries(directory, manifest.get('stats', list()))
    return Checkpoint(directory, manifest, tensors, stats)


def load_network(checkpoint: Checkpoint) -> LCRegNetwork:
    """ Rebuild the network described by a checkpoint and load its parameters.
    Raises CheckpointError listing every parameter the checkpoint lacks. """
    network = LCRegNetwork.from_config(checkpoint.config, checkpoint.input_shape,
                                       checkpoint.num_classes)
    try:
        network.load_state_arrays(checkpoint.tensors)
    except KeyError as err:
        missing = list(err.args[0])
        raise CheckpointError(f'Checkpoint "{checkpoint.directory}" is missing tensors: '
                              f'{", ".join(missing)}', missing) from None
    return network
