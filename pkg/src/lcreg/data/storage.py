# -*- coding: utf-8 -*-

"""
Dataset directory persistence.

Layout of a dataset directory:
    data/<index>.lct   one LCT1 tensor file per sample (channels x height x width)
    labels.csv         UTF-8, header "file,label", one unquoted row per sample
    spec.json          LongTailSpec keys (num_classes, n_max, imbalance_factor, seed, profile)

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

__all__ = ['DATA_DIRNAME', 'LABELS_FILENAME', 'SPEC_FILENAME', 'load_dataset', 'save_dataset']

import os
import json
import numpy as np

from lcreg.core.logger import get_logger
from lcreg.numerics.serialization import TensorFormatError, load_array, save_tensor
from lcreg.util.datastorage import CsvTableStorage, ImageFormat
from lcreg.data.spec import LongTailSpec
from lcreg.data.dataset import LongTailDataset, LabelRangeError, MalformedLabelsError
from lcreg.data.dataset import MissingFileError, NoSamplesError, ShapeMismatchError

logger = get_logger(__name__)

DATA_DIRNAME = 'data'
LABELS_FILENAME = 'labels.csv'
SPEC_FILENAME = 'spec.json'
_LABEL_COLUMNS = ('file', 'label')


def save_dataset(dataset: LongTailDataset, directory: str) -> None:
    """ Write all samples, the labels table and the spec into directory (created if missing).
    Existing files with the same names are overwritten.
    """
    os.makedirs(os.path.join(directory, DATA_DIRNAME), exist_ok=True)
    width = max(6, len(str(len(dataset) - 1)))
    rows = list()
    for index, label in enumerate(dataset.labels):
        filename = f'{index:0{width}d}.lct'
        save_tensor(os.path.join(directory, DATA_DIRNAME, filename), dataset.images[index])
        rows.append((filename, int(label)))
    CsvTableStorage(root_dir=directory, image_format=ImageFormat.PNG).save_data(
        rows, LABELS_FILENAME, column_headers=_LABEL_COLUMNS
    )
    with open(os.path.join(directory, SPEC_FILENAME), 'w', encoding='utf-8') as file:
        json.dump(dataset.spec.to_dict(), file, indent=2, sort_keys=True)
        file.write('\n')
    logger.info(f'Saved dataset with {len(dataset):d} samples to "{directory}"')


def _parse_label_rows(directory: str):
    storage = CsvTableStorage(root_dir=directory, image_format=ImageFormat.PNG)
    try:
        header, rows = storage.load_data(LABELS_FILENAME)
    except UnicodeDecodeError as err:
        raise MalformedLabelsError(f'"{LABELS_FILENAME}" is not valid UTF-8') from err
    if header != _LABEL_COLUMNS:
        raise MalformedLabelsError(
            f'"{LABELS_FILENAME}" must start with the header row "{",".join(_LABEL_COLUMNS)}"'
        )
    parsed = list()
    for line_no, row in enumerate(rows, 2):
        if len(row) != 2 or any('"' in field for field in row):
            raise MalformedLabelsError(f'Malformed row {line_no:d} in "{LABELS_FILENAME}": {row}')
        filename, label_str = (field.strip() for field in row)
        if not filename:
            raise MalformedLabelsError(f'Empty file name in row {line_no:d} of "{LABELS_FILENAME}"')
        try:
            label = int(label_str)
        except ValueError:
            raise MalformedLabelsError(f'Non-integer label "{label_str}" in row {line_no:d} of '
                                       f'"{LABELS_FILENAME}"') from None
        parsed.append((filename, label))
    return parsed


def load_dataset(directory: str) -> LongTailDataset:
    """ Load a dataset directory written by save_dataset (bit-exact).

    @param str directory: dataset directory

    @return LongTailDataset: loaded dataset
    """
    data_dir = os.path.join(directory, DATA_DIRNAME)
    labels_path = os.path.join(directory, LABELS_FILENAME)
    spec_path = os.path.join(directory, SPEC_FILENAME)
    if not os.path.isdir(directory):
        raise MissingFileError(f'Dataset directory "{directory}" does not exist')
    has_tensors = os.path.isdir(data_dir) and any(
        name.endswith('.lct') for name in os.listdir(data_dir)
    )
    if not has_tensors and not os.path.isfile(labels_path):
        raise NoSamplesError(f'no samples found in "{directory}"')
    for path in (labels_path, spec_path):
        if not os.path.isfile(path):
            raise MissingFileError(f'Missing dataset file "{path}"')

    with open(spec_path, 'r', encoding='utf-8') as file:
        try:
            spec = LongTailSpec.from_dict(json.load(file))
        except (json.JSONDecodeError, KeyError, ValueError, TypeError) as err:
            raise MalformedLabelsError(f'Invalid dataset spec "{spec_path}": {err}') from err

    rows = _parse_label_rows(directory)
    if not rows:
        raise NoSamplesError(f'no samples found in "{directory}"')

    images = list()
    labels = list()
    for filename, label in rows:
        if not 0 <= label < spec.num_classes:
            raise LabelRangeError(f'label out of range: {label:d} not in [0, {spec.num_classes:d}) '
                                  f'for "{filename}"')
        path = os.path.join(data_dir, filename)
        if not os.path.isfile(path):
            raise MissingFileError(f'Missing sample tensor file "{path}"')
        try:
            image = load_array(path)
        except TensorFormatError as err:
            raise MalformedLabelsError(f'Sample "{path}" is not a valid tensor file: {err}') from err
        if images and image.shape != images[0].shape:
            raise ShapeMismatchError(f'Sample "{filename}" has shape {image.shape}, expected '
                                     f'{images[0].shape}')
        if image.ndim != 3:
            raise ShapeMismatchError(f'Sample "{filename}" must be (channels, height, width), got '
                                     f'{image.shape}')
        images.append(image)
        labels.append(label)
    logger.debug(f'Loaded {len(labels):d} samples from "{directory}"')
    return LongTailDataset(np.stack(images), np.array(labels, dtype=np.int64), spec)
