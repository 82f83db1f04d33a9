# -*- coding: utf-8 -*-

"""
In-memory labeled image dataset with per-class bookkeeping and the dataset error hierarchy.

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

__all__ = ['DatasetError', 'EmptyClassError', 'LabelRangeError', 'LongTailDataset',
           'MalformedLabelsError', 'MissingFileError', 'NoSamplesError', 'ShapeMismatchError']

import numpy as np
from typing import Iterator, Optional, Sequence, Tuple, Union

from lcreg.numerics import Tensor
from lcreg.data.spec import LongTailSpec


class DatasetError(Exception):
    """ Base class of all dataset errors. Every subclass carries a distinct machine-readable "code".
    """
    code = 'dataset_error'


class MissingFileError(DatasetError, FileNotFoundError):
    code = 'missing_file'


class LabelRangeError(DatasetError, ValueError):
    code = 'label_out_of_range'


class MalformedLabelsError(DatasetError, ValueError):
    code = 'malformed_labels'


class NoSamplesError(DatasetError):
    code = 'no_samples'


class EmptyClassError(DatasetError, ValueError):
    code = 'empty_class'


class ShapeMismatchError(DatasetError, ValueError):
    code = 'inconsistent_shapes'


class LongTailDataset:
    """ Read-only collection of equally shaped images (channels x height x width) with integer
    labels in [0, C).
    """

    def __init__(self, images: np.ndarray, labels: Sequence[int], spec: LongTailSpec) -> None:
        images = np.array(images, dtype=np.float64)
        labels = np.array(labels, dtype=np.int64)
        if images.ndim != 4:
            raise ShapeMismatchError(
                f'Images must be stacked as (samples, channels, height, width), got {images.shape}'
            )
        if labels.ndim != 1 or labels.size != images.shape[0]:
            raise ShapeMismatchError(f'Expected {images.shape[0]:d} labels, got {labels.size:d}')
        if labels.size == 0:
            raise NoSamplesError('no samples found')
        if np.any(labels < 0) or np.any(labels >= spec.num_classes):
            raise LabelRangeError('label out of range')
        if not np.isfinite(images).all():
            raise ValueError('Images contain non-finite values')
        images.flags.writeable = False
        labels.flags.writeable = False
        self._images = images
        self._labels = labels
        self._spec = spec
        self._class_counts = np.bincount(labels, minlength=spec.num_classes)
        self._class_counts.flags.writeable = False

    def __len__(self) -> int:
        return self._labels.size

    def __getitem__(self, index: int) -> Tuple[Tensor, int]:
        return Tensor(self._images[index]), int(self._labels[index])

    def __iter__(self) -> Iterator[Tuple[Tensor, int]]:
        for index in range(len(self)):
            yield self[index]

    def __repr__(self) -> str:
        return (f'{self.__class__.__name__}(samples={len(self):d}, input_shape={self.input_shape}, '
                f'spec={self._spec!r})')

    @property
    def images(self) -> np.ndarray:
        return self._images

    @property
    def labels(self) -> np.ndarray:
        return self._labels

    @property
    def spec(self) -> LongTailSpec:
        return self._spec

    @property
    def num_classes(self) -> int:
        return self._spec.num_classes

    @property
    def class_counts(self) -> np.ndarray:
        return self._class_counts

    @property
    def input_shape(self) -> Tuple[int, int, int]:
        return tuple(self._images.shape[1:])

    def batch(self, indices: Union[Sequence[int], np.ndarray]) -> Tuple[Tensor, np.ndarray]:
        """ Stacked images and labels of the given sample indices """
        indices = np.asarray(indices, dtype=np.int64)
        return Tensor(self._images[indices]), self._labels[indices].copy()

    def class_indices(self, label: int) -> np.ndarray:
        return np.flatnonzero(self._labels == label)

    def subset(self, indices: Union[Sequence[int], np.ndarray],
               spec: Optional[LongTailSpec] = None) -> 'LongTailDataset':
        indices = np.asarray(indices, dtype=np.int64)
        return LongTailDataset(self._images[indices], self._labels[indices],
                               self._spec if spec is None else spec)

    def equals(self, other: 'LongTailDataset') -> bool:
        """ Bit-exact comparison of images, labels and spec """
        return (self._spec == other.spec and
                self._images.shape == other.images.shape and
                self._images.tobytes() == other.images.tobytes() and
                np.array_equal(self._labels, other.labels))
