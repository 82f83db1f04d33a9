# -*- coding: utf-8 -*-

"""
Sample index streams: instance-uniform epoch shuffling (stage 1) and class-balanced resampling
with replacement (stage 2).

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

__all__ = ['ClassBalancedSampler', 'InstanceSampler', 'resample_class_balanced']

import math
import numpy as np
from typing import Iterator, List

from lcreg.numerics import Rng
from lcreg.data.dataset import LongTailDataset, EmptyClassError


class InstanceSampler:
    """ Every epoch visits each sample exactly once in a fresh random order. The last batch of an
    epoch may be smaller than batch_size.
    """

    def __init__(self, num_samples: int, batch_size: int, rng: Rng) -> None:
        if num_samples < 1:
            raise ValueError('InstanceSampler needs at least one sample')
        if batch_size < 1:
            raise ValueError('batch_size must be >= 1')
        self._num_samples = int(num_samples)
        self._batch_size = int(batch_size)
        self._rng = rng

    @property
    def batches_per_epoch(self) -> int:
        return math.ceil(self._num_samples / self._batch_size)

    def epoch(self) -> List[np.ndarray]:
        order = self._rng.permutation(self._num_samples)
        return [order[start:start + self._batch_size]
                for start in range(0, self._num_samples, self._batch_size)]


class ClassBalancedSampler:
    """ Infinite stream of sample indices: a class is drawn uniformly, then a sample of that class
    uniformly with replacement. Holds private RNG state.
    """

    def __init__(self, dataset: LongTailDataset, rng: Rng) -> None:
        counts = dataset.class_counts
        empty = np.flatnonzero(counts == 0)
        if empty.size:
            raise EmptyClassError(f'Classes {empty.tolist()} have no samples, class-balanced '
                                  f'resampling is impossible')
        self._rng = rng
        self._num_classes = dataset.num_classes
        self._counts = counts.copy()
        # Samples grouped by class: members[offsets[c]:offsets[c] + counts[c]] belong to class c
        self._members = np.argsort(dataset.labels, kind='stable')
        self._offsets = np.concatenate(([0], np.cumsum(counts)[:-1]))

    def __iter__(self) -> Iterator[int]:
        while True:
            yield int(self.draw(1)[0])

    @property
    def num_classes(self) -> int:
        return self._num_classes

    def draw(self, size: int) -> np.ndarray:
        """ Draw size sample indices """
        classes = self._rng.integers(0, self._num_classes, size)
        within = self._rng.integers(0, self._counts[classes])
        return self._members[self._offsets[classes] + within]

    def batches(self, num_samples: int, batch_size: int) -> List[np.ndarray]:
        """ num_samples draws split into consecutive batches of batch_size """
        indices = self.draw(num_samples)
        return [indices[start:start + batch_size] for start in range(0, num_samples, batch_size)]


def resample_class_balanced(dataset: LongTailDataset, rng: Rng) -> ClassBalancedSampler:
    """ Class-balanced sampling stream over dataset (each class has probability 1/C) """
    return ClassBalancedSampler(dataset, rng)
