# -*- coding: utf-8 -*-

"""
Part-compositional synthetic image generator.

Every class is drawn as a canvas with a subset of K shared part templates stamped into fixed grid
slots. Each part belongs to at least two classes, so cross-class commonalities exist by
construction and can be located exactly (part k always occupies bank.slot_region(k)).

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

__all__ = ['PartBank', 'synth_dataset', 'synth_train_test']

import math
import numpy as np
from typing import List, Optional, Sequence, Tuple

from lcreg.core.logger import get_logger
from lcreg.numerics import Rng
from lcreg.data.spec import LongTailSpec, balanced_test_spec, class_counts
from lcreg.data.dataset import LongTailDataset

logger = get_logger(__name__)


class PartBank:
    """ K part templates of shape (channels, part_size, part_size), a CxK non-negative composition
    matrix and one canvas grid slot per part.
    """

    def __init__(self, parts: np.ndarray, composition: np.ndarray,
                 slots: Optional[Sequence[int]] = None, grid_size: Optional[int] = None) -> None:
        """
        @param numpy.ndarray parts: part templates, shape (K, channels, part_size, part_size)
        @param numpy.ndarray composition: non-negative weights of shape (C, K)
        @param slots: optional, grid slot index per part (default: part index)
        @param int grid_size: optional, canvas is a grid_size x grid_size arrangement of slots
                              (default: smallest square holding all slots)
        """
        parts = np.array(parts, dtype=np.float64)
        composition = np.array(composition, dtype=np.float64)
        if parts.ndim != 4 or parts.shape[0] == 0:
            raise ValueError('PartBank needs at least one part template of shape '
                             '(channels, part_size, part_size)')
        if parts.shape[2] != parts.shape[3]:
            raise ValueError('Part templates must be square')
        if composition.ndim != 2 or composition.shape[1] != parts.shape[0]:
            raise ValueError(f'Composition must have shape (C, {parts.shape[0]:d}), got '
                             f'{composition.shape}')
        if np.any(composition < 0):
            raise ValueError('Composition weights must be non-negative')
        if not np.isfinite(parts).all() or not np.isfinite(composition).all():
            raise ValueError('PartBank contains non-finite values')
        num_parts = parts.shape[0]
        num_classes = composition.shape[0]
        users = np.count_nonzero(composition > 0, axis=0)
        if np.any(users < min(2, num_classes)):
            unused = np.flatnonzero(users < min(2, num_classes)).tolist()
            raise ValueError(f'Parts {unused} are used by fewer than two classes')

        slots = np.arange(num_parts) if slots is None else np.array(slots, dtype=np.int64)
        if slots.shape != (num_parts,) or len(set(slots.tolist())) != num_parts or np.any(slots < 0):
            raise ValueError('Every part needs its own non-negative grid slot')
        min_grid = math.ceil(math.sqrt(int(slots.max()) + 1))
        grid_size = min_grid if grid_size is None else int(grid_size)
        if grid_size < min_grid:
            raise ValueError(f'grid_size {grid_size:d} can not hold slot {int(slots.max()):d}')

        self._parts = parts
        self._composition = composition
        self._slots = slots
        self._grid_size = grid_size
        for arr in (self._parts, self._composition, self._slots):
            arr.flags.writeable = False

    @classmethod
    def generate(cls, num_classes: int, rng: Rng, num_parts: Optional[int] = None,
                 channels: Optional[int] = 1, part_size: Optional[int] = 4) -> 'PartBank':
        """ Random bank assigning a distinct pair of parts to every class.

        Pairs are taken ring by ring ((k, k+1), then (k, k+2), ...) so that the first ring, which
        uses every part exactly twice, is always complete.
        """
        if num_classes < 3:
            raise ValueError('At least 3 classes are needed for distinct shared-part compositions')
        if num_parts is None:
            num_parts = 3
            while num_parts * (num_parts - 1) // 2 < num_classes:
                num_parts += 1
        if not 3 <= num_parts <= num_classes or num_parts * (num_parts - 1) // 2 < num_classes:
            raise ValueError(f'num_parts must lie in [3, {num_classes:d}] and provide at least '
                             f'{num_classes:d} distinct pairs')

        pairs: List[Tuple[int, int]] = list()
        for offset in range(1, num_parts // 2 + 1):
            for k in range(num_parts):
                pair = tuple(sorted((k, (k + offset) % num_parts)))
                if pair not in pairs:
                    pairs.append(pair)
        pairs = pairs[:num_classes]

        relabel = rng.permutation(num_parts)
        class_order = rng.permutation(num_classes)
        composition = np.zeros((num_classes, num_parts))
        for cls_index, pair_index in enumerate(class_order):
            for part in pairs[pair_index]:
                composition[cls_index, relabel[part]] = 1.0

        parts = rng.normal((num_parts, channels, part_size, part_size))
        slots = rng.permutation(num_parts)
        bank = cls(parts, composition, slots)
        logger.debug(f'Generated PartBank with {num_parts:d} parts for {num_classes:d} classes')
        return bank

    @property
    def parts(self) -> np.ndarray:
        return self._parts

    @property
    def composition(self) -> np.ndarray:
        return self._composition

    @property
    def slots(self) -> np.ndarray:
        return self._slots

    @property
    def num_parts(self) -> int:
        return self._parts.shape[0]

    @property
    def num_classes(self) -> int:
        return self._composition.shape[0]

    @property
    def part_size(self) -> int:
        return self._parts.shape[-1]

    @property
    def image_shape(self) -> Tuple[int, int, int]:
        side = self._grid_size * self.part_size
        return self._parts.shape[1], side, side

    def slot_region(self, part: int) -> Tuple[slice, slice]:
        """ (rows, columns) slices of the canvas area part is stamped into """
        row, col = divmod(int(self._slots[part]), self._grid_size)
        size = self.part_size
        return slice(row * size, (row + 1) * size), slice(col * size, (col + 1) * size)

    def class_parts(self, label: int) -> Tuple[int, ...]:
        return tuple(int(k) for k in np.flatnonzero(self._composition[label] > 0))

    def shared_parts(self, label_a: int, label_b: int) -> Tuple[int, ...]:
        return tuple(sorted(set(self.class_parts(label_a)).intersection(self.class_parts(label_b))))

    def render(self, label: int) -> np.ndarray:
        """ Noise-free canvas of the given class """
        canvas = np.zeros(self.image_shape)
        for part in self.class_parts(label):
            rows, cols = self.slot_region(part)
            canvas[:, rows, cols] += self._composition[label, part] * self._parts[part]
        return canvas


def synth_dataset(spec: LongTailSpec, bank: PartBank, noise_sigma: float, rng: Rng) -> LongTailDataset:
    """ Long-tailed dataset of PartBank canvases plus i.i.d. Gaussian pixel noise.

    Samples are ordered by class. Class counts follow class_counts(spec) exactly.
    """
    if noise_sigma < 0:
        raise ValueError('noise_sigma must be >= 0')
    if bank.num_parts == 0:
        raise ValueError('PartBank is empty')
    if bank.num_classes != spec.num_classes:
        raise ValueError(f'PartBank covers {bank.num_classes:d} classes but the dataset spec '
                         f'requires {spec.num_classes:d}')
    counts = class_counts(spec)
    images = np.empty((int(counts.sum()),) + bank.image_shape)
    labels = np.repeat(np.arange(spec.num_classes), counts)
    start = 0
    for label, count in enumerate(counts):
        canvas = bank.render(label)
        block = images[start:start + count]
        block[...] = canvas
        if noise_sigma > 0:
            block += noise_sigma * rng.normal(block.shape)
        start += count
    logger.info(f'Synthesized {images.shape[0]:d} samples in {spec.num_classes:d} classes '
                f'(imbalance factor {spec.imbalance_factor:g})')
    return LongTailDataset(images, labels, spec)


def synth_train_test(spec: LongTailSpec, noise_sigma: float, test_per_class: int,
                     channels: Optional[int] = 1,
                     part_size: Optional[int] = 4) -> Tuple[LongTailDataset, LongTailDataset, PartBank]:
    """ Long-tailed training set and balanced test set rendered from one random PartBank.
    All randomness derives from spec.seed.

    @return tuple: (train dataset, test dataset, part bank)
    """
    rng = Rng(spec.seed)
    bank = PartBank.generate(spec.num_classes, rng.spawn(0), channels=channels, part_size=part_size)
    train = synth_dataset(spec, bank, noise_sigma, rng.spawn(1))
    test = synth_dataset(balanced_test_spec(spec, test_per_class), bank, noise_sigma, rng.spawn(2))
    return train, test, bank
