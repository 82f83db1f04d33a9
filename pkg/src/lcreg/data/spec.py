# -*- coding: utf-8 -*-

"""
Long-tailed dataset specification, per-class sample counts and many/medium/few class splits.

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

__all__ = ['FEW_SHOT_BELOW', 'ImbalanceProfile', 'LongTailSpec', 'MANY_SHOT_ABOVE',
           'balanced_test_spec', 'class_counts', 'split_classes']

import math
import numpy as np
from enum import Enum
from typing import Any, Dict, Mapping, Optional, Sequence, Tuple, Union

from lcreg.util.helpers import is_integer, is_number

# Classes with more than MANY_SHOT_ABOVE training samples are "many-shot", classes with fewer than
# FEW_SHOT_BELOW are "few-shot" and everything in between (inclusive) is "medium-shot".
MANY_SHOT_ABOVE = 100
FEW_SHOT_BELOW = 20


class ImbalanceProfile(Enum):
    """ Decay profile of the per-class sample count over the class index.
    """
    EXP = 'exp'
    STEP = 'step'


class LongTailSpec:
    """ Parameters of a long-tailed label distribution.

    The imbalance factor is the ratio between the sample counts of the largest (index 0) and the
    smallest (index C-1) class.
    """

    def __init__(self, num_classes: int, n_max: int, imbalance_factor: float,
                 seed: Optional[int] = 0,
                 profile: Optional[Union[str, ImbalanceProfile]] = ImbalanceProfile.EXP) -> None:
        if not is_integer(num_classes) or num_classes < 1:
            raise ValueError(f'num_classes must be integer >= 1, received {num_classes!r}')
        if not is_integer(n_max) or n_max < 1:
            raise ValueError(f'n_max must be integer >= 1, received {n_max!r}')
        if not is_number(imbalance_factor) or not imbalance_factor >= 1:
            raise ValueError(f'imbalance_factor must be >= 1, received {imbalance_factor!r}')
        if not is_integer(seed) or seed < 0:
            raise ValueError(f'seed must be a non-negative integer, received {seed!r}')
        self._num_classes = int(num_classes)
        self._n_max = int(n_max)
        self._imbalance_factor = float(imbalance_factor)
        self._seed = int(seed)
        self._profile = ImbalanceProfile(profile)

    def __repr__(self) -> str:
        return (f'{self.__class__.__name__}(num_classes={self._num_classes:d}, '
                f'n_max={self._n_max:d}, imbalance_factor={self._imbalance_factor!r}, '
                f'seed={self._seed:d}, profile={self._profile.value!r})')

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, LongTailSpec):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    @property
    def num_classes(self) -> int:
        return self._num_classes

    @property
    def n_max(self) -> int:
        return self._n_max

    @property
    def imbalance_factor(self) -> float:
        return self._imbalance_factor

    @property
    def seed(self) -> int:
        return self._seed

    @property
    def profile(self) -> ImbalanceProfile:
        return self._profile

    def to_dict(self) -> Dict[str, Any]:
        """ Representation stored as "spec.json" inside a dataset directory """
        return {'num_classes': self._num_classes,
                'n_max': self._n_max,
                'imbalance_factor': self._imbalance_factor,
                'seed': self._seed,
                'profile': self._profile.value}

    @classmethod
    def from_dict(cls, spec_dict: Mapping[str, Any]) -> 'LongTailSpec':
        missing = {'num_classes', 'n_max', 'imbalance_factor', 'seed'}.difference(spec_dict)
        if missing:
            raise KeyError(f'Dataset spec is missing the keys {sorted(missing)}')
        return cls(num_classes=spec_dict['num_classes'],
                   n_max=spec_dict['n_max'],
                   imbalance_factor=spec_dict['imbalance_factor'],
                   seed=spec_dict['seed'],
                   profile=spec_dict.get('profile', ImbalanceProfile.EXP.value))


def _round_half_up(values: np.ndarray) -> np.ndarray:
    return np.floor(values + 0.5).astype(np.int64)


def class_counts(spec: LongTailSpec) -> np.ndarray:
    """ Number of samples per class, non-increasing with the class index.

    Exponential profile: n_c = round(n_max * IF^(-c / (C-1))).
    Step profile: the first ceil(C/2) classes hold n_max samples, the rest round(n_max / IF).

    @param LongTailSpec spec: label distribution to realize

    @return numpy.ndarray: integer vector of length C
    """
    if spec.imbalance_factor < 1:
        raise ValueError('Imbalance factor must be >= 1')
    num_classes = spec.num_classes
    if num_classes == 1:
        return np.array([spec.n_max], dtype=np.int64)
    if spec.profile is ImbalanceProfile.STEP:
        counts = np.full(num_classes, spec.n_max / spec.imbalance_factor)
        counts[:math.ceil(num_classes / 2)] = spec.n_max
    else:
        exponents = np.arange(num_classes) / (num_classes - 1)
        counts = spec.n_max * spec.imbalance_factor ** (-exponents)
    # n_min may round to 0 for IF > 2 * n_max. Every class keeps at least one sample.
    return np.maximum(_round_half_up(counts), 1)


def balanced_test_spec(spec: LongTailSpec, samples_per_class: int,
                       seed: Optional[int] = None) -> LongTailSpec:
    """ Balanced (IF = 1) held-out counterpart of a long-tailed training spec """
    return LongTailSpec(num_classes=spec.num_classes,
                        n_max=samples_per_class,
                        imbalance_factor=1,
                        seed=spec.seed + 1 if seed is None else seed,
                        profile=ImbalanceProfile.EXP)


def split_classes(counts: Sequence[int]) -> Tuple[Tuple[int, ...], Tuple[int, ...], Tuple[int, ...]]:
    """ Partition class indices by their training sample count.

    @param counts: per-class training sample counts (>= 0)

    @return tuple: sorted class index tuples (many, medium, few)
    """
    counts = np.asarray(counts)
    if counts.ndim != 1:
        raise ValueError('Class counts must be a vector')
    if np.any(counts < 0):
        raise ValueError('Class counts must be non-negative')
    many = tuple(int(c) for c in np.flatnonzero(counts > MANY_SHOT_ABOVE))
    few = tuple(int(c) for c in np.flatnonzero(counts < FEW_SHOT_BELOW))
    medium = tuple(int(c) for c in
                   np.flatnonzero((counts >= FEW_SHOT_BELOW) & (counts <= MANY_SHOT_ABOVE)))
    return many, medium, few
