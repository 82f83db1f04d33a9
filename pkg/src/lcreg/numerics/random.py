# -*- coding: utf-8 -*-

"""
Deterministic random number stream used throughout lcreg.

Algorithm: numpy's PCG64 bit generator, seeded through numpy.random.SeedSequence from a single
unsigned 64-bit integer. Normal variates use numpy's Generator.standard_normal (ziggurat), uniform
integers use Generator.integers (Lemire's bounded method). Child streams derive their seed sequence
from the parent seed plus an integer spawn key, so they never depend on how many values the parent
has already drawn.

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

__all__ = ['Rng']

import numpy as np
from typing import Any, Dict, Optional, Sequence, Tuple, Union

_Size = Union[None, int, Tuple[int, ...]]


class Rng:
    """ Seeded PCG64 stream. Not thread-safe; give every consumer its own stream via spawn().
    """

    def __init__(self, seed: Optional[int] = 0, spawn_key: Optional[Sequence[int]] = ()) -> None:
        seed = int(seed)
        if not 0 <= seed < 2 ** 64:
            raise ValueError('Rng seed must be an unsigned 64-bit integer')
        self._seed = seed
        self._spawn_key = tuple(int(k) for k in spawn_key)
        sequence = np.random.SeedSequence(seed, spawn_key=self._spawn_key)
        self._generator = np.random.Generator(np.random.PCG64(sequence))

    def __repr__(self) -> str:
        return f'Rng(seed={self._seed:d}, spawn_key={self._spawn_key})'

    @property
    def seed(self) -> int:
        return self._seed

    @property
    def spawn_key(self) -> Tuple[int, ...]:
        return self._spawn_key

    @property
    def state(self) -> Dict[str, Any]:
        return self._generator.bit_generator.state

    @state.setter
    def state(self, value: Dict[str, Any]) -> None:
        self._generator.bit_generator.state = value

    def spawn(self, *key: int) -> 'Rng':
        """ Independent child stream identified by the given integer key path """
        return Rng(self._seed, self._spawn_key + tuple(key))

    def normal(self, size: _Size = None) -> Union[float, np.ndarray]:
        return self._generator.standard_normal(size)

    def uniform(self, low: float = 0.0, high: float = 1.0, size: _Size = None):
        return self._generator.uniform(low, high, size)

    def integers(self, low: int, high: Optional[int] = None, size: _Size = None):
        return self._generator.integers(low, high, size)

    def permutation(self, n: int) -> np.ndarray:
        return self._generator.permutation(n)

    def choice(self, a, size: _Size = None, replace: Optional[bool] = True):
        return self._generator.choice(a, size=size, replace=replace)
