# -*- coding: utf-8 -*-

"""
Stochastic gradient descent with momentum, L2 weight decay and a learning rate schedule.

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

__all__ = ['LearningRateSchedule', 'SGD']

import math
import numpy as np
from enum import Enum
from typing import Mapping, Optional, Union

from lcreg.numerics import NonFiniteError, Tensor


class LearningRateSchedule(Enum):
    CONSTANT = 'constant'
    COSINE = 'cosine'


class SGD:
    """ v <- momentum * v + (grad + weight_decay * p);  p <- p - lr(t) * v

    The cosine schedule decays the learning rate from its initial value to 0 over total_steps.
    Parameters without a gradient in a step are left untouched.
    """

    def __init__(self, params: Mapping[str, Tensor], learning_rate: float,
                 momentum: Optional[float] = 0.9, weight_decay: Optional[float] = 0.0,
                 schedule: Optional[Union[str, LearningRateSchedule]] = LearningRateSchedule.CONSTANT,
                 total_steps: Optional[int] = 1) -> None:
        if learning_rate <= 0:
            raise ValueError('learning_rate must be > 0')
        if not 0 <= momentum <= 1:
            raise ValueError('momentum must lie in [0, 1]')
        if weight_decay < 0:
            raise ValueError('weight_decay must be >= 0')
        self._params = dict(params)
        self._velocity = {name: np.zeros(p.shape) for name, p in self._params.items()}
        self.learning_rate = float(learning_rate)
        self.momentum = float(momentum)
        self.weight_decay = float(weight_decay)
        self.schedule = LearningRateSchedule(schedule)
        self.total_steps = max(int(total_steps), 1)
        self.step_count = 0

    @property
    def params(self) -> Mapping[str, Tensor]:
        return self._params

    def current_learning_rate(self) -> float:
        if self.schedule is LearningRateSchedule.COSINE:
            progress = min(self.step_count, self.total_steps) / self.total_steps
            return 0.5 * self.learning_rate * (1 + math.cos(math.pi * progress))
        return self.learning_rate

    def zero_grad(self) -> None:
        for param in self._params.values():
            param.zero_grad()

    def step(self) -> None:
        lr = self.current_learning_rate()
        for name, param in self._params.items():
            if param.grad is None:
                continue
            velocity = self._velocity[name]
            velocity *= self.momentum
            velocity += param.grad + self.weight_decay * param.data
            updated = param.data - lr * velocity
            if not np.isfinite(updated).all():
                raise NonFiniteError(f'Parameter "{name}" became non-finite')
            param.data = updated
        self.step_count += 1
