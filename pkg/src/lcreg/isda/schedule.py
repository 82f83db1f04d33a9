# -*- coding: utf-8 -*-

"""
Linear ramp of the augmentation strength lambda from 0 to lambda0 over the training iterations.

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

__all__ = ['AugSchedule', 'lambda_at']

from lcreg.core.logger import get_logger
from lcreg.util.helpers import in_range

logger = get_logger(__name__)


class AugSchedule:
    """ lambda(t) = (t / T) * lambda0 for iterations 0 <= t <= T """

    def __init__(self, lambda0: float, total_steps: int) -> None:
        if lambda0 < 0:
            raise ValueError('lambda0 must be >= 0')
        if total_steps < 1:
            raise ValueError('Total number of augmentation steps must be >= 1')
        self.lambda0 = float(lambda0)
        self.total_steps = int(total_steps)

    def __repr__(self) -> str:
        return f'{self.__class__.__name__}(lambda0={self.lambda0!r}, total_steps={self.total_steps:d})'

    def __call__(self, step: int) -> float:
        return lambda_at(self, step)


def lambda_at(schedule: AugSchedule, step: int) -> float:
    """ Augmentation strength at iteration step. Steps beyond the schedule are clamped to T with a
    warning. """
    if step < 0:
        raise ValueError(f'Iteration index must be >= 0, received {step}')
    within, clamped = in_range(step, 0, schedule.total_steps)
    if not within:
        logger.warning(f'Iteration {step} exceeds augmentation schedule length '
                       f'{schedule.total_steps:d}. Lambda clamped to {schedule.lambda0:g}.')
    return clamped / schedule.total_steps * schedule.lambda0
