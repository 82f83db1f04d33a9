# -*- coding: utf-8 -*-

"""
Incremental category statistics, the augmentation schedule and implicit augmentation losses.

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

__all__ = ['AugSchedule', 'RunningStats', 'batch_observation', 'implicit_aug_loss', 'lambda_at',
           'latent_aug_loss', 'observe_iteration', 'sample_augmented', 'update_stats']

from .stats import RunningStats, batch_observation, observe_iteration, update_stats
from .schedule import AugSchedule, lambda_at
from .losses import implicit_aug_loss, latent_aug_loss, sample_augmented
