# -*- coding: utf-8 -*-

"""
Training, evaluation, ablation and diagnostics of the latent category network.

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

__all__ = ['ABLATION_ARMS', 'DivergenceError', 'GRADCHECK_TOLERANCE', 'GradcheckReport',
           'LearningRateSchedule', 'LossTerms', 'METRICS_FILENAME', 'MetricsReport', 'SGD',
           'TrainingResult', 'combined_loss', 'evaluate', 'export_histogram', 'gradcheck_suite',
           'latent_count_sweep', 'run_ablation', 'train_stage1', 'train_stage2']

from .optimizer import LearningRateSchedule, SGD
from .losses import LossTerms, combined_loss
from .evaluation import MetricsReport, evaluate
from .trainer import DivergenceError, METRICS_FILENAME, TrainingResult, train_stage1, train_stage2
from .histogram import export_histogram
from .ablation import ABLATION_ARMS, latent_count_sweep, run_ablation
from .gradcheck_suite import GRADCHECK_TOLERANCE, GradcheckReport, gradcheck_suite
