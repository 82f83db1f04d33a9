# -*- coding: utf-8 -*-

"""
Long-tailed dataset construction, persistence and resampling.

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

__all__ = ['ClassBalancedSampler', 'DatasetError', 'EmptyClassError', 'ImbalanceProfile',
           'InstanceSampler', 'LabelRangeError', 'LongTailDataset', 'LongTailSpec',
           'MalformedLabelsError', 'MissingFileError', 'NoSamplesError', 'PartBank',
           'ShapeMismatchError', 'balanced_test_spec', 'class_counts', 'load_dataset',
           'resample_class_balanced', 'save_dataset', 'split_classes', 'synth_dataset',
           'synth_train_test']

from .spec import ImbalanceProfile, LongTailSpec, balanced_test_spec, class_counts, split_classes
from .dataset import DatasetError, EmptyClassError, LabelRangeError, LongTailDataset
from .dataset import MalformedLabelsError, MissingFileError, NoSamplesError, ShapeMismatchError
from .synthetic import PartBank, synth_dataset, synth_train_test
from .sampling import ClassBalancedSampler, InstanceSampler, resample_class_balanced
from .storage import load_dataset, save_dataset
