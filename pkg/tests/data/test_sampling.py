# -*- coding: utf-8 -*-

"""
This file contains unit tests for instance-uniform and class-balanced sampling.

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

import unittest
import numpy as np

from lcreg.data import ClassBalancedSampler, EmptyClassError, InstanceSampler, LongTailDataset
from lcreg.data import LongTailSpec, resample_class_balanced
from lcreg.numerics import Rng


def _dataset(counts):
    labels = np.repeat(np.arange(len(counts)), counts)
    images = np.zeros((labels.size, 1, 2, 2))
    return LongTailDataset(images, labels, LongTailSpec(len(counts), max(max(counts), 1), 1))


class TestInstanceSampler(unittest.TestCase):

    def test_epoch_is_permutation(self):
        sampler = InstanceSampler(10, 4, Rng(0))
        self.assertEqual(sampler.batches_per_epoch, 3)
        batches = sampler.epoch()
        self.assertEqual([len(b) for b in batches], [4, 4, 2])
        self.assertEqual(sorted(np.concatenate(batches).tolist()), list(range(10)))

    def test_epochs_differ(self):
        sampler = InstanceSampler(50, 50, Rng(1))
        self.assertFalse(np.array_equal(sampler.epoch()[0], sampler.epoch()[0]))

    def test_invalid(self):
        with self.assertRaises(ValueError):
            InstanceSampler(0, 4, Rng(0))
        with self.assertRaises(ValueError):
            InstanceSampler(4, 0, Rng(0))


class TestClassBalancedSampler(unittest.TestCase):

    def test_extreme_imbalance(self):
        ds = _dataset([999, 1])
        draws = resample_class_balanced(ds, Rng(2024)).draw(100000)
        frequency = np.mean(ds.labels[draws] == 1)
        self.assertAlmostEqual(frequency, 0.5, delta=0.01)

    def test_balanced_input(self):
        ds = _dataset([30, 30, 30])
        draws = resample_class_balanced(ds, Rng(5)).draw(60000)
        class_freq = np.bincount(ds.labels[draws], minlength=3) / draws.size
        np.testing.assert_allclose(class_freq, [1 / 3] * 3, atol=0.01)
        sample_freq = np.bincount(draws, minlength=90) / draws.size
        np.testing.assert_allclose(sample_freq, np.full(90, 1 / 90), atol=0.003)

    def test_single_class(self):
        ds = _dataset([7])
        sampler = resample_class_balanced(ds, Rng(0))
        self.assertTrue(np.all(ds.labels[sampler.draw(100)] == 0))
        self.assertEqual(ds.labels[next(iter(sampler))], 0)

    def test_empty_class(self):
        labels = np.array([0, 0, 2])
        ds = LongTailDataset(np.zeros((3, 1, 2, 2)), labels, LongTailSpec(3, 2, 1))
        with self.assertRaises(EmptyClassError) as ctx:
            ClassBalancedSampler(ds, Rng(0))
        self.assertEqual(ctx.exception.code, 'empty_class')

    def test_batches(self):
        sampler = resample_class_balanced(_dataset([5, 3]), Rng(0))
        batches = sampler.batches(10, 4)
        self.assertEqual([len(b) for b in batches], [4, 4, 2])

    def test_reproducible(self):
        ds = _dataset([20, 5, 1])
        np.testing.assert_array_equal(resample_class_balanced(ds, Rng(8)).draw(50),
                                      resample_class_balanced(ds, Rng(8)).draw(50))
