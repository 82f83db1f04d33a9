# -*- coding: utf-8 -*-

"""
This file contains unit tests for the augmentation strength schedule and the implicit augmentation
losses.

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
from scipy.special import logsumexp

from lcreg.isda import AugSchedule, RunningStats, implicit_aug_loss, lambda_at, latent_aug_loss
from lcreg.isda import sample_augmented
from lcreg.model import LatentPool
from lcreg.numerics import Rng, ShapeError, Tensor
from lcreg.numerics.functional import cross_entropy_logits


class TestAugSchedule(unittest.TestCase):

    def test_linear_ramp(self):
        schedule = AugSchedule(0.5, 1000)
        self.assertEqual(lambda_at(schedule, 0), 0.0)
        self.assertAlmostEqual(lambda_at(schedule, 500), 0.25, places=15)
        self.assertAlmostEqual(schedule(1000), 0.5, places=15)

    def test_clamped_beyond_end(self):
        schedule = AugSchedule(0.5, 10)
        with self.assertLogs('lcreg.isda.schedule', level='WARNING'):
            self.assertEqual(lambda_at(schedule, 25), 0.5)

    def test_invalid(self):
        with self.assertRaises(ValueError):
            lambda_at(AugSchedule(0.5, 10), -1)
        with self.assertRaises(ValueError):
            AugSchedule(-0.1, 10)
        with self.assertRaises(ValueError):
            AugSchedule(0.5, 0)


class TestImplicitAugLoss(unittest.TestCase):

    def setUp(self):
        rng = Rng(5)
        self.features = Tensor(rng.normal((6, 3)))
        self.labels = np.array([0, 1, 2, 3, 0, 1])
        self.weight = Tensor(rng.normal((4, 3)))
        self.bias = Tensor(0.1 * rng.normal(4))
        factors = rng.normal((4, 3, 3))
        self.covariances = factors @ np.swapaxes(factors, 1, 2) / 3

    def _plain(self):
        logits = self.features @ self.weight.T + self.bias
        return cross_entropy_logits(logits, self.labels).mean().item()

    def test_zero_strength_is_cross_entropy(self):
        loss = implicit_aug_loss(self.features, self.labels, self.weight, self.bias,
                                 self.covariances, 0.0).item()
        self.assertAlmostEqual(loss, self._plain(), places=12)

    def test_zero_covariance_is_cross_entropy(self):
        loss = implicit_aug_loss(self.features, self.labels, self.weight, self.bias,
                                 np.zeros((4, 3, 3)), 0.8).item()
        self.assertAlmostEqual(loss, self._plain(), places=12)

    def test_monotone_in_strength(self):
        rng = Rng(11)
        for instance in range(100):
            factors = rng.normal((4, 3, 3))
            covariances = factors @ np.swapaxes(factors, 1, 2) / 3
            values = [implicit_aug_loss(self.features, self.labels, self.weight, self.bias,
                                        covariances, lam).item() for lam in (0.0, 0.1, 0.5, 1.0)]
            self.assertTrue(all(a <= b for a, b in zip(values[:-1], values[1:])),
                            msg=f'instance {instance:d}: {values}')

    def test_diagonal_covariances(self):
        variances = np.abs(Rng(6).normal((4, 3)))
        full = implicit_aug_loss(self.features, self.labels, self.weight, self.bias,
                                 np.stack([np.diag(v) for v in variances]), 0.7).item()
        diagonal = implicit_aug_loss(self.features, self.labels, self.weight, self.bias,
                                     variances, 0.7).item()
        self.assertAlmostEqual(full, diagonal, places=12)

    def test_invalid_arguments(self):
        with self.assertRaises(ValueError):
            implicit_aug_loss(self.features, self.labels, self.weight, self.bias,
                              self.covariances, -0.1)
        with self.assertRaises(IndexError):
            implicit_aug_loss(self.features, [0, 1, 2, 4, 0, 1], self.weight, self.bias,
                              self.covariances, 0.5)
        with self.assertRaises(ShapeError):
            implicit_aug_loss(self.features, self.labels, self.weight, self.bias,
                              np.zeros((3, 3, 3)), 0.5)

    def test_gradient_flows_to_features_and_head(self):
        features = Tensor(self.features.data, requires_grad=True)
        weight = Tensor(self.weight.data, requires_grad=True)
        implicit_aug_loss(features, self.labels, weight, self.bias, self.covariances, 0.5).backward()
        self.assertEqual(features.grad.shape, (6, 3))
        self.assertTrue(np.any(weight.grad != 0))


class TestAugLossUpperBound(unittest.TestCase):
    """ The closed-form loss bounds the expected cross-entropy over explicit augmentations """

    def test_bounds_sampled_loss(self):
        draws = 100000
        rng = Rng(7)
        pool = LatentPool(3, 4, rng.spawn(0), init_std=1.0)
        stats = RunningStats(3, 4)
        factors = rng.normal((3, 4, 4))
        for category, factor in enumerate(factors):
            stats.update(category, np.zeros(4), factor @ factor.T / 4, 10)
        for lam in (0.1, 0.5, 1.0):
            bound = latent_aug_loss(pool, stats, lam).item()
            per_category = list()
            for category in range(3):
                samples = sample_augmented(pool, stats, category, lam, rng.spawn(1, category),
                                           size=draws)
                logits = samples @ pool.head_weight.data.T + pool.head_bias.data
                per_category.append(-(logits[:, category] - logsumexp(logits, axis=1)))
            losses = np.mean(per_category, axis=0)
            standard_error = losses.std(ddof=1) / np.sqrt(draws)
            self.assertGreaterEqual(bound, losses.mean() - 3 * standard_error, msg=f'lambda={lam}')


class TestLatentAugLoss(unittest.TestCase):

    def setUp(self):
        self.pool = LatentPool(3, 2, Rng(0), init_std=1.0)
        self.stats = RunningStats(3, 2)

    def test_matches_implicit_loss(self):
        self.stats.update(1, np.zeros(2), np.eye(2), 4)
        expected = implicit_aug_loss(self.pool.latents, np.arange(3), self.pool.head_weight,
                                     self.pool.head_bias, self.stats.covariances, 0.3).item()
        self.assertAlmostEqual(latent_aug_loss(self.pool, self.stats, 0.3).item(), expected,
                               places=14)

    def test_mismatched_stats(self):
        with self.assertRaises(ShapeError):
            latent_aug_loss(self.pool, RunningStats(4, 2), 0.3)

    def test_sample_augmented(self):
        self.stats.update(2, np.zeros(2), np.diag([4.0, 0.25]), 10)
        draws = sample_augmented(self.pool, self.stats, 2, 0.5, Rng(1), size=50000)
        self.assertEqual(draws.shape, (50000, 2))
        np.testing.assert_allclose(draws.mean(axis=0), self.pool.latents.data[2], atol=0.03)
        np.testing.assert_allclose(draws.var(axis=0), [2.0, 0.125], rtol=0.05)
        np.testing.assert_array_equal(
            sample_augmented(self.pool, self.stats, 2, 0.0, Rng(1)), self.pool.latents.data[2])
