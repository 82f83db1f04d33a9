# -*- coding: utf-8 -*-

"""
This file contains unit tests for the incremental per-category feature statistics.

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
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from lcreg.isda import RunningStats, batch_observation, observe_iteration, update_stats
from lcreg.numerics import NotPSDError, Rng, ShapeError, Tensor

_finite = st.floats(min_value=-100, max_value=100, allow_nan=False, allow_infinity=False)


def _merge_in_chunks(rows, chunk_sizes, diagonal=False):
    stats = RunningStats(1, rows.shape[1], diagonal=diagonal)
    start = 0
    for size in chunk_sizes:
        mean, cov, count = batch_observation(rows[start:start + size], diagonal=diagonal)
        stats.update(0, mean, cov, count)
        start += size
    return stats


class TestRunningStats(unittest.TestCase):

    def setUp(self):
        self.rows = Rng(0).normal((60, 3)) * [1.0, 2.0, 0.5] + [1.0, -1.0, 3.0]

    def test_empty(self):
        stats = RunningStats(4, 3)
        np.testing.assert_array_equal(stats.counts, np.zeros(4))
        np.testing.assert_array_equal(stats.means, np.zeros((4, 3)))
        np.testing.assert_array_equal(stats.covariances, np.zeros((4, 3, 3)))

    def test_first_update_takes_observation(self):
        stats = RunningStats(2, 2)
        cov = np.array([[2.0, 0.5], [0.5, 1.0]])
        update_stats(stats, 1, [3.0, -1.0], cov, 5)
        np.testing.assert_array_equal(stats.means[1], [3.0, -1.0])
        np.testing.assert_allclose(stats.covariances[1], cov, atol=1e-15)
        self.assertEqual(stats.counts.tolist(), [0, 5])

    def test_incremental_equals_batch(self):
        stats = _merge_in_chunks(self.rows, [7, 1, 20, 32])
        np.testing.assert_allclose(stats.means[0], self.rows.mean(axis=0), rtol=1e-9, atol=1e-12)
        np.testing.assert_allclose(stats.covariances[0], np.cov(self.rows.T, bias=True),
                                   rtol=1e-9, atol=1e-12)
        self.assertEqual(stats.counts[0], 60)

    def test_random_update_sequences(self):
        rng = Rng(21)
        for sequence in range(50):
            dim = 3
            stats = RunningStats(1, dim)
            counts, means, covariances = list(), list(), list()
            for _ in range(int(rng.integers(1, 8))):
                count = int(rng.integers(1, 20))
                factor = rng.normal((dim, dim))
                counts.append(count)
                means.append(rng.normal(dim))
                covariances.append(factor @ factor.T)
                stats.update(0, means[-1], covariances[-1], count)
            weights = np.array(counts, dtype=float) / sum(counts)
            mean = np.einsum('k,kd->d', weights, means)
            spread = [cov + np.outer(mu - mean, mu - mean) for mu, cov in zip(means, covariances)]
            covariance = np.einsum('k,kde->de', weights, spread)
            np.testing.assert_allclose(stats.means[0], mean, rtol=0, atol=1e-8,
                                       err_msg=f'sequence {sequence:d}')
            np.testing.assert_allclose(stats.covariances[0], covariance, rtol=0, atol=1e-8,
                                       err_msg=f'sequence {sequence:d}')

    def test_diagonal_mode(self):
        stats = _merge_in_chunks(self.rows, [30, 30], diagonal=True)
        self.assertEqual(stats.covariances.shape, (1, 3))
        np.testing.assert_allclose(stats.covariances[0], self.rows.var(axis=0), rtol=1e-9)
        np.testing.assert_allclose(stats.covariance(0), np.diag(self.rows.var(axis=0)), rtol=1e-9)

    def test_symmetry(self):
        stats = _merge_in_chunks(self.rows, [3] * 20)
        np.testing.assert_array_equal(stats.covariances[0], stats.covariances[0].T)

    def test_invalid_observations(self):
        stats = RunningStats(2, 2)
        with self.assertRaises(ValueError):
            stats.update(0, np.zeros(2), np.eye(2), 0)
        with self.assertRaises(IndexError):
            stats.update(2, np.zeros(2), np.eye(2), 1)
        with self.assertRaises(ShapeError):
            stats.update(0, np.zeros(3), np.eye(2), 1)
        with self.assertRaises(NotPSDError):
            stats.update(0, np.zeros(2), np.diag([1.0, -1.0]), 1)

    def test_array_persistence(self):
        stats = _merge_in_chunks(self.rows, [10, 50])
        restored = RunningStats.from_arrays(stats.to_arrays(prefix='stats'), prefix='stats')
        np.testing.assert_array_equal(restored.counts, stats.counts)
        np.testing.assert_array_equal(restored.means, stats.means)
        np.testing.assert_array_equal(restored.covariances, stats.covariances)
        with self.assertRaises(KeyError):
            RunningStats.from_arrays({'stats_mu': np.zeros((1, 3))})


class TestObserveIteration(unittest.TestCase):

    def test_batch_equals_single_observations(self):
        rng = Rng(3)
        batched = RunningStats(4, 3)
        single = RunningStats(4, 3)
        for _ in range(5):
            latents = rng.normal((4, 3))
            observe_iteration(batched, latents, 128)
            for _ in range(128):
                observe_iteration(single, Tensor(latents), 1)
        np.testing.assert_array_equal(batched.counts, single.counts)
        np.testing.assert_allclose(batched.means, single.means, rtol=1e-9, atol=1e-12)
        np.testing.assert_allclose(batched.covariances, single.covariances, rtol=1e-7, atol=1e-10)

    def test_constant_latents_have_zero_covariance(self):
        stats = RunningStats(2, 2)
        latents = np.array([[1.0, 2.0], [-1.0, 0.5]])
        for step in range(3):
            observe_iteration(stats, latents, 16, step=step)
        np.testing.assert_allclose(stats.means, latents, atol=1e-15)
        np.testing.assert_allclose(stats.covariances, np.zeros((2, 2, 2)), atol=1e-15)

    def test_shape_mismatch(self):
        with self.assertRaises(ShapeError):
            observe_iteration(RunningStats(2, 2), np.zeros((3, 2)), 4)


class TestStatsProperties(unittest.TestCase):

    @settings(max_examples=50, deadline=None)
    @given(arrays(np.float64, st.tuples(st.integers(2, 40), st.integers(1, 4)), elements=_finite),
           st.data())
    def test_chunked_merge_matches_batch(self, rows, data):
        split = data.draw(st.integers(1, rows.shape[0] - 1))
        stats = _merge_in_chunks(rows, [split, rows.shape[0] - split])
        scale = 1.0 + np.abs(rows).max() ** 2
        np.testing.assert_allclose(stats.means[0], rows.mean(axis=0), atol=1e-9 * scale)
        np.testing.assert_allclose(stats.covariances[0], np.cov(rows.T, bias=True).reshape(
            rows.shape[1], rows.shape[1]), atol=1e-9 * scale)
        eigenvalues = np.linalg.eigvalsh(stats.covariances[0])
        self.assertGreaterEqual(eigenvalues.min(), -1e-9 * scale)
