# -*- coding: utf-8 -*-

"""
This file contains unit tests for the numerically stable activation and loss functions.

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

import math
import unittest
import numpy as np

from lcreg.numerics import NonFiniteError, Tensor, cross_entropy_logits, sigmoid, softmax
from lcreg.numerics.functional import concat, log_softmax, logsumexp


class TestSoftmax(unittest.TestCase):

    def test_uniform(self):
        np.testing.assert_allclose(softmax(Tensor([0.0, 0.0, 0.0])).data, [1 / 3] * 3, atol=1e-15)

    def test_no_overflow(self):
        out = softmax(Tensor([1000.0, 0.0])).data
        self.assertTrue(np.isfinite(out).all())
        self.assertAlmostEqual(out[0], 1.0, places=15)
        self.assertAlmostEqual(out[1], 0.0, places=15)

    def test_reference_values(self):
        out = softmax(Tensor([1.0, 2.0, 3.0])).data
        np.testing.assert_allclose(out, [0.09003057, 0.24472847, 0.66524096], atol=1e-8)

    def test_axis(self):
        x = np.random.default_rng(3).normal(size=(2, 5, 3))
        out = softmax(Tensor(x), axis=1).data
        np.testing.assert_allclose(out.sum(axis=1), np.ones((2, 3)), atol=1e-12)

    def test_non_finite(self):
        with self.assertRaises(NonFiniteError):
            softmax(np.array([np.nan, 0.0]))

    def test_log_softmax_matches(self):
        x = Tensor([0.5, -1.0, 2.0])
        np.testing.assert_allclose(np.exp(log_softmax(x).data), softmax(x).data, atol=1e-14)
        self.assertAlmostEqual(logsumexp(x).item(), math.log(sum(math.exp(v) for v in x.data)),
                               places=12)


class TestSigmoid(unittest.TestCase):

    def test_values(self):
        self.assertEqual(sigmoid(Tensor(0.0)).item(), 0.5)
        self.assertAlmostEqual(sigmoid(Tensor(2.0)).item(), 0.8807970779778823, places=12)

    def test_symmetry(self):
        x = np.linspace(-30, 30, 61)
        np.testing.assert_allclose(sigmoid(Tensor(x)).data + sigmoid(Tensor(-x)).data,
                                   np.ones_like(x), atol=1e-15)

    def test_extreme_inputs(self):
        out = sigmoid(Tensor([-1000.0, 1000.0])).data
        self.assertTrue(np.isfinite(out).all())
        self.assertEqual(out[1], 1.0)


class TestCrossEntropy(unittest.TestCase):

    def test_equal_logits(self):
        for k in (2, 5, 17):
            loss = cross_entropy_logits(Tensor(np.full(k, 0.3)), 1)
            self.assertAlmostEqual(loss.item(), math.log(k), places=12)

    def test_dominant_logit(self):
        loss = cross_entropy_logits(Tensor([50.0, 0.0, 0.0]), 0).item()
        self.assertGreaterEqual(loss, 0.0)
        self.assertLess(loss, 1e-20)

    def test_closed_form(self):
        loss = cross_entropy_logits(Tensor([1.0, 0.0]), 0).item()
        self.assertAlmostEqual(loss, math.log(1 + math.exp(-1)), places=14)
        self.assertAlmostEqual(loss, 0.313262, places=6)

    def test_batch_rows(self):
        logits = Tensor([[1.0, 0.0], [0.0, 1.0], [2.0, 2.0]])
        losses = cross_entropy_logits(logits, np.array([0, 0, 1])).data
        np.testing.assert_allclose(losses, [math.log(1 + math.exp(-1)),
                                            math.log(1 + math.exp(1)),
                                            math.log(2)], atol=1e-14)

    def test_gradient(self):
        logits = Tensor([1.0, 0.0], requires_grad=True)
        cross_entropy_logits(logits, 0).backward()
        s = 1 / (1 + math.e)
        np.testing.assert_allclose(logits.grad, [-s, s], atol=1e-15)

    def test_target_out_of_range(self):
        with self.assertRaises(IndexError):
            cross_entropy_logits(Tensor([1.0, 0.0]), 2)
        with self.assertRaises(IndexError):
            cross_entropy_logits(Tensor([[1.0, 0.0]]), np.array([-1]))


class TestConcat(unittest.TestCase):

    def test_concat_gradient(self):
        a = Tensor(np.ones((2, 1)), requires_grad=True)
        b = Tensor(np.ones((2, 3)), requires_grad=True)
        out = concat([a, b], axis=1)
        self.assertEqual(out.shape, (2, 4))
        (out * Tensor([1.0, 2.0, 3.0, 4.0])).sum().backward()
        np.testing.assert_array_equal(a.grad, [[1.0], [1.0]])
        np.testing.assert_array_equal(b.grad, [[2.0, 3.0, 4.0]] * 2)
