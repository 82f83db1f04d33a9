# -*- coding: utf-8 -*-

"""
This file contains unit tests for the reverse-mode autodiff Tensor.

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

from lcreg.numerics import NonFiniteError, NumericsError, ShapeError, Tensor, no_grad
from lcreg.numerics.functional import dot


class TestTensorBackward(unittest.TestCase):

    def setUp(self):
        self.rng = np.random.default_rng(1234)

    def test_sum_gradient(self):
        x = Tensor(self.rng.normal(size=(3, 4)), requires_grad=True)
        x.sum().backward()
        np.testing.assert_array_equal(x.grad, np.ones((3, 4)))

    def test_dot_gradient(self):
        x_val, y_val = self.rng.normal(size=5), self.rng.normal(size=5)
        x = Tensor(x_val, requires_grad=True)
        y = Tensor(y_val, requires_grad=True)
        dot(x, y).backward()
        np.testing.assert_allclose(x.grad, y_val, rtol=0, atol=1e-15)
        np.testing.assert_allclose(y.grad, x_val, rtol=0, atol=1e-15)

    def test_non_scalar_backward(self):
        x = Tensor(np.ones(3), requires_grad=True)
        with self.assertRaises(ShapeError):
            (2 * x).backward()

    def test_backward_without_grad_leaves(self):
        with self.assertRaises(NumericsError):
            Tensor(np.ones(3)).sum().backward()

    def test_broadcast_add(self):
        x = Tensor(self.rng.normal(size=(2, 3)), requires_grad=True)
        b = Tensor(self.rng.normal(size=3), requires_grad=True)
        (x + b).sum().backward()
        np.testing.assert_array_equal(b.grad, [2.0, 2.0, 2.0])
        np.testing.assert_array_equal(x.grad, np.ones((2, 3)))

    def test_matmul(self):
        a_val, b_val = self.rng.normal(size=(2, 3)), self.rng.normal(size=(3, 4))
        a = Tensor(a_val, requires_grad=True)
        b = Tensor(b_val, requires_grad=True)
        out = a @ b
        np.testing.assert_allclose(out.data, a_val @ b_val, rtol=0, atol=1e-12)
        out.sum().backward()
        np.testing.assert_allclose(a.grad, np.ones((2, 4)) @ b_val.T, rtol=0, atol=1e-12)
        np.testing.assert_allclose(b.grad, a_val.T @ np.ones((2, 4)), rtol=0, atol=1e-12)

    def test_batched_matmul_broadcast(self):
        w_val = self.rng.normal(size=(4, 3))
        x_val = self.rng.normal(size=(5, 3, 2))
        w = Tensor(w_val, requires_grad=True)
        x = Tensor(x_val, requires_grad=True)
        (w @ x).sum().backward()
        expected = sum(np.ones((4, 2)) @ x_val[i].T for i in range(5))
        np.testing.assert_allclose(w.grad, expected, rtol=0, atol=1e-12)
        self.assertEqual(x.grad.shape, (5, 3, 2))

    def test_repeated_index(self):
        x = Tensor([1.0, 2.0, 3.0], requires_grad=True)
        x[[0, 0, 1]].sum().backward()
        np.testing.assert_array_equal(x.grad, [2.0, 1.0, 0.0])

    def test_gradient_accumulates(self):
        x = Tensor([1.0, -2.0], requires_grad=True)
        (x * x).sum().backward()
        (x * x).sum().backward()
        np.testing.assert_array_equal(x.grad, [4.0, -8.0])
        x.zero_grad()
        self.assertIsNone(x.grad)

    def test_shared_subexpression(self):
        x = Tensor([3.0], requires_grad=True)
        y = x * 2
        (y * y + y).sum().backward()
        # d/dx (4x^2 + 2x) = 8x + 2
        np.testing.assert_allclose(x.grad, [26.0])

    def test_reshape_transpose_mean(self):
        x_val = self.rng.normal(size=(2, 3, 4))
        x = Tensor(x_val, requires_grad=True)
        out = x.reshape(6, -1).T.mean(axis=1)
        self.assertEqual(out.shape, (4,))
        out.sum().backward()
        np.testing.assert_allclose(x.grad, np.full((2, 3, 4), 1 / 6))


class TestTensorValues(unittest.TestCase):

    def test_non_finite_construction(self):
        with self.assertRaises(NonFiniteError):
            Tensor([1.0, np.inf])
        with self.assertRaises(NonFiniteError):
            Tensor([np.nan])

    def test_non_finite_result(self):
        with np.errstate(divide='ignore'):
            with self.assertRaises(NonFiniteError):
                Tensor([1.0]) / Tensor([0.0])

    def test_no_grad(self):
        x = Tensor([1.0, 2.0], requires_grad=True)
        with no_grad():
            y = (x * 3).sum()
        self.assertFalse(y.requires_grad)
        self.assertTrue((x * 3).sum().requires_grad)

    def test_item(self):
        self.assertEqual(Tensor([[2.5]]).item(), 2.5)
        with self.assertRaises(ShapeError):
            Tensor([1.0, 2.0]).item()

    def test_detach(self):
        x = Tensor([1.0], requires_grad=True)
        self.assertFalse((x * 2).detach().requires_grad)
