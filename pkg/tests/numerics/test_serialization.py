# -*- coding: utf-8 -*-

"""
This file contains unit tests for the LCT1 tensor file format.

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

import os
import struct
import tempfile
import unittest
import numpy as np

from lcreg.numerics import Tensor, TensorFormatError, load_tensor, save_tensor
from lcreg.numerics.serialization import decode_array, encode_array


class TestTensorFormat(unittest.TestCase):

    def test_layout(self):
        buffer = encode_array(np.array([[1.0, 2.0, 3.0]]))
        expected = b'LCT1' + struct.pack('<I', 2) + struct.pack('<QQ', 1, 3)
        expected += struct.pack('<ddd', 1.0, 2.0, 3.0)
        self.assertEqual(buffer, expected)

    def test_scalar(self):
        buffer = encode_array(np.array(2.5))
        self.assertEqual(len(buffer), 8 + 8)
        self.assertEqual(decode_array(buffer).shape, ())
        self.assertEqual(float(decode_array(buffer)), 2.5)

    def test_scalar_tensor_file(self):
        with tempfile.TemporaryDirectory() as tmp_dir:
            path = os.path.join(tmp_dir, 'scalar.lct')
            save_tensor(path, Tensor(-0.75))
            self.assertEqual(os.path.getsize(path), 16)
            loaded = load_tensor(path)
        self.assertEqual(loaded.shape, ())
        self.assertEqual(loaded.item(), -0.75)

    def test_bad_magic(self):
        with self.assertRaises(TensorFormatError):
            decode_array(b'NOPE' + bytes(12))

    def test_truncated(self):
        buffer = encode_array(np.ones((2, 2)))
        with self.assertRaises(TensorFormatError):
            decode_array(buffer[:-1])
        with self.assertRaises(TensorFormatError):
            decode_array(buffer[:10])

    def test_file_bit_exact(self):
        values = np.random.default_rng(0).normal(size=(3, 4, 5))
        with tempfile.TemporaryDirectory() as tmp_dir:
            path = os.path.join(tmp_dir, 'sub', 'x.lct')
            save_tensor(path, Tensor(values))
            loaded = load_tensor(path)
        self.assertEqual(loaded.data.tobytes(), values.tobytes())
        self.assertEqual(loaded.shape, (3, 4, 5))
