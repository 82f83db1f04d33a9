# -*- coding: utf-8 -*-

"""
Binary tensor file format ("LCT1").

Layout: 4 byte magic b"LCT1", little-endian u32 rank, rank little-endian u64 dimensions, followed
by the row-major little-endian float64 payload.

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

__all__ = ['MAGIC', 'TensorFormatError', 'decode_array', 'encode_array', 'load_array', 'load_tensor',
           'save_tensor']

import os
import numpy as np
from typing import Union

from lcreg.numerics.tensor import NumericsError, Tensor

MAGIC = b'LCT1'

_FilePath = Union[str, bytes, os.PathLike]


class TensorFormatError(NumericsError, ValueError):
    """ Raised for truncated or foreign tensor files """
    pass


def encode_array(data: Union[Tensor, np.ndarray]) -> bytes:
    array = np.require(data.data if isinstance(data, Tensor) else data, dtype='<f8',
                       requirements='C')
    header = MAGIC + np.array([array.ndim], dtype='<u4').tobytes()
    header += np.array(array.shape, dtype='<u8').tobytes()
    return header + array.tobytes(order='C')


def decode_array(buffer: bytes) -> np.ndarray:
    if len(buffer) < 8 or buffer[:4] != MAGIC:
        raise TensorFormatError('Not an LCT1 tensor file (bad magic)')
    rank = int(np.frombuffer(buffer, dtype='<u4', count=1, offset=4)[0])
    payload_offset = 8 + 8 * rank
    if len(buffer) < payload_offset:
        raise TensorFormatError('Truncated LCT1 header')
    shape = tuple(int(d) for d in np.frombuffer(buffer, dtype='<u8', count=rank, offset=8))
    count = int(np.prod(shape, dtype=np.int64)) if rank else 1
    if len(buffer) != payload_offset + 8 * count:
        raise TensorFormatError(f'LCT1 payload size does not match shape {shape}')
    data = np.frombuffer(buffer, dtype='<f8', count=count, offset=payload_offset)
    return data.astype(np.float64).reshape(shape)


def save_tensor(file_path: _FilePath, data: Union[Tensor, np.ndarray]) -> None:
    """ Write a tensor (or plain array) to file_path in LCT1 format. Creates parent directories. """
    file_dir = os.path.dirname(file_path)
    if file_dir:
        os.makedirs(file_dir, exist_ok=True)
    with open(file_path, 'wb') as file:
        file.write(encode_array(data))


def load_array(file_path: _FilePath) -> np.ndarray:
    with open(file_path, 'rb') as file:
        return decode_array(file.read())


def load_tensor(file_path: _FilePath) -> Tensor:
    return Tensor(load_array(file_path))
