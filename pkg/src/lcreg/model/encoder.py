# -*- coding: utf-8 -*-

"""
Small patch encoder producing the feature maps the latent pool attends to.

Images (B, C_in, H, W) are cut into non-overlapping p x p patches which are flattened into
channels (B, C_in*p*p, H/p * W/p). A stack of 1x1 layers (ReLU between layers, linear output) maps
them to D feature channels.

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

__all__ = ['PatchEncoder', 'patchify']

import numpy as np
from typing import Dict, Optional, Sequence, Tuple

from lcreg.numerics import Rng, ShapeError, Tensor
from lcreg.numerics.functional import relu


def patchify(images: Tensor, patch_size: int) -> Tensor:
    """ (B, C, H, W) -> (B, C*p*p, (H/p)*(W/p)), channel-major within each patch """
    if images.ndim != 4:
        raise ShapeError(f'Expected images of shape (B, C, H, W), got {images.shape}')
    batch, channels, height, width = images.shape
    p = patch_size
    if height % p or width % p:
        raise ShapeError(f'Image size {height:d}x{width:d} is not divisible by patch size {p:d}')
    rows, cols = height // p, width // p
    patches = images.reshape(batch, channels, rows, p, cols, p).transpose(0, 1, 3, 5, 2, 4)
    return patches.reshape(batch, channels * p * p, rows * cols)


class PatchEncoder:
    """ Patchify followed by 1x1 layers. Output feature maps are (B, D, HW) with HW = (H/p)*(W/p).
    """

    def __init__(self, input_shape: Sequence[int], feature_dim: int, rng: Rng,
                 patch_size: Optional[int] = 2, hidden_dims: Optional[Sequence[int]] = (32,)) -> None:
        channels, height, width = (int(v) for v in input_shape)
        if height % patch_size or width % patch_size:
            raise ShapeError(f'Input size {height:d}x{width:d} is not divisible by patch size '
                             f'{patch_size:d}')
        self.input_shape = (channels, height, width)
        self.patch_size = int(patch_size)
        self.feature_dim = int(feature_dim)
        self.hidden_dims = tuple(int(d) for d in hidden_dims)
        dims = (channels * patch_size * patch_size,) + self.hidden_dims + (self.feature_dim,)
        self.weights = list()
        self.biases = list()
        for index, (fan_in, fan_out) in enumerate(zip(dims[:-1], dims[1:])):
            scale = np.sqrt(2.0 / fan_in)
            self.weights.append(Tensor(scale * rng.normal((fan_out, fan_in)), requires_grad=True,
                                       name=f'encoder.layer{index:d}.weight'))
            self.biases.append(Tensor(np.zeros(fan_out), requires_grad=True,
                                      name=f'encoder.layer{index:d}.bias'))

    @property
    def spatial_shape(self) -> Tuple[int, int]:
        _, height, width = self.input_shape
        return height // self.patch_size, width // self.patch_size

    def parameters(self) -> Dict[str, Tensor]:
        params = dict()
        for weight, bias in zip(self.weights, self.biases):
            params[weight.name] = weight
            params[bias.name] = bias
        return params

    def __call__(self, images: Tensor) -> Tensor:
        if tuple(images.shape[1:]) != self.input_shape:
            raise ShapeError(f'Encoder expects inputs of shape (B,) + {self.input_shape}, got '
                             f'{images.shape}')
        x = patchify(images, self.patch_size)
        last = len(self.weights) - 1
        for index, (weight, bias) in enumerate(zip(self.weights, self.biases)):
            x = weight @ x + bias.reshape(-1, 1)
            if index < last:
                x = relu(x)
        return x
