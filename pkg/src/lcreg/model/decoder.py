# -*- coding: utf-8 -*-

"""
Decoder head fusing original and reconstructed feature maps into class logits.

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

__all__ = ['Decoder', 'classify', 'fuse_and_classify', 'fuse_and_pool']

import numpy as np
from typing import Dict, Optional

from lcreg.numerics import Rng, ShapeError, Tensor, as_tensor
from lcreg.numerics.functional import concat, relu


class Decoder:
    """ 1x1 fusion projection (D x 2D weight, D bias) followed by global average pooling and the
    final linear classifier (C x D weight, C bias). Only the classifier is trained in stage 2.
    """

    def __init__(self, feature_dim: int, num_classes: int, rng: Optional[Rng] = None) -> None:
        rng = Rng(0) if rng is None else rng
        scale = np.sqrt(1.0 / feature_dim)
        self.fuse_weight = Tensor(scale * rng.normal((feature_dim, 2 * feature_dim)),
                                  requires_grad=True, name='decoder.fuse_weight')
        self.fuse_bias = Tensor(np.zeros(feature_dim), requires_grad=True, name='decoder.fuse_bias')
        self.cls_weight = Tensor(scale * rng.normal((num_classes, feature_dim)),
                                 requires_grad=True, name='classifier.weight')
        self.cls_bias = Tensor(np.zeros(num_classes), requires_grad=True, name='classifier.bias')

    @property
    def num_classes(self) -> int:
        return self.cls_weight.shape[0]

    def projection_parameters(self) -> Dict[str, Tensor]:
        return {t.name: t for t in (self.fuse_weight, self.fuse_bias)}

    def classifier_parameters(self) -> Dict[str, Tensor]:
        return {t.name: t for t in (self.cls_weight, self.cls_bias)}

    def parameters(self) -> Dict[str, Tensor]:
        params = self.projection_parameters()
        params.update(self.classifier_parameters())
        return params


def fuse_and_pool(features: Tensor, reconstructed: Tensor, decoder: Decoder) -> Tensor:
    """ Concatenate f and f_hat along channels (2D), project back to D channels with ReLU and
    average over all locations.

    @param Tensor features: f, shape (D, H, W) or (B, D, H, W)
    @param Tensor reconstructed: f_hat, same shape as features

    @return Tensor: pooled features (D,) or (B, D)
    """
    features, reconstructed = as_tensor(features), as_tensor(reconstructed)
    if features.shape != reconstructed.shape or features.ndim not in (3, 4):
        raise ShapeError(f'Expected equally shaped (D, H, W) or (B, D, H, W) maps, got '
                         f'{features.shape} and {reconstructed.shape}')
    if features.shape[-3] != decoder.fuse_weight.shape[0]:
        raise ShapeError(f'Decoder expects {decoder.fuse_weight.shape[0]:d} feature channels, got '
                         f'{features.shape[-3]:d}')
    flat_shape = features.shape[:-2] + (-1,)
    fused = concat([features.reshape(flat_shape), reconstructed.reshape(flat_shape)], axis=-2)
    projected = relu(decoder.fuse_weight @ fused + decoder.fuse_bias.reshape(-1, 1))
    return projected.mean(axis=-1)


def classify(pooled: Tensor, decoder: Decoder) -> Tensor:
    """ Final linear classifier: (D,) -> (C,) or (B, D) -> (B, C) """
    pooled = as_tensor(pooled)
    if pooled.ndim == 1:
        return (decoder.cls_weight @ pooled.reshape(-1, 1)).reshape(-1) + decoder.cls_bias
    return pooled @ decoder.cls_weight.T + decoder.cls_bias


def fuse_and_classify(features: Tensor, reconstructed: Tensor, decoder: Decoder) -> Tensor:
    """ Class logits from an original feature map and its latent reconstruction """
    return classify(fuse_and_pool(features, reconstructed, decoder), decoder)
