# -*- coding: utf-8 -*-

"""
Shared latent category pool: latent embeddings, similarity maps against image features,
cross-category normalization, feature reconstruction and the reconstruction loss.

Feature maps are accepted for a single image (D, H, W) or stacked (B, D, H, W). Similarity stacks
follow the same convention with M in place of D, so the latent category axis is always axis -3.

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

__all__ = ['LatentPool', 'attention_weights', 'encode_latents', 'normalize_maps', 'recon_loss',
           'reconstruct', 'similarity_maps']

import numpy as np
from typing import Dict, Optional

from lcreg.numerics import Rng, ShapeError, Tensor, as_tensor
from lcreg.numerics.functional import cross_entropy_logits, sigmoid, softmax


class LatentPool:
    """ M learnable latent embeddings f' (M x D), the 1x1 projection (D x D weight, D bias) mapping
    them into feature space and the latent classifier head (M x D weight, M bias).
    """

    def __init__(self, num_latents: int, feature_dim: int, rng: Optional[Rng] = None,
                 init_std: Optional[float] = 0.02) -> None:
        if num_latents < 1 or feature_dim < 1:
            raise ValueError('LatentPool needs num_latents >= 1 and feature_dim >= 1')
        rng = Rng(0) if rng is None else rng
        scale = 1.0 / np.sqrt(feature_dim)
        self.latents = Tensor(init_std * rng.normal((num_latents, feature_dim)),
                              requires_grad=True, name='pool.latents')
        self.proj_weight = Tensor(scale * rng.normal((feature_dim, feature_dim)),
                                  requires_grad=True, name='pool.proj_weight')
        self.proj_bias = Tensor(np.zeros(feature_dim), requires_grad=True, name='pool.proj_bias')
        self.head_weight = Tensor(scale * rng.normal((num_latents, feature_dim)),
                                  requires_grad=True, name='pool.head_weight')
        self.head_bias = Tensor(np.zeros(num_latents), requires_grad=True, name='pool.head_bias')

    @property
    def num_latents(self) -> int:
        return self.latents.shape[0]

    @property
    def feature_dim(self) -> int:
        return self.latents.shape[1]

    def parameters(self) -> Dict[str, Tensor]:
        return {t.name: t for t in (self.latents, self.proj_weight, self.proj_bias,
                                    self.head_weight, self.head_bias)}


def encode_latents(pool: LatentPool) -> Tensor:
    """ E = proj_weight @ f'^T + proj_bias, shape (D, M): column m encodes latent category m """
    return pool.proj_weight @ pool.latents.T + pool.proj_bias.reshape(-1, 1)


def _flatten_spatial(x: Tensor, what: str) -> Tensor:
    if x.ndim not in (3, 4):
        raise ShapeError(f'{what} must be (C, H, W) or (B, C, H, W), got shape {x.shape}')
    return x.reshape(x.shape[:-2] + (x.shape[-2] * x.shape[-1],))


def similarity_maps(encoded: Tensor, features: Tensor) -> Tensor:
    """ S[m, h, w] = sigmoid(E_m . f[:, h, w]).

    @param Tensor encoded: encoded latents E, shape (D, M)
    @param Tensor features: feature map(s), shape (D, H, W) or (B, D, H, W)

    @return Tensor: raw similarity stack, shape (M, H, W) or (B, M, H, W)
    """
    encoded, features = as_tensor(encoded), as_tensor(features)
    if encoded.ndim != 2 or features.ndim not in (3, 4) or encoded.shape[0] != features.shape[-3]:
        raise ShapeError(f'Feature dimension mismatch between encoded latents {encoded.shape} and '
                         f'features {features.shape}')
    flat = _flatten_spatial(features, 'Features')
    maps = sigmoid(encoded.T @ flat)
    return maps.reshape(maps.shape[:-1] + features.shape[-2:])


def normalize_maps(maps: Tensor) -> Tensor:
    """ Softmax over the latent category axis (-3) at every spatial location, applied to the
    sigmoid similarities themselves """
    maps = as_tensor(maps)
    if maps.ndim not in (3, 4):
        raise ShapeError(f'Similarity maps must be (M, H, W) or (B, M, H, W), got {maps.shape}')
    return softmax(maps, axis=-3)


def reconstruct(encoded: Tensor, normalized: Tensor) -> Tensor:
    """ f_hat[:, h, w] = sum_m E_m * S_hat[m, h, w], a per-location convex combination of encoded
    latents. Returns (D, H, W) or (B, D, H, W) following the layout of normalized. """
    encoded, normalized = as_tensor(encoded), as_tensor(normalized)
    if encoded.ndim != 2 or normalized.ndim not in (3, 4) or \
            encoded.shape[1] != normalized.shape[-3]:
        raise ShapeError(f'Latent count mismatch between encoded latents {encoded.shape} and '
                         f'normalized maps {normalized.shape}')
    recon = encoded @ _flatten_spatial(normalized, 'Normalized maps')
    return recon.reshape(recon.shape[:-1] + normalized.shape[-2:])


def recon_loss(reconstructed: Tensor, features: Tensor) -> Tensor:
    """ Row-wise cross-entropy of the correlation matrix C_f = f_hat^T f with diagonal targets.

    Every row j of C_f is a logit vector over the HW positions whose target is position j. The loss
    is averaged over positions (and over images for stacked input).

    @param Tensor reconstructed: f_hat, shape (D, HW) or (B, D, HW)
    @param Tensor features: f, same shape as reconstructed

    @return Tensor: scalar loss >= 0
    """
    reconstructed, features = as_tensor(reconstructed), as_tensor(features)
    if reconstructed.shape != features.shape or features.ndim not in (2, 3):
        raise ShapeError(f'recon_loss expects equal (D, HW) or (B, D, HW) shapes, got '
                         f'{reconstructed.shape} and {features.shape}')
    positions = features.shape[-1]
    if positions < 1:
        raise ShapeError('recon_loss needs at least one spatial position')
    ndim = reconstructed.ndim
    correlation = reconstructed.transpose(tuple(range(ndim - 2)) + (ndim - 1, ndim - 2)) @ features
    targets = np.broadcast_to(np.arange(positions), correlation.shape[:-1])
    return cross_entropy_logits(correlation, targets).mean()


def attention_weights(normalized: Tensor) -> Tensor:
    """ Spatial mean of the normalized maps: (M, H, W) -> (M,) or (B, M, H, W) -> (B, M).
    Every weight vector sums to one. """
    normalized = as_tensor(normalized)
    if normalized.ndim not in (3, 4):
        raise ShapeError(f'Normalized maps must be (M, H, W) or (B, M, H, W), got '
                         f'{normalized.shape}')
    return normalized.mean(axis=(-2, -1))
