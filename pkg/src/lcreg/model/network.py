# -*- coding: utf-8 -*-

"""
Complete recognition network: patch encoder, latent pool and decoder.

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

__all__ = ['ForwardResult', 'LCRegNetwork']

import numpy as np
from typing import Dict, Mapping, Optional, Sequence, Tuple, Union

from lcreg.core.config import ExperimentConfig
from lcreg.numerics import Rng, ShapeError, Tensor, as_tensor, no_grad
from lcreg.model.encoder import PatchEncoder
from lcreg.model.latent_pool import LatentPool, encode_latents, similarity_maps, normalize_maps
from lcreg.model.latent_pool import reconstruct, attention_weights
from lcreg.model.decoder import Decoder, classify, fuse_and_pool


class ForwardResult:
    """ Intermediate results of one forward pass over a batch of B images.
    All maps keep their spatial layout: features/reconstructed (B, D, H, W), maps (B, M, H, W).
    Latent quantities are None if the latent branch is disabled.
    """

    __slots__ = ('features', 'encoded', 'raw_maps', 'normalized_maps', 'reconstructed', 'pooled',
                 'logits')

    def __init__(self, features: Tensor, encoded: Optional[Tensor], raw_maps: Optional[Tensor],
                 normalized_maps: Optional[Tensor], reconstructed: Tensor, pooled: Tensor,
                 logits: Tensor) -> None:
        self.features = features
        self.encoded = encoded
        self.raw_maps = raw_maps
        self.normalized_maps = normalized_maps
        self.reconstructed = reconstructed
        self.pooled = pooled
        self.logits = logits

    def flat_features(self) -> Tensor:
        return self.features.reshape(self.features.shape[:2] + (-1,))

    def flat_reconstructed(self) -> Tensor:
        return self.reconstructed.reshape(self.reconstructed.shape[:2] + (-1,))


class LCRegNetwork:
    """ Encoder -> latent similarity/normalization/reconstruction -> fusion decoder -> classifier.

    With use_latent=False the reconstruction branch is replaced by zeros, which turns the network
    into a plain encoder + classifier (latent parameters never enter the graph).
    """

    def __init__(self, input_shape: Sequence[int], num_classes: int, feature_dim: int,
                 num_latents: int, rng: Rng, patch_size: Optional[int] = 2,
                 hidden_dims: Optional[Sequence[int]] = (32,), latent_init_std: Optional[float] = 0.02,
                 use_latent: Optional[bool] = True) -> None:
        self.input_shape = tuple(int(v) for v in input_shape)
        self.num_classes = int(num_classes)
        self.use_latent = bool(use_latent)
        self.encoder = PatchEncoder(self.input_shape, feature_dim, rng.spawn(0),
                                    patch_size=patch_size, hidden_dims=hidden_dims)
        self.pool = LatentPool(num_latents, feature_dim, rng.spawn(1), init_std=latent_init_std)
        self.decoder = Decoder(feature_dim, num_classes, rng.spawn(2))

    @classmethod
    def from_config(cls, config: Union[ExperimentConfig, Mapping], input_shape: Sequence[int],
                    num_classes: int, rng: Optional[Rng] = None) -> 'LCRegNetwork':
        if not isinstance(config, ExperimentConfig):
            config = ExperimentConfig(config)
        rng = Rng(config['seed']).spawn(1) if rng is None else rng
        encoder_cfg = config['encoder']
        return cls(input_shape=input_shape,
                   num_classes=num_classes,
                   feature_dim=config['feature_dim'],
                   num_latents=config['num_latents'],
                   rng=rng,
                   patch_size=encoder_cfg['patch_size'],
                   hidden_dims=encoder_cfg['hidden_dims'],
                   latent_init_std=config['latent_init_std'],
                   use_latent=config['ablation']['use_latent'])

    @property
    def feature_dim(self) -> int:
        return self.encoder.feature_dim

    @property
    def num_latents(self) -> int:
        return self.pool.num_latents

    @property
    def spatial_shape(self) -> Tuple[int, int]:
        return self.encoder.spatial_shape

    def parameters(self) -> Dict[str, Tensor]:
        """ All trainable tensors by checkpoint name (stable order) """
        params = self.encoder.parameters()
        params.update(self.pool.parameters())
        params.update(self.decoder.parameters())
        return params

    def stage1_parameters(self) -> Dict[str, Tensor]:
        """ Tensors updated in stage 1. Latent parameters are excluded without the latent branch. """
        params = self.parameters()
        if not self.use_latent:
            for name in self.pool.parameters():
                del params[name]
        return params

    def classifier_parameters(self) -> Dict[str, Tensor]:
        return self.decoder.classifier_parameters()

    def zero_grad(self) -> None:
        for param in self.parameters().values():
            param.zero_grad()

    def state_arrays(self) -> Dict[str, np.ndarray]:
        return {name: param.numpy() for name, param in self.parameters().items()}

    def load_state_arrays(self, arrays: Mapping[str, np.ndarray]) -> None:
        """ Replace all parameter values. Raises KeyError listing missing names, ShapeError for
        shape mismatches. """
        params = self.parameters()
        missing = sorted(set(params).difference(arrays))
        if missing:
            raise KeyError(missing)
        for name, param in params.items():
            value = np.asarray(arrays[name], dtype=np.float64)
            if value.shape != param.shape:
                raise ShapeError(f'Tensor "{name}" has shape {value.shape}, expected {param.shape}')
            param.data = value.copy()
            param.grad = None

    def bind_parameters(self, tensors: Mapping[str, Tensor]) -> None:
        """ Use the given Tensor objects as parameters (by checkpoint name) instead of copying
        their values, so that gradients of a forward pass flow into them.

        @param dict tensors: parameter name -> Tensor of the matching shape
        """
        params = self.parameters()
        unknown = sorted(set(tensors).difference(params))
        if unknown:
            raise KeyError(unknown)
        for name, tensor in tensors.items():
            if tensor.shape != params[name].shape:
                raise ShapeError(f'Tensor "{name}" has shape {tensor.shape}, expected '
                                 f'{params[name].shape}')
            tensor.name = name
        for layer, (weight, bias) in enumerate(zip(self.encoder.weights, self.encoder.biases)):
            self.encoder.weights[layer] = tensors.get(weight.name, weight)
            self.encoder.biases[layer] = tensors.get(bias.name, bias)
        for component in (self.pool, self.decoder):
            for attr, value in list(vars(component).items()):
                if isinstance(value, Tensor) and value.name in tensors:
                    setattr(component, attr, tensors[value.name])

    def forward(self, images: Union[Tensor, np.ndarray]) -> ForwardResult:
        images = as_tensor(images)
        if images.ndim == 3:
            images = images.reshape((1,) + images.shape)
        flat = self.encoder(images)
        height, width = self.spatial_shape
        features = flat.reshape(flat.shape[:2] + (height, width))
        if self.use_latent:
            encoded = encode_latents(self.pool)
            raw = similarity_maps(encoded, features)
            normalized = normalize_maps(raw)
            reconstructed = reconstruct(encoded, normalized)
        else:
            encoded = raw = normalized = None
            reconstructed = Tensor(np.zeros(features.shape))
        pooled = fuse_and_pool(features, reconstructed, self.decoder)
        logits = classify(pooled, self.decoder)
        return ForwardResult(features, encoded, raw, normalized, reconstructed, pooled, logits)

    __call__ = forward

    def predict_logits(self, images: np.ndarray, batch_size: Optional[int] = 256) -> np.ndarray:
        """ Logits for a stack of images without recording gradients """
        images = np.asarray(images, dtype=np.float64)
        chunks = list()
        with no_grad():
            for start in range(0, images.shape[0], batch_size):
                chunks.append(self.forward(images[start:start + batch_size]).logits.data)
        return np.concatenate(chunks, axis=0)

    def pooled_features(self, images: np.ndarray, batch_size: Optional[int] = 256) -> np.ndarray:
        """ Classifier inputs (B, D) for a stack of images without recording gradients """
        images = np.asarray(images, dtype=np.float64)
        chunks = list()
        with no_grad():
            for start in range(0, images.shape[0], batch_size):
                chunks.append(self.forward(images[start:start + batch_size]).pooled.data)
        return np.concatenate(chunks, axis=0)

    def latent_weights(self, images: Union[Tensor, np.ndarray]) -> np.ndarray:
        """ Spatially averaged normalized similarity maps, (M,) for one image or (B, M) """
        images = as_tensor(images)
        single = images.ndim == 3
        with no_grad():
            flat = self.encoder(images.reshape((1,) + images.shape) if single else images)
            height, width = self.spatial_shape
            features = flat.reshape(flat.shape[:2] + (height, width))
            normalized = normalize_maps(similarity_maps(encode_latents(self.pool), features))
            weights = attention_weights(normalized).data
        return weights[0] if single else weights
