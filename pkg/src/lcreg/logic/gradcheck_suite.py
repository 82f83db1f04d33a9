# -*- coding: utf-8 -*-

"""
Gradient verification of the reconstruction loss, the latent augmentation loss and the combined
training objective against central finite differences on small random configurations.

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

__all__ = ['GRADCHECK_TOLERANCE', 'GradcheckReport', 'gradcheck_suite']

import numpy as np
from typing import Dict, List, Optional

from lcreg.core.logger import get_logger
from lcreg.core.config import ExperimentConfig
from lcreg.numerics import Rng, Tensor, gradient_check
from lcreg.model import Decoder, LatentPool, LCRegNetwork, classify, encode_latents, fuse_and_pool
from lcreg.model import normalize_maps, recon_loss, reconstruct, similarity_maps
from lcreg.isda import RunningStats, implicit_aug_loss, latent_aug_loss
from lcreg.logic.losses import combined_loss

logger = get_logger(__name__)

GRADCHECK_TOLERANCE = 1e-4

_FEATURE_DIM = 3
_NUM_LATENTS = 2
_NUM_CLASSES = 3
_BATCH_SIZE = 2
_SPATIAL = (2, 2)


class GradcheckReport:
    """ Maximum relative gradient error per checked objective """

    def __init__(self, errors: Dict[str, List[float]], tolerance: float) -> None:
        self.errors = errors
        self.tolerance = tolerance

    @property
    def max_errors(self) -> Dict[str, float]:
        return {name: max(values) if values else 0.0 for name, values in self.errors.items()}

    @property
    def max_error(self) -> float:
        return max(self.max_errors.values(), default=0.0)

    @property
    def passed(self) -> bool:
        return self.max_error <= self.tolerance


def _random_psd(rng: Rng, count: int, dim: int) -> np.ndarray:
    factors = rng.normal((count, dim, dim))
    return factors @ np.swapaxes(factors, 1, 2) / dim + 0.1 * np.eye(dim)


def _flat(x: Tensor) -> Tensor:
    return x.reshape(x.shape[:-2] + (x.shape[-2] * x.shape[-1],))


def _recon_objective(encoded: Tensor, features: Tensor) -> Tensor:
    reconstructed = reconstruct(encoded, normalize_maps(similarity_maps(encoded, features)))
    return recon_loss(_flat(reconstructed), _flat(features))


def _check_recon(rng: Rng, h: float) -> float:
    encoded = Tensor(rng.normal((_FEATURE_DIM, _NUM_LATENTS)))
    features = Tensor(rng.normal((_FEATURE_DIM,) + _SPATIAL))
    return max(gradient_check(_recon_objective, [encoded, features], h).values())


def _check_latent_aug(rng: Rng, h: float) -> float:
    num_latents, dim = 3, 4
    covariances = _random_psd(rng, num_latents, dim)
    lam = float(rng.uniform(0.1, 1.0))
    labels = np.arange(num_latents)

    def objective(latents, head_weight, head_bias):
        return implicit_aug_loss(latents, labels, head_weight, head_bias, covariances, lam)

    inputs = [Tensor(rng.normal((num_latents, dim))),
              Tensor(rng.normal((num_latents, dim)) / np.sqrt(dim)),
              Tensor(0.1 * rng.normal(num_latents))]
    return max(gradient_check(objective, inputs, h).values())


def _check_combined(rng: Rng, h: float) -> float:
    config = ExperimentConfig(num_latents=_NUM_LATENTS, feature_dim=_FEATURE_DIM)
    pool = LatentPool(_NUM_LATENTS, _FEATURE_DIM, rng.spawn(0), init_std=1.0)
    decoder = Decoder(_FEATURE_DIM, _NUM_CLASSES, rng.spawn(1))
    stats = RunningStats(_NUM_LATENTS, _FEATURE_DIM)
    covariances = _random_psd(rng, _NUM_LATENTS, _FEATURE_DIM)
    for category in range(_NUM_LATENTS):
        stats.update(category, rng.normal(_FEATURE_DIM), covariances[category], 4)
    lam = float(rng.uniform(0.1, 1.0))
    labels = rng.integers(0, _NUM_CLASSES, size=_BATCH_SIZE)

    def objective(features, latents, proj_weight, head_weight, fuse_weight, cls_weight):
        pool.latents, pool.proj_weight, pool.head_weight = latents, proj_weight, head_weight
        decoder.fuse_weight, decoder.cls_weight = fuse_weight, cls_weight
        encoded = encode_latents(pool)
        reconstructed = reconstruct(encoded, normalize_maps(similarity_maps(encoded, features)))
        recon = recon_loss(_flat(reconstructed), _flat(features))
        aug = latent_aug_loss(pool, stats, lam)
        logits = classify(fuse_and_pool(features, reconstructed, decoder), decoder)
        return combined_loss(logits, labels, recon, aug, config).total

    inputs = [Tensor(rng.normal((_BATCH_SIZE, _FEATURE_DIM) + _SPATIAL)),
              Tensor(pool.latents.data), Tensor(pool.proj_weight.data),
              Tensor(pool.head_weight.data), Tensor(decoder.fuse_weight.data),
              Tensor(decoder.cls_weight.data)]
    return max(gradient_check(objective, inputs, h).values())


def _check_network(rng: Rng, h: float) -> float:
    config = ExperimentConfig(num_latents=_NUM_LATENTS, feature_dim=_FEATURE_DIM,
                              latent_init_std=1.0, encoder={'patch_size': 2, 'hidden_dims': [3]})
    network = LCRegNetwork.from_config(config, (1, 4, 4), _NUM_CLASSES, rng=rng.spawn(0))
    names = list(network.parameters())
    stats = RunningStats(_NUM_LATENTS, _FEATURE_DIM)
    covariances = _random_psd(rng, _NUM_LATENTS, _FEATURE_DIM)
    for category in range(_NUM_LATENTS):
        stats.update(category, rng.normal(_FEATURE_DIM), covariances[category], 4)
    lam = float(rng.uniform(0.1, 1.0))
    labels = rng.integers(0, _NUM_CLASSES, size=_BATCH_SIZE)

    def objective(images, *params):
        network.bind_parameters(dict(zip(names, params)))
        result = network.forward(images)
        recon = recon_loss(result.flat_reconstructed(), result.flat_features())
        aug = latent_aug_loss(network.pool, stats, lam)
        return combined_loss(result.logits, labels, recon, aug, config).total

    # random biases, so that no bias gradient is checked at its zero initialization only
    inputs = [Tensor(rng.normal((_BATCH_SIZE, 1, 4, 4)))]
    inputs.extend(Tensor(value + 0.1 * rng.normal(value.shape))
                  for value in network.state_arrays().values())
    return max(gradient_check(objective, inputs, h).values())


def gradcheck_suite(seed: Optional[int] = 0, num_configs: Optional[int] = 10,
                    h: Optional[float] = 1e-5,
                    tolerance: Optional[float] = GRADCHECK_TOLERANCE) -> GradcheckReport:
    """ Check tape gradients of all training objectives at num_configs random configurations each.

    @param int seed: random seed of the configurations
    @param int num_configs: configurations per objective
    @param float h: finite difference step
    @param float tolerance: maximum accepted relative error

    @return GradcheckReport: relative errors of every configuration
    """
    rng = Rng(seed)
    checks = {'recon': _check_recon,
              'latent_aug': _check_latent_aug,
              'combined': _check_combined,
              'network': _check_network}
    errors = dict()
    for index, (name, check) in enumerate(checks.items()):
        errors[name] = [check(rng.spawn(index, config), h) for config in range(num_configs)]
    report = GradcheckReport(errors, tolerance)
    for name, value in report.max_errors.items():
        logger.info(f'Gradient check "{name}": max relative error {value:.3e}')
    if not report.passed:
        logger.warning(f'Gradient check failed: max relative error {report.max_error:.3e} > '
                       f'{tolerance:.1e}')
    return report
