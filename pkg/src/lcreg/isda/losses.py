# -*- coding: utf-8 -*-

"""
Closed-form implicit semantic augmentation loss and explicit Gaussian feature sampling.

For a feature f with label y, a linear head (w, b) and a covariance Sigma_y, the cross-entropy
expected under infinitely many draws f + N(0, lambda * Sigma_y) is bounded from above by the
cross-entropy of the augmented logits

    z_j = w_j^T f + b_j + (lambda / 2) (w_j - w_y)^T Sigma_y (w_j - w_y)

which is what implicit_aug_loss evaluates (z_y carries no quadratic term).

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

__all__ = ['implicit_aug_loss', 'latent_aug_loss', 'sample_augmented']

import numpy as np
from typing import Optional, Sequence, Union

from lcreg.numerics import Rng, ShapeError, Tensor, as_tensor, sample_gaussian
from lcreg.numerics.functional import cross_entropy_logits
from lcreg.model.latent_pool import LatentPool
from lcreg.isda.stats import RunningStats


def implicit_aug_loss(features: Tensor, labels: Union[Sequence[int], np.ndarray], weight: Tensor,
                      bias: Tensor, covariances: np.ndarray, lam: float) -> Tensor:
    """ Mean augmented cross-entropy over N feature rows.

    @param Tensor features: feature rows (N, D)
    @param labels: integer labels (N,) in [0, K)
    @param Tensor weight: linear head weight (K, D)
    @param Tensor bias: linear head bias (K,)
    @param numpy.ndarray covariances: per-label covariances (K, D, D) or variances (K, D).
                                      Treated as constants.
    @param float lam: augmentation strength lambda >= 0

    @return Tensor: scalar loss
    """
    if lam < 0:
        raise ValueError('Augmentation strength lambda must be >= 0')
    features, weight, bias = as_tensor(features), as_tensor(weight), as_tensor(bias)
    labels = np.asarray(labels, dtype=np.int64)
    covariances = np.asarray(covariances, dtype=np.float64)
    num_rows, dim = features.shape
    num_labels = weight.shape[0]
    if weight.shape != (num_labels, dim) or bias.shape != (num_labels,):
        raise ShapeError(f'Head shapes {weight.shape} / {bias.shape} do not fit features of '
                         f'dimension {dim:d}')
    if labels.shape != (num_rows,):
        raise ShapeError(f'Expected {num_rows:d} labels, got shape {labels.shape}')
    if covariances.shape not in ((num_labels, dim, dim), (num_labels, dim)):
        raise ShapeError(f'Covariances must have shape ({num_labels:d}, {dim:d}[, {dim:d}]), got '
                         f'{covariances.shape}')
    if np.any(labels < 0) or np.any(labels >= num_labels):
        raise IndexError(f'target out of range for {num_labels:d} classes')

    logits = features @ weight.T + bias
    if lam == 0:
        return cross_entropy_logits(logits, labels).mean()

    # (N, K, D) weight differences w_j - w_y
    diff = weight.reshape(1, num_labels, dim) - weight[labels].reshape(num_rows, 1, dim)
    row_cov = covariances[labels]
    if row_cov.ndim == 2:
        quadratic = (diff * diff * row_cov.reshape(num_rows, 1, dim)).sum(axis=-1)
    else:
        quadratic = ((diff @ row_cov) * diff).sum(axis=-1)
    return cross_entropy_logits(logits + (0.5 * lam) * quadratic, labels).mean()


def latent_aug_loss(pool: LatentPool, stats: RunningStats, lam: float) -> Tensor:
    """ Augmentation loss of the latent pool: latent category m is a sample of pseudo-class m,
    classified by the latent head and perturbed along its running covariance. Averaged over the M
    categories. """
    if stats.num_categories != pool.num_latents or stats.dim != pool.feature_dim:
        raise ShapeError(f'Statistics ({stats.num_categories:d} x {stats.dim:d}) do not match the '
                         f'latent pool ({pool.num_latents:d} x {pool.feature_dim:d})')
    return implicit_aug_loss(pool.latents, np.arange(pool.num_latents), pool.head_weight,
                             pool.head_bias, stats.covariances, lam)


def sample_augmented(pool: LatentPool, stats: RunningStats, category: int, lam: float, rng: Rng,
                     size: Optional[int] = None) -> np.ndarray:
    """ Explicit draw(s) from N(f'_m, lambda * Sigma_m) """
    if lam < 0:
        raise ValueError('Augmentation strength lambda must be >= 0')
    return sample_gaussian(pool.latents.data[category], stats.covariance(category), lam, rng, size)
