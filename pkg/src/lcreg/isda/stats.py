# -*- coding: utf-8 -*-

"""
Incremental per-category Gaussian statistics (sample count, mean and covariance).

Merging a block of n' observations with mean mu' and (population) covariance Sigma' into category m
holding n samples with mean mu and covariance Sigma:

    n_new     = n + n'
    mu_new    = (n * mu + n' * mu') / n_new
    Sigma_new = (n * Sigma + n' * Sigma') / n_new + n * n' * (mu - mu')(mu - mu')^T / n_new^2

which equals the population covariance recomputed over the full observation history.

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

__all__ = ['RunningStats', 'batch_observation', 'observe_iteration', 'update_stats']

import numpy as np
from typing import Any, Dict, Mapping, Optional, Tuple, Union

from lcreg.core.logger import get_logger
from lcreg.numerics.gaussian import EIGENVALUE_TOLERANCE, NotPSDError, check_psd
from lcreg.numerics.tensor import ShapeError, Tensor

logger = get_logger(__name__)


class RunningStats:
    """ Sample count n (M,), mean mu (M, D) and covariance Sigma (M, D, D) per category.
    In diagonal mode only the variances (M, D) are kept. Categories without observations have
    zero mean and zero covariance.
    """

    def __init__(self, num_categories: int, dim: int, diagonal: Optional[bool] = False) -> None:
        if num_categories < 1 or dim < 1:
            raise ValueError('RunningStats needs num_categories >= 1 and dim >= 1')
        self._diagonal = bool(diagonal)
        self._n = np.zeros(num_categories, dtype=np.int64)
        self._mu = np.zeros((num_categories, dim))
        cov_shape = (num_categories, dim) if self._diagonal else (num_categories, dim, dim)
        self._sigma = np.zeros(cov_shape)

    def __repr__(self) -> str:
        return (f'{self.__class__.__name__}(num_categories={self.num_categories:d}, '
                f'dim={self.dim:d}, diagonal={self._diagonal})')

    @property
    def num_categories(self) -> int:
        return self._n.size

    @property
    def dim(self) -> int:
        return self._mu.shape[1]

    @property
    def diagonal(self) -> bool:
        return self._diagonal

    @property
    def counts(self) -> np.ndarray:
        return self._n.copy()

    @property
    def means(self) -> np.ndarray:
        return self._mu.copy()

    @property
    def covariances(self) -> np.ndarray:
        """ (M, D, D) covariances, or (M, D) variances in diagonal mode """
        return self._sigma.copy()

    def covariance(self, category: int) -> np.ndarray:
        """ Full (D, D) covariance of a single category, also in diagonal mode """
        if self._diagonal:
            return np.diag(self._sigma[category])
        return self._sigma[category].copy()

    def _check_observation(self, mu_obs: np.ndarray, sigma_obs: np.ndarray) -> None:
        dim = self.dim
        expected = (dim,) if self._diagonal else (dim, dim)
        if mu_obs.shape != (dim,) or sigma_obs.shape != expected:
            raise ShapeError(f'Observation shapes {mu_obs.shape} / {sigma_obs.shape} do not match '
                             f'dimension {dim:d} (diagonal={self._diagonal})')
        if self._diagonal:
            if not np.isfinite(sigma_obs).all() or np.any(sigma_obs < -EIGENVALUE_TOLERANCE):
                raise NotPSDError('covariance not PSD: negative observation variance')
        else:
            check_psd(sigma_obs)

    def update(self, category: int, mu_obs: np.ndarray, sigma_obs: np.ndarray, n_obs: int) -> None:
        """ Merge n_obs observations with mean mu_obs and covariance sigma_obs into category """
        n_obs = int(n_obs)
        if n_obs < 1:
            raise ValueError(f'Observation count must be >= 1, received {n_obs:d}')
        if not 0 <= category < self.num_categories:
            raise IndexError(f'Category {category} out of range [0, {self.num_categories:d})')
        mu_obs = np.asarray(mu_obs, dtype=np.float64)
        sigma_obs = np.asarray(sigma_obs, dtype=np.float64)
        self._check_observation(mu_obs, sigma_obs)

        n_old = int(self._n[category])
        n_new = n_old + n_obs
        mu_old = self._mu[category]
        delta = mu_old - mu_obs
        if self._diagonal:
            drift = delta * delta
        else:
            drift = np.outer(delta, delta)
        sigma = (n_old * self._sigma[category] + n_obs * sigma_obs) / n_new + \
            (n_old * n_obs / (n_new * n_new)) * drift
        if not self._diagonal:
            sigma = 0.5 * (sigma + sigma.T)
        self._mu[category] = (n_old * mu_old + n_obs * mu_obs) / n_new
        self._sigma[category] = sigma
        self._n[category] = n_new

    def update_all(self, mu_obs: np.ndarray, n_obs: int) -> None:
        """ Merge n_obs identical copies of mu_obs[m] (zero within-block covariance) into every
        category m at once. """
        n_obs = int(n_obs)
        if n_obs < 1:
            raise ValueError(f'Observation count must be >= 1, received {n_obs:d}')
        mu_obs = np.asarray(mu_obs, dtype=np.float64)
        if mu_obs.shape != self._mu.shape:
            raise ShapeError(f'Expected observation means of shape {self._mu.shape}, got '
                             f'{mu_obs.shape}')
        n_old = self._n.astype(np.float64)
        n_new = n_old + n_obs
        delta = self._mu - mu_obs
        weight = n_old * n_obs / (n_new * n_new)
        if self._diagonal:
            drift = delta * delta
            self._sigma = (n_old / n_new)[:, None] * self._sigma + weight[:, None] * drift
        else:
            drift = np.einsum('md,me->mde', delta, delta)
            sigma = (n_old / n_new)[:, None, None] * self._sigma + weight[:, None, None] * drift
            self._sigma = 0.5 * (sigma + np.swapaxes(sigma, 1, 2))
        self._mu = (n_old[:, None] * self._mu + n_obs * mu_obs) / n_new[:, None]
        self._n = self._n + n_obs

    def to_arrays(self, prefix: Optional[str] = 'stats') -> Dict[str, np.ndarray]:
        """ Arrays for checkpointing: "<prefix>_n", "<prefix>_mu" and "<prefix>_sigma" """
        return {f'{prefix}_n': self._n.astype(np.float64),
                f'{prefix}_mu': self._mu.copy(),
                f'{prefix}_sigma': self._sigma.copy()}

    @classmethod
    def from_arrays(cls, arrays: Mapping[str, np.ndarray],
                    prefix: Optional[str] = 'stats') -> 'RunningStats':
        try:
            n = np.asarray(arrays[f'{prefix}_n'])
            mu = np.asarray(arrays[f'{prefix}_mu'], dtype=np.float64)
            sigma = np.asarray(arrays[f'{prefix}_sigma'], dtype=np.float64)
        except KeyError as err:
            raise KeyError(f'Statistics array {err} missing') from None
        if mu.ndim != 2 or n.shape != (mu.shape[0],) or sigma.shape[:2] != mu.shape:
            raise ShapeError('Inconsistent statistics array shapes')
        stats = cls(mu.shape[0], mu.shape[1], diagonal=sigma.ndim == 2)
        stats._n = np.rint(n).astype(np.int64)
        stats._mu = mu.copy()
        stats._sigma = sigma.copy()
        return stats


def update_stats(stats: RunningStats, category: int, mu_obs: np.ndarray, sigma_obs: np.ndarray,
                 n_obs: int) -> RunningStats:
    """ Functional form of RunningStats.update (updates stats in place and returns it) """
    stats.update(category, mu_obs, sigma_obs, n_obs)
    return stats


def batch_observation(rows: np.ndarray,
                      diagonal: Optional[bool] = False) -> Tuple[np.ndarray, np.ndarray, int]:
    """ (mean, population covariance, count) of a block of feature rows (n, D).
    Returns variances instead of the covariance matrix if diagonal is True. """
    rows = np.asarray(rows, dtype=np.float64)
    if rows.ndim != 2 or rows.shape[0] < 1:
        raise ValueError('batch_observation needs at least one feature row of shape (n, D)')
    mean = rows.mean(axis=0)
    centered = rows - mean
    if diagonal:
        cov = np.mean(centered * centered, axis=0)
    else:
        cov = centered.T @ centered / rows.shape[0]
        cov = 0.5 * (cov + cov.T)
    return mean, cov, rows.shape[0]


def observe_iteration(stats: RunningStats, latents: Union[np.ndarray, Tensor, Any], batch_size: int,
                      step: Optional[int] = None) -> RunningStats:
    """ Record one training iteration: every latent category m receives batch_size identical
    observations of its current embedding latents[m]. Call after the optimizer step.

    @param RunningStats stats: latent category statistics (updated in place)
    @param latents: current latent embeddings (M, D) as array or Tensor, or the LatentPool itself
    @param int batch_size: number of samples in the iteration
    @param int step: optional, iteration index (used for logging only)
    """
    if hasattr(latents, 'latents'):
        latents = latents.latents
    if isinstance(latents, Tensor):
        latents = latents.data
    stats.update_all(latents, batch_size)
    if step is not None:
        logger.debug(f'Observed latent embeddings at step {step:d}')
    return stats
