# -*- coding: utf-8 -*-

"""
Multivariate Gaussian sampling with PSD repair by eigenvalue clamping.

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

__all__ = ['NotPSDError', 'check_psd', 'psd_factor', 'sample_gaussian', 'symmetric_root',
           'SYMMETRY_TOLERANCE', 'EIGENVALUE_TOLERANCE']

import numpy as np
from scipy import linalg
from typing import Optional, Union

from lcreg.numerics.tensor import NumericsError, ShapeError
from lcreg.numerics.random import Rng

SYMMETRY_TOLERANCE = 1e-9
EIGENVALUE_TOLERANCE = 1e-8


class NotPSDError(NumericsError, ValueError):
    """ Raised for asymmetric or clearly indefinite covariance matrices """
    pass


def _eigh_checked(cov: np.ndarray):
    cov = np.asarray(cov, dtype=np.float64)
    if cov.ndim != 2 or cov.shape[0] != cov.shape[1]:
        raise ShapeError(f'Covariance must be a square matrix, got shape {cov.shape}')
    if not np.isfinite(cov).all():
        raise NotPSDError('covariance not PSD: non-finite entries')
    if cov.size and np.max(np.abs(cov - cov.T)) > SYMMETRY_TOLERANCE:
        raise NotPSDError('covariance not PSD: matrix is not symmetric')
    eigvals, eigvecs = linalg.eigh(0.5 * (cov + cov.T))
    if eigvals.size and eigvals.min() < -EIGENVALUE_TOLERANCE:
        raise NotPSDError(f'covariance not PSD: smallest eigenvalue {eigvals.min():.3e}')
    return eigvals, eigvecs


def check_psd(cov: np.ndarray) -> None:
    """ Raises NotPSDError if cov is asymmetric (> 1e-9) or has an eigenvalue below -1e-8 """
    _eigh_checked(cov)


def symmetric_root(eigvals: np.ndarray, eigvecs: np.ndarray) -> np.ndarray:
    """ V diag(sqrt(max(w, 0))) V.T, independent of the sign and basis chosen for the eigenvectors
    """
    root = (eigvecs * np.sqrt(np.clip(eigvals, 0, None))) @ eigvecs.T
    return 0.5 * (root + root.T)


def psd_factor(cov: np.ndarray) -> np.ndarray:
    """ Symmetric square root L of the clamped matrix, so that L @ L equals it """
    return symmetric_root(*_eigh_checked(cov))


def sample_gaussian(mean: np.ndarray, cov: np.ndarray, scale: float, rng: Rng,
                    size: Optional[int] = None) -> np.ndarray:
    """ Draw from N(mean, scale * cov).

    @param numpy.ndarray mean: D-vector
    @param numpy.ndarray cov: DxD symmetric PSD matrix (slightly indefinite input is clamped)
    @param float scale: non-negative variance scale (lambda)
    @param Rng rng: random stream to draw standard normals from
    @param int size: optional, number of draws. Returns shape (size, D) if given, (D,) otherwise.

    @return numpy.ndarray: the draw(s)
    """
    mean = np.asarray(mean, dtype=np.float64)
    if mean.ndim != 1:
        raise ShapeError(f'Gaussian mean must be a vector, got shape {mean.shape}')
    if scale < 0:
        raise ValueError('Gaussian scale must be >= 0')
    factor = psd_factor(cov)
    if factor.shape[0] != mean.size:
        raise ShapeError(f'Covariance shape {np.shape(cov)} does not match mean size {mean.size}')
    out_shape = mean.shape if size is None else (int(size), mean.size)
    if scale == 0:
        return np.broadcast_to(mean, out_shape).copy()
    z = rng.normal(out_shape)
    return mean + np.sqrt(scale) * (z @ factor.T)
