# -*- coding: utf-8 -*-

"""
Differentiable operations on top of lcreg.numerics.tensor.Tensor.

The set is intentionally fixed: elementwise nonlinearities, numerically stable softmax /
log-softmax / logsumexp, concatenation and the logit cross-entropy used by every loss in lcreg.

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

__all__ = ['concat', 'cross_entropy_logits', 'dot', 'exp', 'log', 'log_softmax', 'logsumexp',
           'relu', 'sigmoid', 'softmax']

import numpy as np
from scipy import special
from typing import Optional, Sequence, Union

from lcreg.numerics.tensor import Tensor, NonFiniteError, ShapeError, as_tensor

_Targets = Union[int, Sequence[int], np.ndarray]


def _require_finite_logits(data: np.ndarray) -> None:
    if not np.isfinite(data).all():
        raise NonFiniteError('non-finite logits')


def exp(x: Tensor) -> Tensor:
    x = as_tensor(x)
    out = np.exp(x.data)
    return Tensor._from_op(out, (x,), lambda g: (g * out,))


def log(x: Tensor) -> Tensor:
    x = as_tensor(x)
    a = x.data
    with np.errstate(divide='ignore', invalid='ignore'):
        out = np.log(a)
    return Tensor._from_op(out, (x,), lambda g: (g / a,))


def relu(x: Tensor) -> Tensor:
    x = as_tensor(x)
    mask = x.data > 0
    return Tensor._from_op(np.where(mask, x.data, 0.0), (x,), lambda g: (g * mask,))


def sigmoid(x: Tensor) -> Tensor:
    """ Elementwise logistic function 1 / (1 + exp(-x)), evaluated without overflow """
    x = as_tensor(x)
    out = special.expit(x.data)
    return Tensor._from_op(out, (x,), lambda g: (g * out * (1.0 - out),))


def _softmax_array(data: np.ndarray, axis: int) -> np.ndarray:
    shifted = data - np.max(data, axis=axis, keepdims=True)
    e = np.exp(shifted)
    return e / np.sum(e, axis=axis, keepdims=True)


def softmax(x: Tensor, axis: Optional[int] = -1) -> Tensor:
    """ Max-subtracted softmax along the given axis """
    x = as_tensor(x)
    _require_finite_logits(x.data)
    if x.ndim == 0:
        raise ShapeError('softmax requires at least one dimension')
    if x.shape[axis] == 0:
        raise ShapeError('softmax of an empty axis is undefined')
    out = _softmax_array(x.data, axis)

    def backward(g):
        return (out * (g - np.sum(g * out, axis=axis, keepdims=True)),)

    return Tensor._from_op(out, (x,), backward)


def logsumexp(x: Tensor, axis: Optional[int] = -1, keepdims: Optional[bool] = False) -> Tensor:
    x = as_tensor(x)
    _require_finite_logits(x.data)
    out = special.logsumexp(x.data, axis=axis, keepdims=True)
    weights = np.exp(x.data - out)

    def backward(g):
        if not keepdims:
            g = np.expand_dims(g, axis)
        return (g * weights,)

    return Tensor._from_op(out if keepdims else np.squeeze(out, axis=axis), (x,), backward)


def log_softmax(x: Tensor, axis: Optional[int] = -1) -> Tensor:
    x = as_tensor(x)
    _require_finite_logits(x.data)
    out = x.data - special.logsumexp(x.data, axis=axis, keepdims=True)
    probs = np.exp(out)

    def backward(g):
        return (g - probs * np.sum(g, axis=axis, keepdims=True),)

    return Tensor._from_op(out, (x,), backward)


def cross_entropy_logits(logits: Tensor, target: _Targets) -> Tensor:
    """ -log softmax(logits)[target] along the last axis.

    @param Tensor logits: Logits of shape (..., K)
    @param int|array target: Class index, or integer array of shape logits.shape[:-1]

    @return Tensor: Per-row losses of shape logits.shape[:-1] (a scalar tensor for a single logit
                    vector)
    """
    logits = as_tensor(logits)
    _require_finite_logits(logits.data)
    if logits.ndim == 0:
        raise ShapeError('cross_entropy_logits requires a logit vector')
    num_classes = logits.shape[-1]
    target = np.asarray(target)
    if not np.issubdtype(target.dtype, np.integer):
        raise TypeError('cross-entropy targets must be integer class indices')
    if target.shape != logits.shape[:-1]:
        try:
            target = np.broadcast_to(target, logits.shape[:-1])
        except ValueError:
            raise ShapeError(f'target shape {target.shape} does not match logits shape '
                             f'{logits.shape}') from None
    if np.any(target < 0) or np.any(target >= num_classes):
        raise IndexError(f'target out of range for {num_classes:d} classes')

    data = logits.data
    lse = special.logsumexp(data, axis=-1)
    picked = np.take_along_axis(data, target[..., None], axis=-1)[..., 0]
    probs = np.exp(data - lse[..., None])

    def backward(g):
        grad = probs.copy()
        index = target[..., None]
        np.put_along_axis(grad, index, np.take_along_axis(grad, index, -1) - 1, axis=-1)
        return (g[..., None] * grad,)

    return Tensor._from_op(lse - picked, (logits,), backward)


def concat(tensors: Sequence[Tensor], axis: Optional[int] = 0) -> Tensor:
    tensors = [as_tensor(t) for t in tensors]
    if not tensors:
        raise ShapeError('Nothing to concatenate')
    sizes = [t.shape[axis] for t in tensors]
    splits = np.cumsum(sizes)[:-1]

    def backward(g):
        return tuple(np.split(g, splits, axis=axis))

    return Tensor._from_op(np.concatenate([t.data for t in tensors], axis=axis), tensors, backward)


def dot(x: Tensor, y: Tensor) -> Tensor:
    """ Inner product of two equally shaped tensors """
    x, y = as_tensor(x), as_tensor(y)
    if x.shape != y.shape:
        raise ShapeError(f'dot requires equal shapes, got {x.shape} and {y.shape}')
    return (x * y).sum()
