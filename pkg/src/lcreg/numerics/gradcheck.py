# -*- coding: utf-8 -*-

"""
Central finite-difference oracle for verifying the analytic gradients of the tensor tape.

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

__all__ = ['analytic_gradients', 'finite_diff_gradient', 'gradient_check', 'relative_error']

import numpy as np
from typing import Callable, Dict, List, Optional, Sequence, Union

from lcreg.numerics.tensor import Tensor, NonFiniteError, no_grad

_ScalarFunction = Callable[[Tensor], Union[Tensor, float]]


def _evaluate(func: _ScalarFunction, values: np.ndarray) -> float:
    with no_grad():
        try:
            result = func(Tensor(values))
        except NonFiniteError as err:
            raise NonFiniteError('non-finite function evaluation in finite differences') from err
    result = result.item() if isinstance(result, Tensor) else float(result)
    if not np.isfinite(result):
        raise NonFiniteError('non-finite function evaluation in finite differences')
    return result


def finite_diff_gradient(func: _ScalarFunction, x: Union[Tensor, np.ndarray],
                         h: Optional[float] = 1e-5) -> Tensor:
    """ Central differences (f(x + h*e_i) - f(x - h*e_i)) / (2h) for every coordinate i of x.

    @param callable func: scalar function of a single Tensor
    @param Tensor x: point to differentiate at
    @param float h: step size, must be > 0

    @return Tensor: numerical gradient with the shape of x
    """
    if not h > 0:
        raise ValueError('Finite difference step h must be > 0')
    point = np.array(x.data if isinstance(x, Tensor) else x, dtype=np.float64)
    flat = point.reshape(-1)
    grad = np.zeros(flat.size, dtype=np.float64)
    for i in range(flat.size):
        original = flat[i]
        flat[i] = original + h
        f_plus = _evaluate(func, point)
        flat[i] = original - h
        f_minus = _evaluate(func, point)
        flat[i] = original
        grad[i] = (f_plus - f_minus) / (2 * h)
    return Tensor(grad.reshape(point.shape))


def relative_error(analytic: Union[Tensor, np.ndarray], numeric: Union[Tensor, np.ndarray]) -> float:
    """ max|a - n| / max(max|a|, max|n|), with an absolute floor for vanishing gradients """
    a = analytic.data if isinstance(analytic, Tensor) else np.asarray(analytic, dtype=np.float64)
    n = numeric.data if isinstance(numeric, Tensor) else np.asarray(numeric, dtype=np.float64)
    if a.shape != n.shape:
        raise ValueError(f'Gradient shapes differ: {a.shape} vs. {n.shape}')
    if a.size == 0:
        return 0.0
    scale = max(np.max(np.abs(a)), np.max(np.abs(n)), 1e-8)
    return float(np.max(np.abs(a - n)) / scale)


def analytic_gradients(loss_fn: Callable[..., Tensor], inputs: Sequence[Tensor]) -> List[np.ndarray]:
    """ Gradients of loss_fn(*inputs) w.r.t. each input, computed by the tape """
    leaves = [Tensor(t.data, requires_grad=True) for t in inputs]
    loss_fn(*leaves).backward()
    return [np.zeros(t.shape) if t.grad is None else t.grad for t in leaves]


def gradient_check(loss_fn: Callable[..., Tensor], inputs: Sequence[Tensor],
                   h: Optional[float] = 1e-5) -> Dict[int, float]:
    """ Compare tape gradients to central finite differences for every input of loss_fn.

    @return dict: input position -> relative error (see relative_error)
    """
    analytic = analytic_gradients(loss_fn, inputs)
    errors = dict()
    for position, value in enumerate(inputs):
        def partial(t, _pos=position):
            args = list(inputs)
            args[_pos] = t
            return loss_fn(*args)

        numeric = finite_diff_gradient(partial, value, h)
        errors[position] = relative_error(analytic[position], numeric)
    return errors
