# -*- coding: utf-8 -*-

"""
Dense 64-bit tensor with a reverse-mode gradient tape.

Every operation records its parents together with a closure mapping the upstream gradient onto
the gradients of those parents. Calling Tensor.backward() on a scalar walks the recorded graph in
reverse topological order and accumulates the result in the "grad" buffer of every leaf tensor
that requires gradients.

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

__all__ = ['NumericsError', 'NonFiniteError', 'ShapeError', 'Tensor', 'as_tensor', 'grad_enabled',
           'no_grad']

import contextlib
import numpy as np
from typing import Any, Callable, Iterator, List, Optional, Sequence, Tuple, Union


class NumericsError(ArithmeticError):
    """ Base class for all errors raised by the numerics package """
    pass


class NonFiniteError(NumericsError):
    """ Raised whenever an operation would produce NaN or Inf values """
    pass


class ShapeError(NumericsError, ValueError):
    """ Raised on incompatible operand shapes """
    pass


_BackwardFunction = Callable[[np.ndarray], Sequence[Optional[np.ndarray]]]
_ArrayLike = Union['Tensor', np.ndarray, float, int, Sequence]

_grad_enabled = True


@contextlib.contextmanager
def no_grad() -> Iterator[None]:
    """ Context manager disabling graph recording, e.g. for evaluation or frozen feature passes.
    """
    global _grad_enabled
    previous = _grad_enabled
    _grad_enabled = False
    try:
        yield
    finally:
        _grad_enabled = previous


def grad_enabled() -> bool:
    return _grad_enabled


def _check_finite(data: np.ndarray, what: str = 'tensor') -> None:
    if not np.isfinite(data).all():
        raise NonFiniteError(f'{what} contains non-finite values')


def _unbroadcast(grad: np.ndarray, shape: Tuple[int, ...]) -> np.ndarray:
    """ Sum a broadcast gradient back down to the operand shape """
    while grad.ndim > len(shape):
        grad = grad.sum(axis=0)
    for axis, size in enumerate(shape):
        if size == 1 and grad.shape[axis] != 1:
            grad = grad.sum(axis=axis, keepdims=True)
    return grad


def _normalize_axes(axis: Union[None, int, Sequence[int]], ndim: int) -> Tuple[int, ...]:
    if axis is None:
        return tuple(range(ndim))
    if isinstance(axis, (int, np.integer)):
        axis = (axis,)
    return tuple(sorted(int(ax) % ndim for ax in axis))


class Tensor:
    """ Dense row-major float64 array that optionally takes part in gradient computation.

    Tensors created by the user are leaves. Only leaves with requires_grad=True receive a "grad"
    buffer during backward(). Values are checked to be finite upon construction.
    """

    __slots__ = ('data', 'requires_grad', 'grad', 'name', '_parents', '_backward')

    # Makes numpy defer to the reflected Tensor operators (e.g. ndarray * Tensor)
    __array_priority__ = 1000

    def __init__(self, data: _ArrayLike, requires_grad: Optional[bool] = False,
                 name: Optional[str] = None) -> None:
        if isinstance(data, Tensor):
            data = data.data
        data = np.array(data, dtype=np.float64)
        _check_finite(data)
        self.data = data
        self.requires_grad = bool(requires_grad)
        self.grad = None
        self.name = name
        self._parents = tuple()
        self._backward = None

    @classmethod
    def _from_op(cls, data: np.ndarray, parents: Sequence['Tensor'],
                 backward: _BackwardFunction) -> 'Tensor':
        data = np.asarray(data, dtype=np.float64)
        _check_finite(data, 'operation result')
        obj = cls.__new__(cls)
        obj.data = data
        obj.grad = None
        obj.name = None
        obj.requires_grad = _grad_enabled and any(p.requires_grad for p in parents)
        if obj.requires_grad:
            obj._parents = tuple(parents)
            obj._backward = backward
        else:
            obj._parents = tuple()
            obj._backward = None
        return obj

    def __repr__(self) -> str:
        grad_str = ', requires_grad=True' if self.requires_grad else ''
        return f'Tensor({np.array2string(self.data, precision=6)}{grad_str})'

    def __len__(self) -> int:
        return len(self.data)

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.data.shape

    @property
    def ndim(self) -> int:
        return self.data.ndim

    @property
    def size(self) -> int:
        return self.data.size

    @property
    def is_leaf(self) -> bool:
        return self._backward is None

    @property
    def T(self) -> 'Tensor':
        return self.transpose()

    def numpy(self) -> np.ndarray:
        """ Copy of the underlying value buffer """
        return self.data.copy()

    def item(self) -> float:
        if self.data.size != 1:
            raise ShapeError(f'Only single-element tensors can be converted to float, got shape '
                             f'{self.shape}')
        return float(self.data.reshape(-1)[0])

    def detach(self) -> 'Tensor':
        return Tensor(self.data)

    def zero_grad(self) -> None:
        self.grad = None

    # Gradient tape ------------------------------------------------------------------------------
    def _topological_order(self) -> List['Tensor']:
        order = list()
        visited = set()
        stack = [(self, False)]
        while stack:
            node, expanded = stack.pop()
            if expanded:
                order.append(node)
                continue
            if id(node) in visited:
                continue
            visited.add(id(node))
            stack.append((node, True))
            stack.extend((parent, False) for parent in node._parents if id(parent) not in visited)
        return order

    def backward(self) -> None:
        """ Accumulate d(self)/d(leaf) into the "grad" buffer of every contributing leaf that
        requires gradients. Only scalar (single element) tensors can be differentiated.
        """
        if self.data.size != 1:
            raise ShapeError(f'backward() requires a scalar loss, got shape {self.shape}')
        if not self.requires_grad:
            raise NumericsError('Loss does not depend on any tensor requiring gradients')

        grads = {id(self): np.ones_like(self.data)}
        for node in reversed(self._topological_order()):
            grad = grads.pop(id(node), None)
            if grad is None:
                continue
            if node._backward is None:
                if node.grad is None:
                    node.grad = np.array(grad, dtype=np.float64)
                else:
                    node.grad = node.grad + grad
                continue
            for parent, parent_grad in zip(node._parents, node._backward(grad)):
                if parent_grad is None or not parent.requires_grad:
                    continue
                key = id(parent)
                grads[key] = parent_grad if key not in grads else grads[key] + parent_grad

    # Arithmetic ---------------------------------------------------------------------------------
    def __add__(self, other: _ArrayLike) -> 'Tensor':
        other = as_tensor(other)
        a_shape, b_shape = self.shape, other.shape
        return Tensor._from_op(
            self.data + other.data,
            (self, other),
            lambda g: (_unbroadcast(g, a_shape), _unbroadcast(g, b_shape))
        )

    def __radd__(self, other: _ArrayLike) -> 'Tensor':
        return as_tensor(other).__add__(self)

    def __sub__(self, other: _ArrayLike) -> 'Tensor':
        other = as_tensor(other)
        a_shape, b_shape = self.shape, other.shape
        return Tensor._from_op(
            self.data - other.data,
            (self, other),
            lambda g: (_unbroadcast(g, a_shape), _unbroadcast(-g, b_shape))
        )

    def __rsub__(self, other: _ArrayLike) -> 'Tensor':
        return as_tensor(other).__sub__(self)

    def __mul__(self, other: _ArrayLike) -> 'Tensor':
        other = as_tensor(other)
        a, b = self.data, other.data
        return Tensor._from_op(
            a * b,
            (self, other),
            lambda g: (_unbroadcast(g * b, a.shape), _unbroadcast(g * a, b.shape))
        )

    def __rmul__(self, other: _ArrayLike) -> 'Tensor':
        return as_tensor(other).__mul__(self)

    def __truediv__(self, other: _ArrayLike) -> 'Tensor':
        other = as_tensor(other)
        a, b = self.data, other.data
        return Tensor._from_op(
            a / b,
            (self, other),
            lambda g: (_unbroadcast(g / b, a.shape), _unbroadcast(-g * a / (b * b), b.shape))
        )

    def __rtruediv__(self, other: _ArrayLike) -> 'Tensor':
        return as_tensor(other).__truediv__(self)

    def __neg__(self) -> 'Tensor':
        return Tensor._from_op(-self.data, (self,), lambda g: (-g,))

    def __pow__(self, exponent: float) -> 'Tensor':
        if isinstance(exponent, Tensor):
            raise TypeError('Only constant exponents are supported')
        exponent = float(exponent)
        a = self.data
        return Tensor._from_op(
            a ** exponent,
            (self,),
            lambda g: (g * exponent * a ** (exponent - 1),)
        )

    def __matmul__(self, other: _ArrayLike) -> 'Tensor':
        other = as_tensor(other)
        a, b = self.data, other.data
        if a.ndim < 2 or b.ndim < 2:
            raise ShapeError(f'matmul operands must have at least 2 dimensions, got {a.shape} and '
                             f'{b.shape}. Use functional.dot for vectors.')
        if a.shape[-1] != b.shape[-2]:
            raise ShapeError(f'matmul dimension mismatch: {a.shape} @ {b.shape}')

        def backward(g):
            grad_a = _unbroadcast(np.matmul(g, np.swapaxes(b, -1, -2)), a.shape)
            grad_b = _unbroadcast(np.matmul(np.swapaxes(a, -1, -2), g), b.shape)
            return grad_a, grad_b

        return Tensor._from_op(np.matmul(a, b), (self, other), backward)

    def __rmatmul__(self, other: _ArrayLike) -> 'Tensor':
        return as_tensor(other).__matmul__(self)

    # Structural ---------------------------------------------------------------------------------
    def __getitem__(self, index: Any) -> 'Tensor':
        shape = self.shape
        if isinstance(index, Tensor):
            raise TypeError('Tensors can not be used as indices')

        def backward(g):
            full = np.zeros(shape, dtype=np.float64)
            np.add.at(full, index, g)
            return (full,)

        return Tensor._from_op(self.data[index], (self,), backward)

    def reshape(self, *shape: Union[int, Sequence[int]]) -> 'Tensor':
        if len(shape) == 1 and not isinstance(shape[0], (int, np.integer)):
            shape = tuple(shape[0])
        orig_shape = self.shape
        return Tensor._from_op(self.data.reshape(shape), (self,),
                               lambda g: (g.reshape(orig_shape),))

    def transpose(self, *axes: int) -> 'Tensor':
        if len(axes) == 1 and not isinstance(axes[0], (int, np.integer)):
            axes = tuple(axes[0])
        if not axes:
            axes = tuple(reversed(range(self.ndim)))
        inverse = tuple(np.argsort(axes))
        return Tensor._from_op(self.data.transpose(axes), (self,),
                               lambda g: (g.transpose(inverse),))

    # Reductions ---------------------------------------------------------------------------------
    def sum(self, axis: Union[None, int, Sequence[int]] = None,
            keepdims: Optional[bool] = False) -> 'Tensor':
        shape = self.shape
        axes = _normalize_axes(axis, self.ndim)

        def backward(g):
            if not keepdims:
                g = np.expand_dims(g, axes)
            return (np.broadcast_to(g, shape),)

        return Tensor._from_op(self.data.sum(axis=axes, keepdims=keepdims), (self,), backward)

    def mean(self, axis: Union[None, int, Sequence[int]] = None,
             keepdims: Optional[bool] = False) -> 'Tensor':
        axes = _normalize_axes(axis, self.ndim)
        count = int(np.prod([self.shape[ax] for ax in axes])) if axes else 1
        return self.sum(axis=axes, keepdims=keepdims) * (1.0 / max(count, 1))


def as_tensor(value: _ArrayLike) -> Tensor:
    """ Returns value unchanged if it already is a Tensor, a constant leaf Tensor otherwise """
    return value if isinstance(value, Tensor) else Tensor(value)
