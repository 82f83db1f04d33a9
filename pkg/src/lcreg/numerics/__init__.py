# -*- coding: utf-8 -*-

"""
Minimal differentiable-computation core of lcreg.

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

__all__ = ['NonFiniteError', 'NotPSDError', 'NumericsError', 'Rng', 'ShapeError', 'Tensor',
           'TensorFormatError', 'as_tensor', 'cross_entropy_logits', 'finite_diff_gradient',
           'gradient_check', 'load_tensor', 'no_grad', 'relative_error', 'sample_gaussian',
           'save_tensor', 'sigmoid', 'softmax']

from .tensor import Tensor, NumericsError, NonFiniteError, ShapeError, as_tensor, no_grad
from .functional import cross_entropy_logits, sigmoid, softmax
from .gradcheck import finite_diff_gradient, gradient_check, relative_error
from .random import Rng
from .gaussian import NotPSDError, sample_gaussian
from .serialization import TensorFormatError, load_tensor, save_tensor
