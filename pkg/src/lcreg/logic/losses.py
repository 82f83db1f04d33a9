# -*- coding: utf-8 -*-

"""
Combined training objective L = alpha * L_aug + beta * L_recon + gamma * L_cls.

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

__all__ = ['LossTerms', 'aug_enabled', 'combined_loss', 'recon_enabled', 'weighted_sum']

import numpy as np
from typing import Dict, Mapping, Optional, Sequence, Union

from lcreg.numerics import Tensor, as_tensor, cross_entropy_logits

_Term = Union[None, float, Tensor]


def recon_enabled(config: Mapping) -> bool:
    ablation = config['ablation']
    return ablation['use_latent'] and ablation['use_recon_loss']


def aug_enabled(config: Mapping) -> bool:
    """ The latent augmentation arm needs the latent branch, the class feature arm does not """
    ablation = config['ablation']
    if not ablation['use_aug_loss']:
        return False
    return ablation['aug_target'] == 'class_features' or ablation['use_latent']


class LossTerms:
    """ Total loss tensor plus the float values of all components (0.0 for disabled ones) """

    __slots__ = ('total', 'cls', 'recon', 'aug')

    def __init__(self, total: Tensor, cls: float, recon: float, aug: float) -> None:
        self.total = total
        self.cls = cls
        self.recon = recon
        self.aug = aug

    def as_dict(self) -> Dict[str, float]:
        return {'loss': self.total.item(),
                'loss_cls': self.cls,
                'loss_recon': self.recon,
                'loss_aug': self.aug}


def _value(term: _Term) -> float:
    if term is None:
        return 0.0
    return term.item() if isinstance(term, Tensor) else float(term)


def weighted_sum(cls: Union[float, Tensor], recon: _Term, aug: _Term, config: Mapping) -> Tensor:
    """ gamma * cls + beta * recon + alpha * aug. Components disabled by the ablation flags (or
    None) contribute exactly 0. """
    total = config['gamma'] * as_tensor(cls)
    if recon is not None and recon_enabled(config):
        total = total + config['beta'] * as_tensor(recon)
    if aug is not None and aug_enabled(config):
        total = total + config['alpha'] * as_tensor(aug)
    return total


def combined_loss(logits: Tensor, labels: Union[Sequence[int], np.ndarray], recon: _Term,
                  aug: _Term, config: Mapping) -> LossTerms:
    """ Combined objective with the classification term averaged over the batch.

    @param Tensor logits: class logits (B, C)
    @param labels: true labels (B,)
    @param recon: reconstruction loss (scalar) or None
    @param aug: augmentation loss (scalar) or None
    @param config: ExperimentConfig (or equivalent mapping)

    @return LossTerms: total loss tensor and component values
    """
    cls = cross_entropy_logits(logits, np.asarray(labels, dtype=np.int64)).mean()
    total = weighted_sum(cls, recon, aug, config)
    return LossTerms(total,
                     cls=cls.item(),
                     recon=_value(recon) if recon_enabled(config) else 0.0,
                     aug=_value(aug) if aug_enabled(config) else 0.0)
