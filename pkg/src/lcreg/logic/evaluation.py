# -*- coding: utf-8 -*-

"""
Top-1 accuracy overall, per class and on the many/medium/few class splits.

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

__all__ = ['MetricsReport', 'evaluate']

import numpy as np
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

from lcreg.data import LongTailDataset, split_classes

_Splits = Tuple[Sequence[int], Sequence[int], Sequence[int]]


class MetricsReport:
    """ Accuracies in percent. Split accuracies are the mean per-class accuracy of the split classes
    present in the evaluated data (None if there are none). Classes without evaluation samples have
    a per-class accuracy of None.
    """

    def __init__(self, per_class: Sequence[Optional[float]], class_counts: Sequence[int],
                 splits: _Splits) -> None:
        self.per_class = [None if acc is None else float(acc) for acc in per_class]
        self.class_counts = [int(n) for n in class_counts]
        self.splits = tuple(tuple(int(c) for c in split) for split in splits)
        total = sum(self.class_counts)
        correct = sum(n * acc for n, acc in zip(self.class_counts, self.per_class) if acc is not None)
        self.overall_top1 = correct / total if total else None
        self.many_top1, self.medium_top1, self.few_top1 = (self._split_mean(s) for s in self.splits)
        self.losses: Dict[str, float] = dict()

    def _split_mean(self, split: Sequence[int]) -> Optional[float]:
        values = [self.per_class[c] for c in split if self.per_class[c] is not None]
        return float(np.mean(values)) if values else None

    def __repr__(self) -> str:
        def fmt(value):
            return 'n/a' if value is None else f'{value:.2f}'
        return (f'{self.__class__.__name__}(overall={fmt(self.overall_top1)}, '
                f'many={fmt(self.many_top1)}, medium={fmt(self.medium_top1)}, '
                f'few={fmt(self.few_top1)})')

    def as_dict(self, include_per_class: Optional[bool] = True) -> Dict[str, Any]:
        report = {'overall_top1': self.overall_top1,
                  'many_top1': self.many_top1,
                  'medium_top1': self.medium_top1,
                  'few_top1': self.few_top1}
        if include_per_class:
            report['per_class_top1'] = list(self.per_class)
        report.update(self.losses)
        return report


def _logits_of(model: Any, images: np.ndarray) -> np.ndarray:
    if hasattr(model, 'predict_logits'):
        return np.asarray(model.predict_logits(images))
    return np.asarray(model(images))


def evaluate(model: Union[Any, Callable[[np.ndarray], np.ndarray]], dataset: LongTailDataset,
             splits: Optional[_Splits] = None) -> MetricsReport:
    """ Evaluate top-1 accuracy of model on dataset.

    @param model: object with a predict_logits(images) method or a callable images -> logits (B, C)
    @param LongTailDataset dataset: evaluation data
    @param tuple splits: optional, (many, medium, few) class index sets. Defaults to the splits
                         derived from the class counts of dataset itself.

    @return MetricsReport: accuracy report
    """
    if splits is None:
        splits = split_classes(dataset.class_counts)
    covered = sorted(int(c) for split in splits for c in split)
    if covered != list(range(dataset.num_classes)):
        raise ValueError('Class splits must partition all class indices')

    logits = _logits_of(model, dataset.images)
    if logits.shape != (len(dataset), dataset.num_classes):
        raise ValueError(f'Model returned logits of shape {logits.shape}, expected '
                         f'{(len(dataset), dataset.num_classes)}')
    correct = np.argmax(logits, axis=1) == dataset.labels
    per_class: List[Optional[float]] = list()
    for label, count in enumerate(dataset.class_counts):
        if count == 0:
            per_class.append(None)
        else:
            per_class.append(100.0 * np.count_nonzero(correct[dataset.labels == label]) / count)
    return MetricsReport(per_class, dataset.class_counts, splits)
