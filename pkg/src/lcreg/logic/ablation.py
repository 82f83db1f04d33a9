# -*- coding: utf-8 -*-

"""
Component ablation and latent category count sweeps.

Every arm is trained through both stages with the same seeds and evaluated on the same data.

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

__all__ = ['ABLATION_ARMS', 'ABLATION_COLUMNS', 'latent_count_sweep', 'run_ablation',
           'run_arm', 'summarize']

import os
import numpy as np
from typing import Any, Dict, List, Mapping, Optional, Sequence, Union

from lcreg.core.logger import get_logger
from lcreg.core.config import ExperimentConfig
from lcreg.data import LongTailDataset, split_classes
from lcreg.logic.trainer import train_stage1, train_stage2
from lcreg.logic.evaluation import evaluate
from lcreg.util.datastorage import CsvTableStorage, ImageFormat

logger = get_logger(__name__)

ABLATION_ARMS = {
    'baseline': {'use_latent': False, 'use_aug_loss': False, 'use_recon_loss': False,
                 'aug_target': 'latent'},
    'latent_only': {'use_latent': True, 'use_aug_loss': False, 'use_recon_loss': False,
                    'aug_target': 'latent'},
    'latent_recon': {'use_latent': True, 'use_aug_loss': False, 'use_recon_loss': True,
                     'aug_target': 'latent'},
    'latent_aug': {'use_latent': True, 'use_aug_loss': True, 'use_recon_loss': False,
                   'aug_target': 'latent'},
    'full': {'use_latent': True, 'use_aug_loss': True, 'use_recon_loss': True,
             'aug_target': 'latent'},
    # augmentation on per-class pooled features instead of the latent categories
    'isda_class_features': {'use_latent': True, 'use_aug_loss': True, 'use_recon_loss': True,
                            'aug_target': 'class_features'},
}

ABLATION_COLUMNS = ('arm', 'seed', 'num_latents', 'overall_top1', 'many_top1', 'medium_top1',
                    'few_top1')
ABLATION_FILENAME = 'ablation.csv'
ABLATION_SUMMARY_FILENAME = 'ablation_summary.csv'
SWEEP_FILENAME = 'latent_sweep.csv'


def run_arm(config: ExperimentConfig, train_dataset: LongTailDataset,
            test_dataset: Optional[LongTailDataset] = None,
            out_dir: Optional[str] = None) -> Dict[str, Any]:
    """ Train one configuration through both stages and evaluate it.

    @return dict: seed, num_latents and the accuracies of the final model
    """
    test_dataset = train_dataset if test_dataset is None else test_dataset
    stage1 = train_stage1(config, train_dataset, out_dir=out_dir, eval_dataset=test_dataset)
    stage2 = train_stage2(stage1, config, train_dataset, out_dir=out_dir, eval_dataset=test_dataset)
    report = evaluate(stage2.network, test_dataset, split_classes(train_dataset.class_counts))
    row = {'seed': config['seed'], 'num_latents': config['num_latents']}
    row.update(report.as_dict(include_per_class=False))
    return row


def _row_values(row: Mapping[str, Any]) -> tuple:
    return tuple(row.get(column) for column in ABLATION_COLUMNS)


def summarize(rows: Sequence[Mapping[str, Any]]) -> List[Dict[str, Any]]:
    """ Mean accuracies per (arm, num_latents) over seeds. Splits without classes stay None. """
    groups = dict()
    for row in rows:
        groups.setdefault((row['arm'], row['num_latents']), list()).append(row)
    summary = list()
    for (arm, num_latents), group in groups.items():
        entry = {'arm': arm, 'seed': None, 'num_latents': num_latents}
        for key in ABLATION_COLUMNS[3:]:
            values = [r[key] for r in group if r[key] is not None]
            entry[key] = float(np.mean(values)) if values else None
        summary.append(entry)
    return summary


def _save_table(rows: Sequence[Mapping[str, Any]], out_dir: str, filename: str) -> str:
    storage = CsvTableStorage(root_dir=out_dir, image_format=ImageFormat.PNG)
    return storage.save_data([_row_values(row) for row in rows], filename,
                             column_headers=ABLATION_COLUMNS)


def run_ablation(config: Union[ExperimentConfig, Mapping], train_dataset: LongTailDataset,
                 test_dataset: Optional[LongTailDataset] = None,
                 arms: Optional[Union[Sequence[str], Mapping[str, Mapping]]] = None,
                 seeds: Optional[Sequence[int]] = None,
                 out_dir: Optional[str] = None) -> List[Dict[str, Any]]:
    """ Run a grid of ablation arms with shared seeds.

    @param config: base configuration (its ablation section is replaced per arm)
    @param LongTailDataset train_dataset: long-tailed training data
    @param LongTailDataset test_dataset: optional, evaluation data (default: training data)
    @param arms: arm names from ABLATION_ARMS or a mapping name -> ablation flags
                 (default: all of ABLATION_ARMS)
    @param seeds: seeds shared by all arms (default: the config seed)
    @param str out_dir: optional, receives "ablation.csv" (one row per arm and seed),
                        "ablation_summary.csv" (seed means) and one run directory per arm/seed

    @return list: one row dict per arm and seed
    """
    config = config if isinstance(config, ExperimentConfig) else ExperimentConfig(config)
    if arms is None:
        arms = dict(ABLATION_ARMS)
    elif not isinstance(arms, Mapping):
        unknown = [name for name in arms if name not in ABLATION_ARMS]
        if unknown:
            raise KeyError(f'Unknown ablation arms: {", ".join(unknown)}')
        arms = {name: ABLATION_ARMS[name] for name in arms}
    seeds = [config['seed']] if seeds is None else [int(seed) for seed in seeds]

    rows = list()
    for name, flags in arms.items():
        for seed in seeds:
            arm_config = config.updated(seed=seed, ablation=dict(flags))
            run_dir = None if out_dir is None else os.path.join(out_dir, f'{name}_seed{seed:d}')
            logger.info(f'Ablation arm "{name}" with seed {seed:d}')
            row = run_arm(arm_config, train_dataset, test_dataset, run_dir)
            row['arm'] = name
            rows.append(row)
    if out_dir is not None:
        _save_table(rows, out_dir, ABLATION_FILENAME)
        _save_table(summarize(rows), out_dir, ABLATION_SUMMARY_FILENAME)
    return rows


def latent_count_sweep(config: Union[ExperimentConfig, Mapping], train_dataset: LongTailDataset,
                       latent_counts: Sequence[int],
                       test_dataset: Optional[LongTailDataset] = None,
                       seeds: Optional[Sequence[int]] = None,
                       out_dir: Optional[str] = None) -> List[Dict[str, Any]]:
    """ Train the configuration for every latent category count in latent_counts (and every seed).
    Writes "latent_sweep.csv" to out_dir if given. """
    config = config if isinstance(config, ExperimentConfig) else ExperimentConfig(config)
    seeds = [config['seed']] if seeds is None else [int(seed) for seed in seeds]
    rows = list()
    for num_latents in latent_counts:
        for seed in seeds:
            run_config = config.updated(seed=seed, num_latents=int(num_latents))
            run_dir = None if out_dir is None else os.path.join(
                out_dir, f'latents{int(num_latents):d}_seed{seed:d}')
            logger.info(f'Latent count sweep: M={int(num_latents):d}, seed {seed:d}')
            row = run_arm(run_config, train_dataset, test_dataset, run_dir)
            row['arm'] = 'sweep'
            rows.append(row)
    if out_dir is not None:
        _save_table(rows, out_dir, SWEEP_FILENAME)
    return rows
