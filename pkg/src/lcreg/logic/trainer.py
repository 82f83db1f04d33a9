# -*- coding: utf-8 -*-

"""
Two-stage decoupled training.

Stage 1 trains the complete network with instance-uniform sampling on the long-tailed data using
the combined objective. Latent category statistics are updated after every optimizer step and the
augmentation strength ramps up linearly over all stage 1 iterations.
Stage 2 freezes everything but the final linear classifier and retrains it under class-balanced
resampling.

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

__all__ = ['DivergenceError', 'METRICS_FILENAME', 'TrainingResult', 'train_stage1', 'train_stage2']

import os
import math
import numpy as np
from typing import Any, Dict, List, Mapping, Optional, Union

from lcreg.core.logger import get_logger
from lcreg.core.config import ExperimentConfig
from lcreg.numerics import NonFiniteError, Rng, Tensor, cross_entropy_logits
from lcreg.data import InstanceSampler, LongTailDataset, resample_class_balanced, split_classes
from lcreg.model import Checkpoint, CheckpointError, LCRegNetwork, classify, load_checkpoint
from lcreg.model import load_network, recon_loss, save_checkpoint
from lcreg.isda import AugSchedule, RunningStats, batch_observation, implicit_aug_loss
from lcreg.isda import lambda_at, latent_aug_loss, observe_iteration
from lcreg.logic.optimizer import SGD
from lcreg.logic.losses import LossTerms, aug_enabled, combined_loss, recon_enabled
from lcreg.logic.evaluation import evaluate
from lcreg.util.datastorage import ImageFormat, JsonLinesStorage

logger = get_logger(__name__)

METRICS_FILENAME = 'metrics.jsonl'
STAGE1_DIRNAME = 'stage1'
STAGE2_DIRNAME = 'stage2'

# Independent random streams derived from the experiment seed
_RNG_MODEL = 1
_RNG_STAGE1_SAMPLER = 2
_RNG_STAGE2_SAMPLER = 3


class DivergenceError(RuntimeError):
    """ Raised when the training loss (or a parameter) becomes non-finite """

    def __init__(self, step: int, message: Optional[str] = None) -> None:
        self.step = int(step)
        super().__init__(f'Training diverged at step {self.step:d}' if message is None else message)


class TrainingResult:
    """ Trained network, latent (and class feature) statistics and the per-epoch metric rows """

    def __init__(self, network: LCRegNetwork, config: ExperimentConfig, stats: RunningStats,
                 class_stats: Optional[RunningStats], history: List[Dict[str, Any]], step: int,
                 stage: int, checkpoint_dir: Optional[str] = None) -> None:
        self.network = network
        self.config = config
        self.stats = stats
        self.class_stats = class_stats
        self.history = history
        self.step = step
        self.stage = stage
        self.checkpoint_dir = checkpoint_dir

    def stats_arrays(self) -> Dict[str, np.ndarray]:
        arrays = self.stats.to_arrays('stats')
        if self.class_stats is not None:
            arrays.update(self.class_stats.to_arrays('class_stats'))
        return arrays

    def to_checkpoint(self) -> Checkpoint:
        """ In-memory checkpoint (copies of all tensors) """
        manifest = {'stage': self.stage,
                    'step': self.step,
                    'num_classes': self.network.num_classes,
                    'input_shape': list(self.network.input_shape),
                    'config': self.config.config_map}
        return Checkpoint(self.checkpoint_dir, manifest, self.network.state_arrays(),
                          self.stats_arrays())

    def save(self, directory: str) -> str:
        self.checkpoint_dir = directory
        return save_checkpoint(directory, self.network, self.config, self.step, self.stage,
                               self.stats_arrays())


def _as_config(config: Union[ExperimentConfig, Mapping]) -> ExperimentConfig:
    return config if isinstance(config, ExperimentConfig) else ExperimentConfig(config)


def _metrics_storage(out_dir: Optional[str]) -> Optional[JsonLinesStorage]:
    if out_dir is None:
        return None
    return JsonLinesStorage(root_dir=out_dir, image_format=ImageFormat.PNG)


def _epoch_row(stage: int, epoch: int, step: int, loss_sums: Mapping[str, float], num_steps: int,
               learning_rate: float, network: LCRegNetwork, eval_dataset: LongTailDataset,
               splits) -> Dict[str, Any]:
    row = {'stage': stage, 'epoch': epoch, 'step': step, 'learning_rate': learning_rate}
    row.update({key: value / max(num_steps, 1) for key, value in loss_sums.items()})
    report = evaluate(network, eval_dataset, splits)
    row.update(report.as_dict(include_per_class=False))
    return row


def _observe_classes(class_stats: RunningStats, pooled: np.ndarray, labels: np.ndarray) -> None:
    for label in np.unique(labels):
        mean, cov, count = batch_observation(pooled[labels == label], class_stats.diagonal)
        class_stats.update(int(label), mean, cov, count)


def _stage1_step(network: LCRegNetwork, config: ExperimentConfig, optimizer: SGD,
                 stats: RunningStats, class_stats: Optional[RunningStats], images: Tensor,
                 labels: np.ndarray, lam: float) -> LossTerms:
    optimizer.zero_grad()
    network.zero_grad()
    out = network.forward(images)
    recon = None
    if recon_enabled(config):
        recon = recon_loss(out.flat_reconstructed(), out.flat_features())
    aug = None
    if aug_enabled(config):
        if config['ablation']['aug_target'] == 'latent':
            aug = latent_aug_loss(network.pool, stats, lam)
        else:
            _observe_classes(class_stats, out.pooled.data, labels)
            aug = implicit_aug_loss(out.pooled, labels, network.decoder.cls_weight,
                                    network.decoder.cls_bias, class_stats.covariances, lam)
    terms = combined_loss(out.logits, labels, recon, aug, config)
    if not np.isfinite(terms.total.item()):
        raise NonFiniteError('non-finite loss')
    terms.total.backward()
    optimizer.step()
    return terms


def train_stage1(config: Union[ExperimentConfig, Mapping], dataset: LongTailDataset,
                 out_dir: Optional[str] = None,
                 eval_dataset: Optional[LongTailDataset] = None) -> TrainingResult:
    """ Stage 1: train encoder, latent pool and decoder on the long-tailed data.

    @param config: experiment configuration
    @param LongTailDataset dataset: long-tailed training data
    @param str out_dir: optional, run directory receiving "metrics.jsonl" (rewritten) and the
                        checkpoint directory "stage1"
    @param LongTailDataset eval_dataset: optional, data evaluated after every epoch
                                         (default: the training data)

    @return TrainingResult: stage 1 result
    """
    config = _as_config(config)
    if len(dataset) == 0:
        raise ValueError('Training dataset is empty')
    eval_dataset = dataset if eval_dataset is None else eval_dataset
    splits = split_classes(dataset.class_counts)
    rng = Rng(config['seed'])
    network = LCRegNetwork.from_config(config, dataset.input_shape, dataset.num_classes,
                                       rng=rng.spawn(_RNG_MODEL))
    diagonal = config.covariance_diagonal
    stats = RunningStats(network.num_latents, network.feature_dim, diagonal=diagonal)
    class_stats = None
    if config['ablation']['aug_target'] == 'class_features':
        class_stats = RunningStats(dataset.num_classes, network.feature_dim, diagonal=diagonal)

    sampler = InstanceSampler(len(dataset), config['batch_size'], rng.spawn(_RNG_STAGE1_SAMPLER))
    epochs = config['stage1_epochs']
    total_steps = epochs * sampler.batches_per_epoch
    opt_cfg = config['optimizer']
    optimizer = SGD(network.stage1_parameters(),
                    learning_rate=opt_cfg['learning_rate'],
                    momentum=opt_cfg['momentum'],
                    weight_decay=opt_cfg['weight_decay'],
                    schedule=opt_cfg['schedule'],
                    total_steps=total_steps)
    schedule = AugSchedule(config['lambda0'], max(total_steps, 1))
    storage = _metrics_storage(out_dir)
    if storage is not None:
        storage.new_file(METRICS_FILENAME)

    logger.info(f'Stage 1: {epochs:d} epochs x {sampler.batches_per_epoch:d} steps on '
                f'{len(dataset):d} samples')
    history = list()
    step = 0
    for epoch in range(1, epochs + 1):
        loss_sums = {'loss': 0.0, 'loss_cls': 0.0, 'loss_recon': 0.0, 'loss_aug': 0.0}
        learning_rate = optimizer.current_learning_rate()
        batches = sampler.epoch()
        for indices in batches:
            images, labels = dataset.batch(indices)
            lam = lambda_at(schedule, step)
            try:
                terms = _stage1_step(network, config, optimizer, stats, class_stats, images,
                                     labels, lam)
            except NonFiniteError as err:
                logger.error(f'Stage 1 diverged at step {step:d}: {err}')
                raise DivergenceError(step) from err
            if network.use_latent:
                observe_iteration(stats, network.pool, len(indices), step)
            for key, value in terms.as_dict().items():
                loss_sums[key] += value
            step += 1
        row = _epoch_row(1, epoch, step, loss_sums, len(batches), learning_rate, network,
                         eval_dataset, splits)
        row['lambda'] = lambda_at(schedule, step)
        history.append(row)
        if storage is not None:
            storage.append_row(row, METRICS_FILENAME)
        logger.info(f'Stage 1 epoch {epoch:d}/{epochs:d}: loss {row["loss"]:.4f} '
                    f'(cls {row["loss_cls"]:.4f}, recon {row["loss_recon"]:.4f}, '
                    f'aug {row["loss_aug"]:.4f}), overall top-1 {row["overall_top1"]:.2f}')

    result = TrainingResult(network, config, stats, class_stats, history, step, stage=1)
    if out_dir is not None:
        result.save(os.path.join(out_dir, STAGE1_DIRNAME))
    return result


def _resolve_checkpoint(checkpoint: Union[str, Checkpoint, TrainingResult]) -> Checkpoint:
    if isinstance(checkpoint, TrainingResult):
        return checkpoint.to_checkpoint()
    if isinstance(checkpoint, Checkpoint):
        return checkpoint
    return load_checkpoint(checkpoint)


def train_stage2(checkpoint: Union[str, Checkpoint, TrainingResult],
                 config: Optional[Union[ExperimentConfig, Mapping]], dataset: LongTailDataset,
                 out_dir: Optional[str] = None,
                 eval_dataset: Optional[LongTailDataset] = None) -> TrainingResult:
    """ Stage 2: retrain the final linear classifier under class-balanced resampling.

    @param checkpoint: stage 1 checkpoint (directory path, Checkpoint or TrainingResult)
    @param config: configuration providing the stage 2 settings (default: checkpoint config)
    @param LongTailDataset dataset: long-tailed training data
    @param str out_dir: optional, run directory ("metrics.jsonl" is appended to, the checkpoint is
                        written to "stage2")
    @param LongTailDataset eval_dataset: optional, data evaluated after every epoch

    @return TrainingResult: stage 2 result
    """
    checkpoint = _resolve_checkpoint(checkpoint)
    network = load_network(checkpoint)
    config = checkpoint.config if config is None else _as_config(config)
    if tuple(dataset.input_shape) != tuple(network.input_shape) or \
            dataset.num_classes != network.num_classes:
        raise ValueError(f'Dataset ({dataset.num_classes:d} classes, {dataset.input_shape}) does not '
                         f'match the checkpoint network ({network.num_classes:d} classes, '
                         f'{network.input_shape})')
    try:
        stats = RunningStats.from_arrays(checkpoint.stats, 'stats')
    except KeyError as err:
        raise CheckpointError(f'Checkpoint lacks latent statistics: {err}',
                              ['stats_n', 'stats_mu', 'stats_sigma']) from None
    class_stats = None
    if 'class_stats_n' in checkpoint.stats:
        class_stats = RunningStats.from_arrays(checkpoint.stats, 'class_stats')

    eval_dataset = dataset if eval_dataset is None else eval_dataset
    splits = split_classes(dataset.class_counts)
    epochs = config['stage2_epochs']
    batch_size = config['batch_size']
    batches_per_epoch = math.ceil(len(dataset) / batch_size)
    opt_cfg = config['optimizer']
    optimizer = SGD(network.classifier_parameters(),
                    learning_rate=opt_cfg['stage2_learning_rate'],
                    momentum=opt_cfg['momentum'],
                    weight_decay=opt_cfg['weight_decay'],
                    schedule=opt_cfg['schedule'],
                    total_steps=epochs * batches_per_epoch)
    sampler = resample_class_balanced(dataset, Rng(config['seed']).spawn(_RNG_STAGE2_SAMPLER))
    storage = _metrics_storage(out_dir)

    # Everything up to the classifier input is frozen, so the classifier inputs are fixed
    pooled = network.pooled_features(dataset.images) if epochs > 0 else None
    logger.info(f'Stage 2: {epochs:d} epochs x {batches_per_epoch:d} class-balanced steps')
    history = list()
    step = checkpoint.step
    for epoch in range(1, epochs + 1):
        loss_sum = 0.0
        learning_rate = optimizer.current_learning_rate()
        batches = sampler.batches(len(dataset), batch_size)
        for indices in batches:
            optimizer.zero_grad()
            logits = classify(Tensor(pooled[indices]), network.decoder)
            try:
                loss = cross_entropy_logits(logits, dataset.labels[indices]).mean()
                loss.backward()
                optimizer.step()
            except NonFiniteError as err:
                logger.error(f'Stage 2 diverged at step {step:d}: {err}')
                raise DivergenceError(step) from err
            loss_sum += loss.item()
            step += 1
        row = _epoch_row(2, epoch, step, {'loss': loss_sum, 'loss_cls': loss_sum}, len(batches),
                         learning_rate, network, eval_dataset, splits)
        history.append(row)
        if storage is not None:
            storage.append_row(row, METRICS_FILENAME)
        logger.info(f'Stage 2 epoch {epoch:d}/{epochs:d}: loss {row["loss"]:.4f}, overall top-1 '
                    f'{row["overall_top1"]:.2f}')

    result = TrainingResult(network, config, stats, class_stats, history, step, stage=2)
    if out_dir is not None:
        result.save(os.path.join(out_dir, STAGE2_DIRNAME))
    return result
