# -*- coding: utf-8 -*-

"""
Command line interface of lcreg.

Subcommands: generate-data, train, eval, gradcheck, ablate and histogram.
Exit codes: 0 on success, 1 on usage errors (including missing or invalid config files) and 2 on
runtime failures.

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

__all__ = ['EXIT_OK', 'EXIT_RUNTIME_ERROR', 'EXIT_USAGE_ERROR', 'SUMMARY_COLUMNS', 'UsageError',
           'build_parser', 'main']

import os
import sys
import logging
import argparse
from typing import Optional, Sequence, Tuple

from jsonschema import ValidationError

from lcreg.core.logger import close_rotating_file_handler, get_logger, init_rotating_file_handler
from lcreg.core.logger import set_log_level
from lcreg.core.config import ConfigFormatError, ExperimentConfig
from lcreg.data import DatasetError, ImbalanceProfile, LongTailDataset, LongTailSpec
from lcreg.data import load_dataset, save_dataset, split_classes, synth_train_test
from lcreg.model import CheckpointError, load_checkpoint, load_network
from lcreg.numerics import NumericsError
from lcreg.logic import ABLATION_ARMS, METRICS_FILENAME, DivergenceError, evaluate
from lcreg.logic import export_histogram, gradcheck_suite, latent_count_sweep, run_ablation
from lcreg.logic import train_stage1, train_stage2
from lcreg.util.datastorage import CsvTableStorage, ImageFormat, JsonLinesStorage
from lcreg.util.helpers import csv_2_list
from lcreg.util.paths import get_default_run_dir, get_timestamp_dirname

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_USAGE_ERROR = 1
EXIT_RUNTIME_ERROR = 2

SUMMARY_FILENAME = 'summary.csv'
SUMMARY_COLUMNS = ('run', 'seed', 'stage', 'step', 'overall_top1', 'many_top1', 'medium_top1',
                   'few_top1')
TRAIN_DIRNAME = 'train'
TEST_DIRNAME = 'test'


class UsageError(Exception):
    """ Invalid command line or configuration """
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f'{self.prog}: error: {message}')


def _uint64(value: str) -> int:
    try:
        number = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f'invalid seed "{value}"') from None
    if not 0 <= number < 2**64:
        raise argparse.ArgumentTypeError(f'seed {number:d} outside [0, 2^64)')
    return number


def _str_list(value: str) -> list:
    return csv_2_list(value, str)


def _int_list(value: str) -> list:
    try:
        return [int(v) for v in csv_2_list(value)]
    except ValueError:
        raise argparse.ArgumentTypeError(f'invalid integer list "{value}"') from None


def build_parser() -> argparse.ArgumentParser:
    common = _ArgumentParser(add_help=False)
    common.add_argument('-c', '--config', default=None,
                        help='Path to the experiment configuration file (.json, .yaml or .yml).')
    common.add_argument('-s', '--seed', type=_uint64, default=None,
                        help='Random seed overriding the configured one.')
    common.add_argument('-o', '--out', default=None,
                        help='Output directory (default: a new timestamped directory in '
                             '"<user_home>/lcreg/runs/").')
    common.add_argument('-d', '--debug', action='store_true', help='Log debug messages.')

    parser = _ArgumentParser(prog='lcreg', description='Long-tailed recognition with latent '
                                                       'category regularization.')
    subparsers = parser.add_subparsers(dest='command', parser_class=_ArgumentParser)
    subparsers.required = True

    gen = subparsers.add_parser('generate-data', parents=[common],
                                help='Render a synthetic long-tailed train set and a balanced test '
                                     'set into OUT/train and OUT/test.')
    gen.add_argument('--classes', type=int, default=10, help='Number of classes (>= 3).')
    gen.add_argument('--if', dest='imbalance_factor', type=float, default=100.0,
                     help='Imbalance factor n_max / n_min (>= 1).')
    gen.add_argument('--nmax', type=int, default=500, help='Samples of the largest class.')
    gen.add_argument('--profile', choices=[p.value for p in ImbalanceProfile],
                     default=ImbalanceProfile.EXP.value, help='Class count profile.')
    gen.add_argument('--noise', type=float, default=0.5, help='Pixel noise standard deviation.')
    gen.add_argument('--test-per-class', type=int, default=50,
                     help='Samples per class of the balanced test set.')
    gen.add_argument('--channels', type=int, default=1, help='Image channels.')
    gen.add_argument('--part-size', type=int, default=4, help='Edge length of the part templates.')

    train = subparsers.add_parser('train', parents=[common],
                                  help='Train both stages and write metrics.jsonl, summary.csv and '
                                       'the stage checkpoints to OUT.')
    train.add_argument('--data', required=True,
                       help='Dataset directory (or a directory with "train" and "test" subdirs).')

    ev = subparsers.add_parser('eval', parents=[common],
                               help='Evaluate a checkpoint and append the result to '
                                    'OUT/metrics.jsonl.')
    ev.add_argument('--checkpoint', required=True, help='Checkpoint directory.')
    ev.add_argument('--data', required=True,
                    help='Dataset directory (or a directory with "train" and "test" subdirs).')

    grad = subparsers.add_parser('gradcheck', parents=[common],
                                 help='Compare analytic and finite difference gradients.')
    grad.add_argument('--configs', type=int, default=10,
                      help='Random configurations per checked objective.')

    abl = subparsers.add_parser('ablate', parents=[common],
                                help='Run component ablation arms (or a latent count sweep).')
    abl.add_argument('--data', required=True,
                     help='Dataset directory (or a directory with "train" and "test" subdirs).')
    abl.add_argument('--arms', type=_str_list, default=None,
                     help='Comma separated arm names (default: all arms).')
    abl.add_argument('--seeds', type=_int_list, default=None,
                     help='Comma separated seeds shared by all arms.')
    abl.add_argument('--latent-counts', type=_int_list, default=None,
                     help='Comma separated latent category counts; runs a sweep instead of arms.')

    hist = subparsers.add_parser('histogram', parents=[common],
                                 help='Export the latent category weight histogram of one image.')
    hist.add_argument('--checkpoint', required=True, help='Checkpoint directory.')
    hist.add_argument('--data', required=True, help='Dataset directory.')
    hist.add_argument('--index', type=int, default=0, help='Sample index in the dataset.')
    hist.add_argument('--name', default=None,
                      help='Image name used in the output file name (default: "sample<index>").')
    hist.add_argument('--format', choices=[f.name.lower() for f in ImageFormat], default='png',
                      help='Thumbnail image format.')
    return parser


def _load_config(args) -> ExperimentConfig:
    if args.config is None:
        config = ExperimentConfig()
    else:
        try:
            config = ExperimentConfig.from_file(args.config)
        except FileNotFoundError:
            raise UsageError(f'Config file not found: "{args.config}"') from None
        except (ValidationError, ConfigFormatError) as err:
            message = err.message if isinstance(err, ValidationError) else str(err)
            raise UsageError(f'Invalid config file "{args.config}": {message}') from None
    if args.seed is not None:
        config['seed'] = args.seed
    return config


def _out_dir(args, nametag: str) -> str:
    if args.out is None:
        return os.path.join(get_default_run_dir(create_missing=True),
                            get_timestamp_dirname(nametag=nametag))
    return args.out


def _load_splits(path: str) -> Tuple[LongTailDataset, Optional[LongTailDataset]]:
    """ (train, test) from a directory holding "train"/"test" subdirectories, else (dataset, None) """
    train_dir = os.path.join(path, TRAIN_DIRNAME)
    if os.path.isdir(train_dir):
        test_dir = os.path.join(path, TEST_DIRNAME)
        test = load_dataset(test_dir) if os.path.isdir(test_dir) else None
        return load_dataset(train_dir), test
    return load_dataset(path), None


def _print_report(report) -> None:
    print(f'overall top-1 {report.overall_top1:.2f} %')
    for name, value in (('many', report.many_top1), ('medium', report.medium_top1),
                        ('few', report.few_top1)):
        print(f'{name:>8s} top-1 ' + ('n/a' if value is None else f'{value:.2f} %'))


def _cmd_generate_data(args) -> int:
    if args.classes < 3:
        raise UsageError('--classes must be >= 3')
    seed = 0 if args.seed is None else args.seed
    try:
        spec = LongTailSpec(args.classes, args.nmax, args.imbalance_factor, seed=seed,
                            profile=args.profile)
    except ValueError as err:
        raise UsageError(str(err)) from None
    out_dir = _out_dir(args, 'data')
    train, test, _ = synth_train_test(spec, args.noise, args.test_per_class,
                                      channels=args.channels, part_size=args.part_size)
    save_dataset(train, os.path.join(out_dir, TRAIN_DIRNAME))
    save_dataset(test, os.path.join(out_dir, TEST_DIRNAME))
    print(f'class counts: {", ".join(str(n) for n in train.class_counts)}')
    print(f'datasets written to "{out_dir}"')
    return EXIT_OK


def _cmd_train(args) -> int:
    config = _load_config(args)
    out_dir = _out_dir(args, 'train')
    train, test = _load_splits(args.data)
    os.makedirs(out_dir, exist_ok=True)
    init_rotating_file_handler(path=out_dir)
    try:
        config.dump(os.path.join(out_dir, 'config.json'))
        stage1 = train_stage1(config, train, out_dir=out_dir, eval_dataset=test)
        stage2 = train_stage2(stage1, config, train, out_dir=out_dir, eval_dataset=test)
    finally:
        close_rotating_file_handler()
    report = evaluate(stage2.network, train if test is None else test,
                      split_classes(train.class_counts))
    CsvTableStorage(root_dir=out_dir).append_rows(
        [(os.path.basename(os.path.normpath(out_dir)), config['seed'], 2, stage2.step,
          report.overall_top1, report.many_top1, report.medium_top1, report.few_top1)],
        SUMMARY_FILENAME,
        column_headers=SUMMARY_COLUMNS
    )
    _print_report(report)
    print(f'run written to "{out_dir}"')
    return EXIT_OK


def _cmd_eval(args) -> int:
    checkpoint = load_checkpoint(args.checkpoint)
    network = load_network(checkpoint)
    train, test = _load_splits(args.data)
    report = evaluate(network, train if test is None else test, split_classes(train.class_counts))
    out_dir = _out_dir(args, 'eval')
    row = {'stage': 'eval', 'step': checkpoint.step, 'checkpoint_stage': checkpoint.stage}
    row.update(report.as_dict())
    JsonLinesStorage(root_dir=out_dir).append_row(row, METRICS_FILENAME)
    _print_report(report)
    return EXIT_OK


def _cmd_gradcheck(args) -> int:
    report = gradcheck_suite(seed=0 if args.seed is None else args.seed, num_configs=args.configs)
    for name, value in report.max_errors.items():
        print(f'{name:>12s}: max relative error {value:.3e}')
    print(f'max relative error {report.max_error:.3e}')
    return EXIT_OK if report.passed else EXIT_RUNTIME_ERROR


def _cmd_ablate(args) -> int:
    config = _load_config(args)
    out_dir = _out_dir(args, 'ablation')
    train, test = _load_splits(args.data)
    if args.arms:
        unknown = [name for name in args.arms if name not in ABLATION_ARMS]
        if unknown:
            raise UsageError(f'Unknown ablation arms: {", ".join(unknown)}')
    init_rotating_file_handler(path=out_dir)
    try:
        if args.latent_counts:
            rows = latent_count_sweep(config, train, args.latent_counts, test_dataset=test,
                                      seeds=args.seeds, out_dir=out_dir)
        else:
            rows = run_ablation(config, train, test, arms=args.arms, seeds=args.seeds,
                                out_dir=out_dir)
    finally:
        close_rotating_file_handler()
    for row in rows:
        few = 'n/a' if row['few_top1'] is None else f'{row["few_top1"]:.2f}'
        print(f'{row["arm"]:>20s} seed {row["seed"]:d} M={row["num_latents"]:d}: overall '
              f'{row["overall_top1"]:.2f}, few {few}')
    return EXIT_OK


def _cmd_histogram(args) -> int:
    network = load_network(load_checkpoint(args.checkpoint))
    dataset = load_dataset(args.data)
    if not 0 <= args.index < len(dataset):
        raise UsageError(f'--index {args.index:d} outside [0, {len(dataset):d})')
    name = f'sample{args.index:d}' if args.name is None else args.name
    weights = export_histogram(network, dataset.images[args.index], out_dir=_out_dir(args, 'hist'),
                               name=name, image_format=ImageFormat[args.format.upper()])
    for category, weight in enumerate(weights):
        print(f'{category:d},{weight:.6f}')
    return EXIT_OK


_COMMANDS = {'generate-data': _cmd_generate_data,
             'train': _cmd_train,
             'eval': _cmd_eval,
             'gradcheck': _cmd_gradcheck,
             'ablate': _cmd_ablate,
             'histogram': _cmd_histogram}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """ Run the command line interface and return the process exit code """
    try:
        args = build_parser().parse_args(argv)
    except UsageError as err:
        print(err, file=sys.stderr)
        return EXIT_USAGE_ERROR
    except SystemExit as err:
        # --help
        return EXIT_OK if not err.code else EXIT_USAGE_ERROR
    if args.debug:
        set_log_level(logging.DEBUG)
    try:
        return _COMMANDS[args.command](args)
    except UsageError as err:
        print(f'lcreg {args.command}: error: {err}', file=sys.stderr)
        return EXIT_USAGE_ERROR
    except (DatasetError, CheckpointError, DivergenceError, NumericsError, OSError, ValueError,
            KeyError) as err:
        logger.exception(f'lcreg {args.command} failed')
        print(f'lcreg {args.command}: failed: {err}', file=sys.stderr)
        return EXIT_RUNTIME_ERROR


if __name__ == '__main__':
    sys.exit(main())
