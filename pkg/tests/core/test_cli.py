# -*- coding: utf-8 -*-

"""
This file contains unit tests for the lcreg command line interface and its exit codes.

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

import io
import os
import json
import tempfile
import unittest
from contextlib import redirect_stderr, redirect_stdout

from lcreg.core.cli import EXIT_OK, EXIT_RUNTIME_ERROR, EXIT_USAGE_ERROR, main
from lcreg.util.datastorage import CsvTableStorage, JsonLinesStorage


def run_cli(*argv):
    stdout, stderr = io.StringIO(), io.StringIO()
    with redirect_stdout(stdout), redirect_stderr(stderr):
        code = main(list(argv))
    return code, stdout.getvalue(), stderr.getvalue()


class TestCliUsage(unittest.TestCase):

    def setUp(self):
        self.tmp_dir = tempfile.TemporaryDirectory()

    def tearDown(self):
        self.tmp_dir.cleanup()

    def test_help(self):
        code, out, _ = run_cli('--help')
        self.assertEqual(code, EXIT_OK)
        self.assertIn('generate-data', out)

    def test_unknown_flag(self):
        code, _, err = run_cli('gradcheck', '--bogus')
        self.assertEqual(code, EXIT_USAGE_ERROR)
        self.assertIn('usage:', err)

    def test_missing_subcommand(self):
        self.assertEqual(run_cli()[0], EXIT_USAGE_ERROR)

    def test_invalid_seed(self):
        self.assertEqual(run_cli('gradcheck', '--seed', '-3')[0], EXIT_USAGE_ERROR)

    def test_missing_config_names_path(self):
        path = os.path.join(self.tmp_dir.name, 'c.json')
        code, _, err = run_cli('train', '--config', path, '--data', self.tmp_dir.name,
                               '--out', self.tmp_dir.name)
        self.assertEqual(code, EXIT_USAGE_ERROR)
        self.assertIn(path, err)

    def test_invalid_config(self):
        path = os.path.join(self.tmp_dir.name, 'c.json')
        with open(path, 'w') as file:
            json.dump({'epochs': 3}, file)
        code, _, err = run_cli('train', '-c', path, '--data', self.tmp_dir.name)
        self.assertEqual(code, EXIT_USAGE_ERROR)
        self.assertIn(path, err)

    def test_malformed_yaml_config(self):
        path = os.path.join(self.tmp_dir.name, 'c.yaml')
        with open(path, 'w') as file:
            file.write('seed: [1, 2\n')
        code, _, err = run_cli('train', '-c', path, '--data', self.tmp_dir.name)
        self.assertEqual(code, EXIT_USAGE_ERROR)
        self.assertIn(path, err)

    def test_missing_dataset(self):
        code, _, _ = run_cli('train', '--data', os.path.join(self.tmp_dir.name, 'nothing'),
                             '--out', os.path.join(self.tmp_dir.name, 'run'))
        self.assertEqual(code, EXIT_RUNTIME_ERROR)

    def test_too_few_classes(self):
        code, _, _ = run_cli('generate-data', '--classes', '2', '--out', self.tmp_dir.name)
        self.assertEqual(code, EXIT_USAGE_ERROR)

    def test_gradcheck(self):
        code, out, _ = run_cli('gradcheck', '--seed', '7', '--configs', '2')
        self.assertEqual(code, EXIT_OK)
        self.assertIn('max relative error', out)


class TestCliPipeline(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.tmp_dir = tempfile.TemporaryDirectory()
        root = cls.tmp_dir.name
        cls.data_dir = os.path.join(root, 'data')
        cls.run_dir = os.path.join(root, 'run')
        cls.config_path = os.path.join(root, 'c.yaml')
        with open(cls.config_path, 'w') as file:
            file.write('num_latents: 4\nfeature_dim: 8\nstage1_epochs: 1\nstage2_epochs: 1\n'
                       'encoder:\n  hidden_dims: [8]\n')
        cls.generate = run_cli('generate-data', '--classes', '10', '--if', '100', '--nmax', '500',
                               '--test-per-class', '5', '--seed', '1', '--out', cls.data_dir)
        cls.train = run_cli('train', '-c', cls.config_path, '--data', cls.data_dir,
                            '--out', cls.run_dir)

    @classmethod
    def tearDownClass(cls):
        cls.tmp_dir.cleanup()

    def test_generate_data(self):
        code, out, _ = self.generate
        self.assertEqual(code, EXIT_OK)
        self.assertIn('500', out)
        for split in ('train', 'test'):
            self.assertTrue(os.path.isdir(os.path.join(self.data_dir, split)))

    def test_train(self):
        code, out, err = self.train
        self.assertEqual(code, EXIT_OK, msg=err)
        self.assertIn('overall top-1', out)
        rows = JsonLinesStorage(root_dir=self.run_dir).load_data('metrics.jsonl')
        self.assertEqual([row['stage'] for row in rows], [1, 2])
        for key in ('many_top1', 'medium_top1', 'few_top1'):
            self.assertIn(key, rows[-1])
        headers, table = CsvTableStorage(root_dir=self.run_dir).load_data('summary.csv')
        self.assertEqual(headers[0], 'run')
        self.assertEqual(len(table), 1)
        for name in ('config.json', 'lcreg.log'):
            self.assertTrue(os.path.isfile(os.path.join(self.run_dir, name)), msg=name)

    def test_eval(self):
        out_dir = os.path.join(self.tmp_dir.name, 'eval')
        code, _, err = run_cli('eval', '--checkpoint', os.path.join(self.run_dir, 'stage2'),
                               '--data', self.data_dir, '--out', out_dir)
        self.assertEqual(code, EXIT_OK, msg=err)
        rows = JsonLinesStorage(root_dir=out_dir).load_data('metrics.jsonl')
        self.assertEqual(rows[-1]['stage'], 'eval')
        self.assertEqual(len(rows[-1]['per_class_top1']), 10)
        for key in ('many_top1', 'medium_top1', 'few_top1'):
            self.assertIn(key, rows[-1])

    def test_eval_missing_checkpoint(self):
        code, _, _ = run_cli('eval', '--checkpoint', os.path.join(self.tmp_dir.name, 'none'),
                             '--data', self.data_dir, '--out', self.tmp_dir.name)
        self.assertEqual(code, EXIT_RUNTIME_ERROR)

    def test_histogram(self):
        out_dir = os.path.join(self.tmp_dir.name, 'hist')
        code, out, err = run_cli('histogram', '--checkpoint', os.path.join(self.run_dir, 'stage2'),
                                 '--data', os.path.join(self.data_dir, 'test'), '--index', '3',
                                 '--out', out_dir)
        self.assertEqual(code, EXIT_OK, msg=err)
        self.assertEqual(len(out.strip().splitlines()), 4)
        self.assertTrue(os.path.isfile(os.path.join(out_dir, 'histogram_sample3.csv')))

    def test_ablate_unknown_arm(self):
        code, _, _ = run_cli('ablate', '--data', self.data_dir, '--arms', 'nonsense',
                             '--out', os.path.join(self.tmp_dir.name, 'abl'))
        self.assertEqual(code, EXIT_USAGE_ERROR)
