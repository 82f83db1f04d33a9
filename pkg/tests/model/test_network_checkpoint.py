# -*- coding: utf-8 -*-

"""
This file contains unit tests for the patch encoder, the fusion decoder, the assembled network and
checkpoint persistence.

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

import os
import tempfile
import unittest
import numpy as np

from lcreg.core.config import ExperimentConfig
from lcreg.model import CheckpointError, Decoder, LCRegNetwork, classify, fuse_and_classify
from lcreg.model import fuse_and_pool, load_checkpoint, load_network, recon_loss, save_checkpoint
from lcreg.model.encoder import PatchEncoder, patchify
from lcreg.numerics import Rng, ShapeError, Tensor, cross_entropy_logits, gradient_check


def _small_config(**overrides):
    config = {'num_latents': 3, 'feature_dim': 4, 'encoder': {'patch_size': 2, 'hidden_dims': [6]}}
    config.update(overrides)
    return ExperimentConfig(config)


class TestPatchEncoder(unittest.TestCase):

    def test_patchify_layout(self):
        images = Tensor(np.arange(16, dtype=float).reshape(1, 1, 4, 4))
        patches = patchify(images, 2).data
        self.assertEqual(patches.shape, (1, 4, 4))
        # first patch holds the top left 2x2 block in row-major order
        np.testing.assert_array_equal(patches[0, :, 0], [0, 1, 4, 5])
        np.testing.assert_array_equal(patches[0, :, 3], [10, 11, 14, 15])

    def test_indivisible_size(self):
        with self.assertRaises(ShapeError):
            PatchEncoder((1, 5, 4), 4, Rng(0), patch_size=2)
        with self.assertRaises(ShapeError):
            patchify(Tensor(np.zeros((1, 1, 3, 4))), 2)

    def test_output_shape(self):
        encoder = PatchEncoder((2, 8, 4), 5, Rng(0), patch_size=2, hidden_dims=(7, 3))
        self.assertEqual(encoder.spatial_shape, (4, 2))
        self.assertEqual(encoder(Tensor(np.ones((3, 2, 8, 4)))).shape, (3, 5, 8))
        self.assertEqual(len(encoder.parameters()), 6)


class TestDecoder(unittest.TestCase):

    def setUp(self):
        self.dim = 3
        self.decoder = Decoder(self.dim, 4, Rng(1))
        half = 0.5 * np.eye(self.dim)
        self.decoder.fuse_weight = Tensor(np.hstack([half, half]))
        self.decoder.fuse_bias = Tensor(np.zeros(self.dim))

    def test_halving_fusion(self):
        features = Tensor(Rng(2).uniform(0.1, 2.0, size=(self.dim, 2, 3)))
        logits = fuse_and_classify(features, features, self.decoder).data
        pooled = features.data.reshape(self.dim, -1).mean(axis=1)
        expected = self.decoder.cls_weight.data @ pooled + self.decoder.cls_bias.data
        np.testing.assert_allclose(logits, expected, rtol=0, atol=1e-12)

    def test_zero_features(self):
        self.decoder.cls_bias = Tensor([0.1, -0.2, 0.3, 0.0])
        zeros = Tensor(np.zeros((self.dim, 2, 2)))
        np.testing.assert_array_equal(fuse_and_classify(zeros, zeros, self.decoder).data,
                                      [0.1, -0.2, 0.3, 0.0])

    def test_batched_classify(self):
        pooled = Rng(3).normal((5, self.dim))
        batched = classify(Tensor(pooled), self.decoder).data
        self.assertEqual(batched.shape, (5, 4))
        np.testing.assert_allclose(batched[2], classify(Tensor(pooled[2]), self.decoder).data,
                                   atol=1e-12)

    def test_shape_errors(self):
        with self.assertRaises(ShapeError):
            fuse_and_pool(Tensor(np.zeros((3, 2, 2))), Tensor(np.zeros((3, 2, 1))), self.decoder)
        with self.assertRaises(ShapeError):
            fuse_and_pool(Tensor(np.zeros((2, 2, 2))), Tensor(np.zeros((2, 2, 2))), self.decoder)


class TestNetwork(unittest.TestCase):

    def setUp(self):
        self.config = _small_config()
        self.network = LCRegNetwork.from_config(self.config, (1, 4, 4), 5)
        self.images = Rng(7).normal((6, 1, 4, 4))

    def test_forward_shapes(self):
        result = self.network(self.images)
        self.assertEqual(result.features.shape, (6, 4, 2, 2))
        self.assertEqual(result.normalized_maps.shape, (6, 3, 2, 2))
        self.assertEqual(result.reconstructed.shape, (6, 4, 2, 2))
        self.assertEqual(result.pooled.shape, (6, 4))
        self.assertEqual(result.logits.shape, (6, 5))
        self.assertEqual(result.flat_features().shape, (6, 4, 4))

    def test_predict_logits_matches_forward(self):
        np.testing.assert_allclose(self.network.predict_logits(self.images, batch_size=4),
                                   self.network(self.images).logits.data, atol=1e-12)

    def test_latent_weights(self):
        weights = self.network.latent_weights(self.images[0])
        self.assertEqual(weights.shape, (3,))
        self.assertAlmostEqual(weights.sum(), 1.0, places=12)

    def test_uniform_weights_for_zero_encoding(self):
        self.network.pool.proj_weight = Tensor(np.zeros((4, 4)))
        self.network.pool.proj_bias = Tensor(np.zeros(4))
        np.testing.assert_allclose(self.network.latent_weights(self.images[:2]),
                                   np.full((2, 3), 1 / 3), atol=1e-15)

    def test_without_latent_branch(self):
        network = LCRegNetwork.from_config(
            _small_config(ablation={'use_latent': False}), (1, 4, 4), 5)
        self.assertFalse(any(name.startswith('pool.') for name in network.stage1_parameters()))
        result = network(self.images)
        self.assertIsNone(result.normalized_maps)
        np.testing.assert_array_equal(result.reconstructed.data, np.zeros((6, 4, 2, 2)))
        result.logits.sum().backward()
        self.assertIsNone(network.pool.latents.grad)

    def test_load_state_arrays(self):
        other = LCRegNetwork.from_config(self.config.updated(seed=11), (1, 4, 4), 5)
        other.load_state_arrays(self.network.state_arrays())
        np.testing.assert_array_equal(other.predict_logits(self.images),
                                      self.network.predict_logits(self.images))
        arrays = self.network.state_arrays()
        del arrays['pool.latents']
        with self.assertRaises(KeyError):
            other.load_state_arrays(arrays)

    def test_bind_parameters(self):
        bound = Tensor(np.zeros((5, 4)), requires_grad=True)
        self.network.bind_parameters({'classifier.weight': bound})
        self.assertIs(self.network.parameters()['classifier.weight'], bound)
        self.network(self.images).logits.sum().backward()
        self.assertEqual(bound.grad.shape, (5, 4))
        with self.assertRaises(KeyError):
            self.network.bind_parameters({'pool.unknown': bound})
        with self.assertRaises(ShapeError):
            self.network.bind_parameters({'pool.proj_bias': Tensor(np.zeros(3))})

    def test_gradients_of_every_parameter(self):
        rng = Rng(5)
        names = list(self.network.parameters())
        self.assertEqual(len(names), 13)
        labels = np.array([0, 3])

        def objective(images, *params):
            self.network.bind_parameters(dict(zip(names, params)))
            result = self.network(images)
            recon = recon_loss(result.flat_reconstructed(), result.flat_features())
            return cross_entropy_logits(result.logits, labels).mean() + 0.5 * recon

        inputs = [Tensor(self.images[:2])]
        inputs.extend(Tensor(value + 0.1 * rng.normal(value.shape))
                      for value in self.network.state_arrays().values())
        errors = gradient_check(objective, inputs)
        self.assertEqual(len(errors), 14)
        self.assertLessEqual(max(errors.values()), 1e-4, msg=str(errors))


class TestCheckpoint(unittest.TestCase):

    def setUp(self):
        self.tmp_dir = tempfile.TemporaryDirectory()
        self.directory = os.path.join(self.tmp_dir.name, 'ckpt')
        self.config = _small_config()
        self.network = LCRegNetwork.from_config(self.config, (1, 4, 4), 5)

    def tearDown(self):
        self.tmp_dir.cleanup()

    def test_save_and_load(self):
        stats = {'stats_mu': np.arange(12, dtype=float).reshape(3, 4)}
        save_checkpoint(self.directory, self.network, self.config, step=17, stage=1, stats=stats)
        checkpoint = load_checkpoint(self.directory)
        self.assertEqual(checkpoint.step, 17)
        self.assertEqual(checkpoint.stage, 1)
        self.assertEqual(checkpoint.num_classes, 5)
        self.assertEqual(tuple(checkpoint.input_shape), (1, 4, 4))
        self.assertEqual(checkpoint.config, self.config)
        np.testing.assert_array_equal(checkpoint.stats['stats_mu'], stats['stats_mu'])
        restored = load_network(checkpoint)
        for name, array in self.network.state_arrays().items():
            np.testing.assert_array_equal(restored.state_arrays()[name], array, err_msg=name)

    def test_missing_tensor(self):
        save_checkpoint(self.directory, self.network, self.config, step=0, stage=1)
        os.remove(os.path.join(self.directory, 'pool.latents.lct'))
        with self.assertRaises(CheckpointError) as ctx:
            load_checkpoint(self.directory)
        self.assertEqual(ctx.exception.missing, ['pool.latents'])
        self.assertIn('pool.latents', str(ctx.exception))

    def test_missing_manifest(self):
        os.makedirs(self.directory)
        with self.assertRaises(CheckpointError):
            load_checkpoint(self.directory)
