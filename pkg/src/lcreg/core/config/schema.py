# -*- coding: utf-8 -*-

"""
JSON schema to be used by jsonschema.validate on lcreg experiment configurations.

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

__all__ = ['ablation_schema', 'config_schema', 'encoder_schema', 'optimizer_schema']

from typing import Dict, Any


def _non_negative_number(default: float) -> Dict[str, Any]:
    return {'type': 'number', 'minimum': 0, 'default': default}


def _positive_integer(default: int) -> Dict[str, Any]:
    return {'type': 'integer', 'minimum': 1, 'default': default}


def config_schema() -> Dict[str, Any]:
    """ Creates and returns the JSON schema for an lcreg experiment configuration """
    return {
        'type': 'object',
        'additionalProperties': False,
        'properties': {
            'alpha': _non_negative_number(0.1),
            'beta': _non_negative_number(0.1),
            'gamma': _non_negative_number(1.0),
            'lambda0': _non_negative_number(0.5),
            'num_latents': _positive_integer(40),
            'feature_dim': _positive_integer(16),
            'latent_init_std': _non_negative_number(0.02),
            'covariance_mode': {
                'type': 'string',
                'enum': ['auto', 'full', 'diagonal'],
                'default': 'auto'
            },
            'encoder': {'$ref': '#/$defs/encoder', 'default': dict()},
            'optimizer': {'$ref': '#/$defs/optimizer', 'default': dict()},
            'stage1_epochs': {'type': 'integer', 'minimum': 0, 'default': 30},
            'stage2_epochs': {'type': 'integer', 'minimum': 0, 'default': 10},
            'batch_size': _positive_integer(128),
            'seed': {'type': 'integer', 'minimum': 0, 'maximum': 2 ** 64 - 1, 'default': 0},
            'ablation': {'$ref': '#/$defs/ablation', 'default': dict()},
        },
        '$defs': {
            'encoder': encoder_schema(),
            'optimizer': optimizer_schema(),
            'ablation': ablation_schema()
        }
    }


def encoder_schema() -> Dict[str, Any]:
    """ Patch encoder: non-overlapping patch_size x patch_size patches followed by 1x1 layers """
    return {
        'type': 'object',
        'additionalProperties': False,
        'properties': {
            'patch_size': _positive_integer(2),
            'hidden_dims': {
                'type': 'array',
                'items': {'type': 'integer', 'minimum': 1},
                'default': [32]
            }
        }
    }


def optimizer_schema() -> Dict[str, Any]:
    return {
        'type': 'object',
        'additionalProperties': False,
        'properties': {
            'learning_rate': {'type': 'number', 'exclusiveMinimum': 0, 'default': 0.05},
            'momentum': {'type': 'number', 'minimum': 0, 'maximum': 1, 'default': 0.9},
            'weight_decay': _non_negative_number(5e-4),
            'schedule': {'type': 'string', 'enum': ['cosine', 'constant'], 'default': 'cosine'},
            'stage2_learning_rate': {'type': 'number', 'exclusiveMinimum': 0, 'default': 0.05}
        }
    }


def ablation_schema() -> Dict[str, Any]:
    return {
        'type': 'object',
        'additionalProperties': False,
        'properties': {
            'use_latent': {'type': 'boolean', 'default': True},
            'use_aug_loss': {'type': 'boolean', 'default': True},
            'use_recon_loss': {'type': 'boolean', 'default': True},
            'aug_target': {
                'type': 'string',
                'enum': ['latent', 'class_features'],
                'default': 'latent'
            }
        }
    }
