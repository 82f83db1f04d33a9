# -*- coding: utf-8 -*-

"""
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

__all__ = ['Checkpoint', 'CheckpointError', 'Decoder', 'ForwardResult', 'LCRegNetwork',
           'LatentPool', 'PatchEncoder', 'attention_weights', 'classify', 'encode_latents',
           'fuse_and_classify', 'fuse_and_pool', 'load_checkpoint', 'load_network',
           'normalize_maps', 'recon_loss', 'reconstruct', 'save_checkpoint', 'similarity_maps']

from .encoder import PatchEncoder
from .latent_pool import LatentPool, attention_weights, encode_latents, normalize_maps
from .latent_pool import recon_loss, reconstruct, similarity_maps
from .decoder import Decoder, classify, fuse_and_classify, fuse_and_pool
from .network import ForwardResult, LCRegNetwork
from .checkpoint import Checkpoint, CheckpointError, load_checkpoint, load_network, save_checkpoint
