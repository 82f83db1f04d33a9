# -*- coding: utf-8 -*-

"""
Export of the latent category weight histogram of single images.

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

__all__ = ['export_histogram', 'histogram_filename', 'plot_histogram']

import numpy as np
import matplotlib
matplotlib.use('Agg')
import matplotlib.pyplot as plt
from typing import Optional, Union

from lcreg.core.logger import get_logger
from lcreg.model import LCRegNetwork
from lcreg.numerics import Tensor
from lcreg.util.datastorage import CsvTableStorage, ImageFormat

logger = get_logger(__name__)


def histogram_filename(name: str) -> str:
    return f'histogram_{name}.csv'


def plot_histogram(weights: np.ndarray, title: Optional[str] = None):
    """ Bar chart of latent category weights. Returns the matplotlib figure. """
    fig, ax = plt.subplots(figsize=(max(4.0, 0.15 * weights.size + 2), 3))
    ax.bar(np.arange(weights.size), weights, color='tab:blue')
    ax.set_xlabel('latent category')
    ax.set_ylabel('weight')
    ax.set_xlim(-0.5, weights.size - 0.5)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    return fig


def export_histogram(model: LCRegNetwork, image: Union[np.ndarray, Tensor],
                     out_dir: Optional[str] = None, name: Optional[str] = 'image',
                     image_format: Optional[ImageFormat] = ImageFormat.PNG,
                     thumbnail: Optional[bool] = True) -> np.ndarray:
    """ Latent category weights of one image, i.e. the spatial mean of its normalized similarity
    maps. The weights sum to 1.

    @param LCRegNetwork model: (trained) network
    @param image: single image (C, H, W)
    @param str out_dir: optional, directory receiving "histogram_<name>.csv" (columns category,
                        weight) and a bar chart thumbnail next to it
    @param str name: image name used in the file names
    @param ImageFormat image_format: thumbnail file format
    @param bool thumbnail: save the bar chart thumbnail (default True)

    @return numpy.ndarray: weights (M,)
    """
    image = image.data if isinstance(image, Tensor) else np.asarray(image, dtype=np.float64)
    if image.ndim != 3:
        raise ValueError(f'export_histogram expects a single image (C, H, W), got {image.shape}')
    weights = model.latent_weights(image)
    if out_dir is not None:
        storage = CsvTableStorage(root_dir=out_dir, image_format=image_format)
        filename = histogram_filename(name)
        path = storage.save_data([(m, float(w)) for m, w in enumerate(weights)], filename,
                                 column_headers=('category', 'weight'))
        if thumbnail:
            storage.save_thumbnail(plot_histogram(weights, title=name), path.rsplit('.', 1)[0])
        logger.info(f'Exported latent weight histogram of "{name}" to "{path}"')
    return weights
