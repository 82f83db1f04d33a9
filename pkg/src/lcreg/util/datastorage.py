# -*- coding: utf-8 -*-

"""
Helpers to store run artefacts (metrics, tables, thumbnails) on disk.

All writers are deterministic: no timestamps or host information are written into the data files,
so two identical runs produce byte-identical artefacts.

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

__all__ = ('CsvTableStorage', 'DataStorageBase', 'ImageFormat', 'JsonLinesStorage',
           'create_dir_for_file', 'to_builtin')

import os
import json
import numpy as np
import matplotlib
matplotlib.use('Agg')
import matplotlib.pyplot as plt

from enum import Enum
from abc import ABCMeta, abstractmethod
from matplotlib.backends.backend_pdf import PdfPages
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple


class ImageFormat(Enum):
    """ Image format to use for saving data thumbnails.
    """
    PNG = '.png'
    PDF = '.pdf'


def create_dir_for_file(file_path: str) -> None:
    """ Helper method to create the directory (recursively) for a given file path.
    Will NOT raise an error if the directory already exists.

    @param str file_path: File path to create the directory for
    """
    file_dir = os.path.dirname(file_path)
    if file_dir:
        os.makedirs(file_dir, exist_ok=True)


def to_builtin(value: Any) -> Any:
    """ Recursively convert numpy scalars/arrays and tuples into JSON serializable builtins """
    if isinstance(value, Mapping):
        return {str(key): to_builtin(val) for key, val in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_builtin(val) for val in value]
    if isinstance(value, np.ndarray):
        return to_builtin(value.tolist())
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.bool_):
        return bool(value)
    return value


class DataStorageBase(metaclass=ABCMeta):
    """ Base helper class to store/load tabular run data to/from disk.
    """

    def __init__(self, *, root_dir: str, image_format: Optional[ImageFormat] = ImageFormat.PNG):
        """
        @param str root_dir: root-directory for this storage instance to work in
        @param ImageFormat image_format: optional, image file format Enum for saving thumbnails
        """
        if not isinstance(image_format, ImageFormat):
            raise TypeError('image_format must be ImageFormat Enum')
        self.root_dir = root_dir
        self.image_format = image_format

    def get_path(self, filename: str) -> str:
        return os.path.join(self.root_dir, filename)

    def save_thumbnail(self, mpl_figure, file_path: str) -> str:
        """ Save a matplotlib figure visualizing the saved data in the image format configured.
        It is recommended to use the same file_path as the corresponding data file and exclude the
        file extension (will be added according to image format).

        @param matplotlib.figure.Figure mpl_figure: The matplotlib figure object to save as image
        @param str file_path: full file path to use without file extension

        @return str: Full absolute path of the saved image
        """
        file_path += self.image_format.value
        create_dir_for_file(file_path)
        if self.image_format is ImageFormat.PDF:
            with PdfPages(file_path, metadata={'CreationDate': None}) as pdf:
                pdf.savefig(mpl_figure, bbox_inches='tight', pad_inches=0.05)
        elif self.image_format is ImageFormat.PNG:
            mpl_figure.savefig(file_path, bbox_inches='tight', pad_inches=0.05)
        else:
            raise RuntimeError(f'Unknown image format selected: "{self.image_format}"')
        plt.close(mpl_figure)
        return file_path

    @abstractmethod
    def save_data(self, data, filename: str, **kwargs) -> str:
        """ Save an entire data set into root_dir/filename (overwriting silently).

        @return str: Full file path
        """
        pass

    @abstractmethod
    def load_data(self, filename: str):
        pass


class JsonLinesStorage(DataStorageBase):
    """ One JSON object per line with sorted keys. Rows can be appended one at a time.
    """

    def new_file(self, filename: str) -> str:
        file_path = self.get_path(filename)
        create_dir_for_file(file_path)
        with open(file_path, 'w', encoding='utf-8') as file:
            file.truncate(0)
        return file_path

    def append_row(self, row: Mapping[str, Any], filename: str) -> str:
        file_path = self.get_path(filename)
        create_dir_for_file(file_path)
        with open(file_path, 'a', encoding='utf-8') as file:
            file.write(json.dumps(to_builtin(row), sort_keys=True, allow_nan=False) + '\n')
        return file_path

    def save_data(self, data: Iterable[Mapping[str, Any]], filename: str, **kwargs) -> str:
        file_path = self.new_file(filename)
        for row in data:
            self.append_row(row, filename)
        return file_path

    def load_data(self, filename: str) -> List[Dict[str, Any]]:
        with open(self.get_path(filename), 'r', encoding='utf-8') as file:
            return [json.loads(line) for line in file if line.strip()]


class CsvTableStorage(DataStorageBase):
    """ Plain comma separated table with a single header row. Floats are written with repr-exact
    precision.
    """

    _default_fmt_for_type = {int: 'd', float: '.17g', str: 's'}

    @classmethod
    def _format_value(cls, value: Any) -> str:
        value = to_builtin(value)
        if value is None:
            return ''
        if isinstance(value, bool):
            return str(value).lower()
        for typ, fmt in cls._default_fmt_for_type.items():
            if isinstance(value, typ):
                return f'{value:{fmt}}'
        raise TypeError(f'Unsupported table value type "{type(value)}"')

    def save_data(self, data: Sequence[Sequence[Any]], filename: str, *,
                  column_headers: Sequence[str] = None, **kwargs) -> str:
        """
        @param data: sequence of rows
        @param str filename: file name relative to root_dir
        @param column_headers: header strings, one per column
        """
        if not column_headers:
            raise ValueError('CsvTableStorage requires column_headers')
        if any(',' in header for header in column_headers):
            raise ValueError('Column headers must not contain ","')
        file_path = self.get_path(filename)
        create_dir_for_file(file_path)
        with open(file_path, 'w', encoding='utf-8', newline='') as file:
            file.write(','.join(column_headers) + '\n')
            for row in data:
                if len(row) != len(column_headers):
                    raise ValueError('Row length does not match number of column headers')
                file.write(','.join(self._format_value(val) for val in row) + '\n')
        return file_path

    def append_rows(self, data: Sequence[Sequence[Any]], filename: str, *,
                    column_headers: Sequence[str]) -> str:
        """ Append rows to an existing table or create it (with header) if missing """
        file_path = self.get_path(filename)
        if not os.path.isfile(file_path):
            return self.save_data(data, filename, column_headers=column_headers)
        with open(file_path, 'r', encoding='utf-8') as file:
            existing = file.readline().rstrip('\n').split(',')
        if existing != list(column_headers):
            raise ValueError(f'Column headers of "{file_path}" do not match {column_headers}')
        with open(file_path, 'a', encoding='utf-8', newline='') as file:
            for row in data:
                file.write(','.join(self._format_value(val) for val in row) + '\n')
        return file_path

    def load_data(self, filename: str) -> Tuple[Tuple[str, ...], List[Tuple[str, ...]]]:
        """ @return (tuple, list): column headers, rows as tuples of raw strings """
        with open(self.get_path(filename), 'r', encoding='utf-8') as file:
            lines = [line.rstrip('\n') for line in file if line.strip()]
        if not lines:
            return tuple(), list()
        return tuple(lines[0].split(',')), [tuple(line.split(',')) for line in lines[1:]]
