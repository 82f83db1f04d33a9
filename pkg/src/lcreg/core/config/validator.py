# -*- coding: utf-8 -*-

"""
JSON (draft v7) validator for lcreg experiment configurations that also fills in default values.
The corresponding JSON schema is defined in ".schema".

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

__all__ = ['DefaultInsertionValidator', 'ValidationError', 'validate_config']

import copy
from typing import Mapping, Any
from jsonschema import ValidationError
from jsonschema import validators as __validators
from jsonschema import Draft7Validator as __BaseValidator

from .schema import config_schema


def __set_defaults(validator, properties, instance, schema):
    # Only insert default values of current schema into instance if validation passes
    try:
        __BaseValidator(schema).validate(instance)
    except ValidationError:
        pass
    else:
        for property, subschema in properties.items():
            if 'default' in subschema:
                try:
                    instance.setdefault(property, copy.deepcopy(subschema['default']))
                except AttributeError:
                    pass

    for error in __BaseValidator.VALIDATORS['properties'](validator, properties, instance, schema):
        yield error


def __is_iterable(checker, instance):
    return (__BaseValidator.TYPE_CHECKER.is_type(instance, "array") or
            isinstance(instance, tuple))


def __is_integer(checker, instance):
    # Integral floats (e.g. "num_latents: 40.0") are rejected, bools are never integers
    return __BaseValidator.TYPE_CHECKER.is_type(instance, "integer") and \
        not isinstance(instance, float)


# Custom JSON schema (draft v7) validator that inserts defaults and accepts tuples as "array" type
DefaultInsertionValidator = __validators.extend(
    validator=__BaseValidator,
    validators={'properties': __set_defaults},
    type_checker=__BaseValidator.TYPE_CHECKER.redefine_many({"array": __is_iterable,
                                                             "integer": __is_integer})
)


def validate_config(config: Mapping[str, Any]) -> None:
    """ JSON schema (draft v7) validator for an lcreg experiment configuration.
    Inserts default values in place. Raises jsonschema.ValidationError if invalid.
    """
    DefaultInsertionValidator(config_schema()).validate(config)
