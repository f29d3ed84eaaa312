# MIT License

# Copyright (c) 2023 Izhar Ahmad

# Permission is hereby granted, free of charge, to any person obtaining a copy
# of this software and associated documentation files (the "Software"), to deal
# in the Software without restriction, including without limitation the rights
# to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
# copies of the Software, and to permit persons to whom the Software is
# furnished to do so, subject to the following conditions:

# The above copyright notice and this permission notice shall be included in all
# copies or substantial portions of the Software.

# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
# IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
# FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
# AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
# LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
# OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
# SOFTWARE.

from __future__ import annotations

from typing import Any, Optional, Type
from marshmallow import fields, ValidationError
from enum import Enum, IntEnum

import numpy as np

__all__ = (
    'MatrixField',
    'EnumField',
)


class MatrixField(fields.Field):
    """Nested lists of numbers loaded as a float or integer numpy array.

    ``ndim`` fixes the number of dimensions; ``integer`` requires every
    entry to be integral and loads an int64 array.
    """
    def __init__(self, ndim: int, *args: Any, integer: bool = False, **kwargs: Any) -> None:
        super().__init__(*args, **kwargs)

        self._ndim = ndim
        self._integer = integer

    def _serialize(self, value: Optional[np.ndarray], attr: Any, obj: Any, **kwargs: Any):
        if value is not None:
            return np.asarray(value).tolist()

    def _deserialize(self, value: Any, attr: Any, data: Any, **kwargs: Any):
        try:
            array = np.array(value, dtype=float)
        except (TypeError, ValueError):
            raise ValidationError(f'Must be a rectangular {self._ndim}-dimensional array of numbers.') from None

        if array.ndim != self._ndim:
            raise ValidationError(f'Must be a {self._ndim}-dimensional array, got {array.ndim} dimensions.')
        if not np.all(np.isfinite(array)):
            raise ValidationError('Entries must be finite numbers.')
        if self._integer:
            if not np.all(array == np.round(array)):
                raise ValidationError('Entries must be integers.')
            return array.astype(np.int64)

        return array


class EnumField(fields.Field):
    """Enum field with support for IntEnum subclasses."""
    # Credits: https://github.com/marshmallow-code/marshmallow/issues/267#issuecomment-420154612
    def __init__(self, enum_type: Type[Enum], *args: Any, **kwargs: Any):
        super().__init__(*args, **kwargs)

        self._enum_type = enum_type

    def _serialize(self, value: Enum, attr: Any, obj: Any, **kwargs: Any):
        if value is not None:
            return value.value

    def _deserialize(self, value: Any, attr: Any, data: Any, **kwargs: Any):
        if issubclass(self._enum_type, IntEnum):
            if not isinstance(value, int):
                raise ValidationError('Value must be an integer')
            return self._enum_type(value)

        try:
            return self._enum_type(value)
        except ValueError:
            choices = ', '.join(str(member.value) for member in self._enum_type)
            raise ValidationError(f'Must be one of: {choices}.') from None
