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

from typing import Any, Union
from marshmallow import ValidationError as SchemaValidationError

import math
import numpy as np

__all__ = (
    'rate_validator',
    'positive_validator',
    'index_validator',
)

Number = Union[int, float]


def rate_validator(value: Any) -> bool:
    """A validator that ensures a rate, or every entry of an array of
    rates, is finite and nonnegative."""
    array = np.asarray(value, dtype=float)
    if not np.all(np.isfinite(array)):
        raise SchemaValidationError('Rates must be finite.')
    if np.any(array < 0):
        raise SchemaValidationError('Rates must be nonnegative.')

    return True


def positive_validator(value: Number) -> bool:
    """A validator for horizons, targets and bounds that must be positive."""
    if not (math.isfinite(value) and value > 0):
        raise SchemaValidationError('Must be a positive finite number.')

    return True


def index_validator(value: int) -> bool:
    """1-based indices in files."""
    if value < 1:
        raise SchemaValidationError('Indices start at 1.')

    return True
