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

from typing import Any, Optional, Union
from common.constants import ERROR_CODES, ENV_PREFIX, CSV_DIGITS

import os
import math
import datetime
import ulid

__all__ = (
    'get_env_var',
    'get_ulid',
    'new_run_id',
    'get_error_code',
    'format_float',
)

_MISSING: Any = object()

def get_env_var(
        key: str,
        default: Any = _MISSING,
        /,
        *,
        boolean: bool = False,
        integer: bool = False,
        number: bool = False,
    ) -> Any:
    """Returns the environment variable value for given key.

    The key is looked up with the ``LAPIS_FLOW_`` prefix added when it is
    not already present. If no default is provided, a KeyError is raised if
    variable doesn't exist. `boolean`, `integer` and `number` parameters can
    be used to get the type casted value as return value.
    """
    if not key.startswith(ENV_PREFIX):
        key = ENV_PREFIX + key

    try:
        value = os.environ[key]
    except KeyError:
        if default is not _MISSING:
            return default
        raise

    if boolean:
        value = value.lower()
        return value in ('true', '1')
    if integer:
        try:
            return int(value)
        except ValueError:
            raise ValueError(f'value for key {key!r} must be an integer') from None
    if number:
        try:
            return float(value)
        except ValueError:
            raise ValueError(f'value for key {key!r} must be a number') from None

    return value


def get_ulid(time: Optional[Union[int, float, datetime.datetime]] = None) -> ulid.ULID:
    """Creates a ULID instance.

    When time is omitted, a ULID for the current time is generated.
    time can be an int, float (epoch timestamp) or datetime instance.
    """
    if time is None:
        return ulid.ULID()
    if isinstance(time, (int, float)):
        return ulid.ULID.from_timestamp(time)
    if isinstance(time, datetime.datetime):
        return ulid.ULID.from_datetime(time)

    raise TypeError('time must be an int, float or datetime.datetime instance.')


def new_run_id() -> str:
    """A shorthand for ``str(utils.get_ulid())``, used to tag runs in logs and traces."""
    return str(get_ulid())


def get_error_code(name: str, default: str = 'UNSPECIFIED_ERROR') -> int:
    """Gets error code for given error."""
    code = ERROR_CODES.get(name)
    if code is None:
        code = ERROR_CODES.get(default, -1)
    return code


def format_float(value: float, digits: int = CSV_DIGITS) -> str:
    """Renders a float with the given number of significant digits.

    Non-finite values are written as ``nan``, ``inf`` and ``-inf``.
    """
    value = float(value)
    if math.isnan(value):
        return 'nan'
    if math.isinf(value):
        return 'inf' if value > 0 else '-inf'
    return f'{value:.{digits}g}'
