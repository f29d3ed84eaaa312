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

from typing import Optional, Sequence, Mapping, List, Dict, Any, IO
from common.utils import format_float

import io
import sys
import csv
import json
import math

__all__ = (
    'FORMATS',
    'render_cell',
    'render_csv',
    'render_json',
    'write_rows',
)

FORMATS = ('csv', 'json')


def render_cell(value: Any) -> str:
    if value is None:
        return ''
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, float):
        return format_float(value)
    return str(value)


def _json_value(value: Any) -> Any:
    if isinstance(value, float) and not math.isfinite(value):
        return format_float(value)
    return value


def render_csv(columns: Sequence[str], rows: Sequence[Mapping[str, Any]]) -> str:
    """Comma separated with a header row and 17 significant digits."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(columns)
    for row in rows:
        writer.writerow([render_cell(row.get(column)) for column in columns])
    return buffer.getvalue()


def render_json(columns: Sequence[str], rows: Sequence[Mapping[str, Any]], **extra: Any) -> str:
    """The rows as a list of objects with the CSV columns as keys."""
    document: Dict[str, Any] = {
        'columns': list(columns),
        'rows': [{column: _json_value(row.get(column)) for column in columns} for row in rows],
    }
    document.update(extra)
    return json.dumps(document, indent=2) + '\n'


def write_rows(
        columns: Sequence[str],
        rows: Sequence[Mapping[str, Any]],
        *,
        path: Optional[str] = None,
        fmt: str = 'csv',
        stream: Optional[IO[str]] = None,
        **extra: Any,
    ) -> str:
    """Renders the rows and writes them to ``path``, or to ``stream`` (standard
    output by default) when no path is given. Returns the rendered text."""
    text = render_csv(columns, rows) if fmt == 'csv' else render_json(columns, rows, **extra)
    if path is not None:
        with open(path, 'w', encoding='utf-8', newline='') as fp:
            fp.write(text)
    else:
        (stream or sys.stdout).write(text)
    return text
