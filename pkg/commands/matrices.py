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

from common.decorators import handle_errors, require_model
from commands.base import Command, add_model_arguments, emit_json

import argparse
import models

__all__ = (
    'dump_matrices',
)

dump_matrices = Command('dump-matrices', 'write the assembled moment matrices as CSV files')


@dump_matrices.arguments
def _arguments(parser: argparse.ArgumentParser) -> None:
    add_model_arguments(parser)
    parser.add_argument('--output-dir', metavar='DIR', default='matrices', help='directory for the CSV files')


@dump_matrices.handler
@handle_errors()
@require_model()
def run(args: argparse.Namespace, model: models.NetworkModel) -> int:
    paths = models.dump_matrices(models.assemble(model), args.output_dir)
    emit_json({'files': [str(path) for path in paths]})
    return 0
