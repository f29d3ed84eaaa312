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

from common.decorators import handle_errors
from commands.base import Command, emit_json, json_object
from experiments.templates import TEMPLATES, get_template

import argparse
import models

__all__ = (
    'build',
)

build = Command('build', 'write the model file of a template for inspection')


@build.arguments
def _arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('template', choices=sorted(TEMPLATES))
    parser.add_argument('--params', type=json_object, default={}, metavar='JSON', help='template parameters')
    parser.add_argument('--output', metavar='FILE', default=None)


@build.handler
@handle_errors()
def run(args: argparse.Namespace) -> int:
    template = get_template(args.template)
    model = template.build(template.resolve(args.params))
    models.ensure_valid(model, allow_reducible=True)
    emit_json(model.to_dict(), args.output)
    return 0
