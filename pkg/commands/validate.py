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
from common.exceptions import ModelValidationError, UsageError
from commands.base import Command, add_model_arguments, add_output_arguments, emit_json
from experiments.templates import get_template
from schemas.network import load_model_file

import argparse
import models

__all__ = (
    'validate',
)

validate = Command('validate', 'check a model file against every model invariant')


@validate.arguments
def _arguments(parser: argparse.ArgumentParser) -> None:
    add_model_arguments(parser)
    add_output_arguments(parser)


@validate.handler
@handle_errors()
def run(args: argparse.Namespace) -> int:
    """Prints the validation report; exits with 2 when there are violations."""
    if args.model:
        model = load_model_file(args.model)
    elif args.template:
        template = get_template(args.template)
        model = template.build(template.resolve(args.params))
    else:
        raise UsageError('either --model or --template is required')

    report = models.validate(model)
    emit_json(report.to_dict(), args.output)
    if not report.ok:
        raise ModelValidationError.from_report(report)
    return 0
