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

from typing import Callable, Any
from functools import wraps
from marshmallow import ValidationError as SchemaValidationError
from common.exceptions import LapisFlowError, ModelValidationError, UsageError
from models.network import ensure_valid
from schemas.network import load_model_file
from experiments.templates import get_template

import sys
import json
import logging
import argparse

__all__ = (
    'handle_errors',
    'require_model',
)

_log = logging.getLogger(__name__)


def handle_errors() -> Callable[[Callable[..., int]], Callable[..., int]]:
    """Turns library errors raised by a command into its exit code.

    The error document is printed as JSON on standard error. With
    ``--debug`` the traceback is logged at debug level.
    """
    def predicate(command: Callable[..., int]) -> Callable[..., int]:
        @wraps(command)
        def __decorator(args: argparse.Namespace, *rest: Any, **kwargs: Any) -> int:
            try:
                return command(args, *rest, **kwargs)
            except SchemaValidationError as exc:
                error: LapisFlowError = UsageError(ModelValidationError.from_external_exc(exc).messages)
                _log.debug('command %s failed', getattr(args, 'command', '?'), exc_info=True)
            except LapisFlowError as exc:
                error = exc
                _log.debug('command %s failed', getattr(args, 'command', '?'), exc_info=True)

            sys.stderr.write(json.dumps(error.to_dict(), indent=2) + '\n')
            return error.exit_code

        return __decorator

    return predicate


def require_model(*, strict: bool = False) -> Callable[[Callable[..., int]], Callable[..., int]]:
    """Loads the network model named by ``--model FILE`` or by
    ``--template NAME --params JSON`` and passes it on as ``model``.

    The model is validated; reducible environments are accepted unless
    ``strict`` is set.
    """
    def predicate(command: Callable[..., int]) -> Callable[..., int]:
        @wraps(command)
        def __decorator(args: argparse.Namespace, *rest: Any, **kwargs: Any) -> int:
            if getattr(args, 'model', None):
                model = load_model_file(args.model)
            elif getattr(args, 'template', None):
                template = get_template(args.template)
                model = template.build(template.resolve(args.params))
            else:
                raise UsageError('either --model or --template is required')

            ensure_valid(model, allow_reducible=not strict)
            return command(args, *rest, model=model, **kwargs)

        return __decorator

    return predicate
