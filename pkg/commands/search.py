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

from marshmallow import ValidationError as SchemaValidationError
from common.decorators import handle_errors
from common.exceptions import UsageError
from commands.base import Command, add_output_arguments, emit_json, json_object
from experiments.evaluate import METRICS
from experiments.search import ThresholdQuery, run_threshold_search

import json
import argparse
import schemas

__all__ = (
    'search',
)

search = Command('search', 'find the rate at which a metric crosses its target')


@search.arguments
def _arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--query', metavar='FILE', help='JSON threshold query')
    parser.add_argument('--template', metavar='NAME', help='model template')
    parser.add_argument('--params', type=json_object, default={}, metavar='JSON', help='fixed template parameters')
    parser.add_argument('--variable', help='the searched template parameter')
    parser.add_argument('--metric', choices=METRICS, default='loss_ratio')
    parser.add_argument('--target', type=float, help='largest acceptable metric value')
    parser.add_argument('--lower', type=float, help='lower bound of the variable')
    parser.add_argument('--upper', type=float, help='upper bound of the variable')
    parser.add_argument('--direction', choices=('decreasing', 'increasing'), default='decreasing')
    parser.add_argument('--horizon', type=float, default=None, help='T for cumulative metrics')
    add_output_arguments(parser)


def _query(args: argparse.Namespace) -> ThresholdQuery:
    if args.query:
        try:
            with open(args.query, encoding='utf-8') as fp:
                return schemas.ThresholdQuery().load(json.load(fp))  # type: ignore
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f'cannot read threshold query {args.query!r}: {exc}') from None
        except SchemaValidationError as exc:
            raise UsageError([f'{key}: {value}' for key, value in exc.normalized_messages().items()]) from None

    missing = [flag for flag in ('template', 'variable', 'target', 'lower', 'upper') if getattr(args, flag) is None]
    if missing:
        raise UsageError(f'missing --{", --".join(missing)} (or pass --query)')
    return ThresholdQuery(
        template=args.template,
        variable=args.variable,
        metric=args.metric,
        target=args.target,
        lower=args.lower,
        upper=args.upper,
        direction=args.direction,
        params=args.params,
        horizon=args.horizon,
    )


@search.handler
@handle_errors()
def run(args: argparse.Namespace) -> int:
    """Prints the query and its outcome; an infeasible target is an outcome, not an error."""
    query = _query(args)
    result = run_threshold_search(query)
    emit_json({'query': query.to_dict(), 'result': result.to_dict()}, args.output)
    return 0
