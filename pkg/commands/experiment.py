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

from typing import Optional
from marshmallow import ValidationError as SchemaValidationError
from common.decorators import handle_errors
from common.exceptions import UsageError
from commands.base import Command, json_object
from experiments.catalogue import EXPERIMENTS, ExperimentSpec, SweepGrid, run_experiment

import json
import argparse
import dataclasses
import schemas

__all__ = (
    'experiment',
)

experiment = Command('experiment', 'run a catalogued parameter sweep and write its curve')


def _grid(value: str) -> SweepGrid:
    parts = value.split(':')
    if len(parts) not in (4, 5):
        raise argparse.ArgumentTypeError('expected VARIABLE:MIN:MAX:POINTS[:SCALE]')
    try:
        return SweepGrid(parts[0], float(parts[1]), float(parts[2]), int(parts[3]), *parts[4:])
    except ValueError:
        raise argparse.ArgumentTypeError('bounds must be numbers and points an integer') from None


@experiment.arguments
def _arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('name', nargs='?', choices=sorted(EXPERIMENTS), help='the experiment')
    parser.add_argument('--spec', metavar='FILE', help='JSON experiment spec')
    parser.add_argument('--params', type=json_object, default=None, metavar='JSON', help='parameter overrides')
    parser.add_argument('--grid', type=_grid, default=None, help='VARIABLE:MIN:MAX:POINTS[:SCALE]')
    parser.add_argument('--check', type=int, default=None, metavar='N',
                        help='cross-check the loss counter at N grid points')
    parser.add_argument('--seed', type=int, default=None)
    parser.add_argument('--workers', type=int, default=None)
    parser.add_argument('--format', choices=('csv', 'json'), default=None)
    parser.add_argument('--output', metavar='FILE', default=None)


def _load_spec(path: str) -> ExperimentSpec:
    try:
        with open(path, encoding='utf-8') as fp:
            return schemas.ExperimentSpec().load(json.load(fp))  # type: ignore
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f'cannot read experiment spec {path!r}: {exc}') from None
    except SchemaValidationError as exc:
        raise UsageError([f'{key}: {value}' for key, value in exc.normalized_messages().items()]) from None


@experiment.handler
@handle_errors()
def run(args: argparse.Namespace) -> int:
    """Writes the experiment's CSV or JSON table."""
    spec: Optional[ExperimentSpec] = _load_spec(args.spec) if args.spec else None
    if spec is None:
        if args.name is None:
            raise UsageError('an experiment name or --spec is required')
        spec = ExperimentSpec(args.name)
    elif args.name is not None and args.name != spec.name:
        raise UsageError(f'spec runs {spec.name!r}, not {args.name!r}')

    overrides = {
        'params': {**spec.params, **args.params} if args.params else None,
        'grid': args.grid,
        'check_points': args.check,
        'seed': args.seed,
        'workers': args.workers,
        'format': args.format,
        'output': args.output,
    }
    spec = dataclasses.replace(spec, **{key: value for key, value in overrides.items() if value is not None})
    run_experiment(spec)
    return 0
