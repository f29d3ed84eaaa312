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
from common.constants import DEFAULT_SEED
from common.decorators import handle_errors, require_model
from common.exceptions import UsageError
from common.utils import get_env_var
from commands.base import Command, add_model_arguments, add_output_arguments, emit_json, index_list
from experiments.templates import get_template
from oracles.simulation import SimulationConfig, simulate as run_simulation

import json
import argparse
import dataclasses
import models
import schemas

__all__ = (
    'simulate',
)

simulate = Command('simulate', 'estimate means and cumulative counts by exact simulation')


@simulate.arguments
def _arguments(parser: argparse.ArgumentParser) -> None:
    add_model_arguments(parser, initial=True)
    parser.add_argument('--config', metavar='FILE', help='JSON simulation config; flags given here override it')
    parser.add_argument('--reps', type=int, default=None, help='number of replications')
    parser.add_argument('--horizon', type=float, default=None, help='simulated time T')
    parser.add_argument('--seed', type=int, default=None, help='master seed')
    parser.add_argument('--counted', type=index_list, default=None, metavar='QUEUES',
                        help='1-based queues whose departures count as losses')
    parser.add_argument('--usage', type=json.loads, default=None, metavar='JSON',
                        help='per-queue usage weights for Z_s')
    parser.add_argument('--batch', type=int, default=None, help='replications simulated in lock-step')
    parser.add_argument('--workers', type=int, default=None, help='threads simulating batches')
    parser.add_argument('--trace', metavar='FILE', default=None, help='JSON-lines events of the first replication')
    add_output_arguments(parser)


def _load_config(path: str) -> SimulationConfig:
    try:
        with open(path, encoding='utf-8') as fp:
            data = json.load(fp)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f'cannot read simulation config {path!r}: {exc}') from None
    try:
        return schemas.SimulationConfig().load(data)  # type: ignore
    except SchemaValidationError as exc:
        raise UsageError([f'{key}: {value}' for key, value in exc.normalized_messages().items()]) from None


@simulate.handler
@handle_errors()
@require_model()
def run(args: argparse.Namespace, model: models.NetworkModel) -> int:
    """Prints replication estimates with 95% confidence half-widths."""
    overrides = {
        'replications': args.reps,
        'horizon': args.horizon,
        'seed': args.seed,
        'population': args.population,
        'counted_departures': tuple(args.counted) if args.counted is not None else None,
        'usage_weights': args.usage,
        'batch_size': args.batch,
        'workers': args.workers,
        'trace': args.trace,
    }
    if args.env != 1 or not args.config:
        overrides['env'] = args.env - 1
    overrides = {key: value for key, value in overrides.items() if value is not None}

    if args.config:
        cfg = dataclasses.replace(_load_config(args.config), **overrides)
    else:
        if 'replications' not in overrides or 'horizon' not in overrides:
            raise UsageError('--reps and --horizon are required without --config')
        overrides.setdefault('seed', get_env_var('SEED', DEFAULT_SEED, integer=True))
        if args.template and 'usage_weights' not in overrides:
            template = get_template(args.template)
            params = template.resolve(args.params)
            overrides['usage_weights'] = template.usage_weights(params, model)
            overrides.setdefault('counted_departures', template.counted(params))
        cfg = SimulationConfig(**overrides)

    result = run_simulation(model, cfg)
    emit_json(result.to_dict(), args.output)
    return 0
