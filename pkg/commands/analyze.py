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

from typing import List, Dict, Any
from common.decorators import handle_errors, require_model
from common.exceptions import UsageError
from commands.base import Command, add_model_arguments, add_output_arguments, emit_json, index_list
from experiments.sinks import write_rows
from analysis import stability, stationary_mean, stationary_loss_ratio, trajectory, counter_counts

import argparse
import numpy as np
import models

__all__ = (
    'analyze',
)

analyze = Command('analyze', 'transient or stationary first moments of a model')


@analyze.arguments
def _arguments(parser: argparse.ArgumentParser) -> None:
    add_model_arguments(parser, initial=True)
    parser.add_argument('--t0', type=float, default=0.0, help='first time point')
    parser.add_argument('--t1', type=float, default=1.0, help='last time point')
    parser.add_argument('--steps', type=int, default=11, help='number of time points')
    parser.add_argument('--stationary', action='store_true', help='stationary means instead of a trajectory')
    parser.add_argument('--integrated', action='store_true', help='also integrate the means over [0, t]')
    parser.add_argument('--counts', action='store_true', help='also report E Z_a(t) and E Z_l(t)')
    parser.add_argument('--counted', type=index_list, default=[], metavar='QUEUES',
                        help='1-based queues whose departures count as losses')
    add_output_arguments(parser, formats=('json', 'csv'))


def _initial(args: argparse.Namespace, model: models.NetworkModel) -> models.InitialCondition:
    population = args.population if args.population is not None else [0] * model.n_queues
    return models.InitialCondition.from_point(model, population, args.env - 1)


def _stationary(args: argparse.Namespace, model: models.NetworkModel, sys: models.AssembledSystem) -> None:
    verdict = stability(sys)
    pi, mean = stationary_mean(sys)
    labels = model.state_labels()

    if args.format == 'csv':
        rows = [{'state': label, 'mean': float(value)} for label, value in zip(labels, mean)]
        write_rows(('state', 'mean'), rows, path=args.output)
        return

    document: Dict[str, Any] = {
        'stability': verdict.to_dict(),
        'pi': {model.env_label(i): float(p) for i, p in enumerate(pi)},
        'mean': dict(zip(labels, map(float, mean))),
    }
    if args.counts or args.counted:
        document['loss_ratio'] = stationary_loss_ratio(sys, args.counted)
    emit_json(document, args.output)


@analyze.handler
@handle_errors()
@require_model()
def run(args: argparse.Namespace, model: models.NetworkModel) -> int:
    """Prints the stability verdict with transient or stationary means."""
    sys = models.assemble(model)
    if args.stationary:
        _stationary(args, model, sys)
        return 0

    if args.steps < 1 or args.t0 < 0 or args.t1 < args.t0:
        raise UsageError('need 0 <= t0 <= t1 and at least one step')

    init = _initial(args, model)
    times = np.linspace(args.t0, args.t1, args.steps) if args.steps > 1 else np.array([args.t1])
    states = trajectory(sys, init, times, integrated=args.integrated)
    counts = [counter_counts(model, init, float(t), args.counted) for t in times] if args.counts else None

    if args.format == 'json':
        points: List[Dict[str, Any]] = [state.to_dict(sys) for state in states]
        if counts is not None:
            for point, count in zip(points, counts):
                point['counts'] = count.to_dict()
        emit_json({'stability': stability(sys).to_dict(), 'trajectory': points}, args.output)
        return 0

    env_columns = [f'pi:{model.env_label(i)}' for i in range(model.n_env)]
    mean_columns = [f'mean:{label}' for label in model.state_labels()]
    integrated_columns = [f'integrated:{label}' for label in model.state_labels()] if args.integrated else []
    count_columns = ['arrivals', 'losses'] if counts is not None else []
    columns = ['t', *env_columns, *mean_columns, *integrated_columns, *count_columns]

    rows = []
    for k, state in enumerate(states):
        row: Dict[str, Any] = {'t': state.t}
        row.update(zip(env_columns, map(float, state.env_dist)))
        row.update(zip(mean_columns, map(float, state.mean)))
        if state.integrated_mean is not None:
            row.update(zip(integrated_columns, map(float, state.integrated_mean)))
        if counts is not None:
            row.update({'arrivals': counts[k].arrivals, 'losses': counts[k].losses})
        rows.append(row)

    write_rows(columns, rows, path=args.output)
    return 0
