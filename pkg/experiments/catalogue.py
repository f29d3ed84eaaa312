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

from typing import Callable, Optional, Sequence, Tuple, List, Dict, Any
from dataclasses import dataclass, field
from concurrent.futures import ThreadPoolExecutor
from common.constants import DEFAULT_SEED, DEFAULT_WORKERS
from common.exceptions import LapisFlowError, UsageError
from common.utils import get_env_var, new_run_id
from experiments.templates import get_template, Params
from experiments.evaluate import point_metrics, evaluate, check_counter_identity
from experiments.search import bisect_threshold
from experiments.cost import storage_endpoint_choices, retrial_cost_point, refine_retrial_cost, rerouting_crossing, RetrialCostPoint
from experiments.sinks import FORMATS, write_rows
from oracles.closed_form import retrial_closed_form

import math
import logging
import numpy as np

__all__ = (
    'SweepGrid',
    'ExperimentSpec',
    'Experiment',
    'ExperimentResult',
    'EXPERIMENTS',
    'get_experiment',
    'run_experiment',
)

_log = logging.getLogger(__name__)

Row = Dict[str, Any]
SCALES = ('linear', 'log')


@dataclass(frozen=True)
class SweepGrid:
    """Points of one swept variable, ``points`` values from ``minimum`` to
    ``maximum`` inclusive, evenly spaced on a linear or log scale."""
    variable: str
    minimum: float
    maximum: float
    points: int
    scale: str = 'linear'

    def __post_init__(self) -> None:
        errors = []
        if not (math.isfinite(self.minimum) and math.isfinite(self.maximum)):
            errors.append('grid bounds must be finite')
        elif self.minimum > self.maximum:
            errors.append('grid minimum must not exceed the maximum')
        if self.points < 2:
            errors.append('a grid needs at least 2 points')
        if self.scale not in SCALES:
            errors.append(f'grid scale must be one of {", ".join(SCALES)}')
        elif self.scale == 'log' and not self.minimum > 0:
            errors.append('a log grid needs a positive minimum')
        if errors:
            raise UsageError(errors)

    def values(self) -> np.ndarray:
        if self.scale == 'log':
            return np.geomspace(self.minimum, self.maximum, self.points)
        return np.linspace(self.minimum, self.maximum, self.points)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'variable': self.variable,
            'min': self.minimum,
            'max': self.maximum,
            'points': self.points,
            'scale': self.scale,
        }


@dataclass(frozen=True)
class ExperimentSpec:
    """A run of a catalogued experiment.

    Attributes
    ----------
    name: :class:`str`
        One of :data:`EXPERIMENTS`.
    params: Dict[:class:`str`, Any]
        Overrides of the experiment's parameters.
    grid: Optional[:class:`SweepGrid`]
        Replaces the experiment's default grid.
    output: Optional[:class:`str`]
        File to write to; standard output when omitted.
    format: :class:`str`
        ``csv`` or ``json``.
    check_points: :class:`int`
        Grid points, picked with ``seed``, at which the counter-augmented
        losses are compared with the weighted integral.
    seed: :class:`int`
        Seed for picking check points.
    workers: Optional[:class:`int`]
        Threads evaluating grid points.
    """
    name: str
    params: Dict[str, Any] = field(default_factory=dict)
    grid: Optional[SweepGrid] = None
    output: Optional[str] = None
    format: str = 'csv'
    check_points: int = 0
    seed: int = DEFAULT_SEED
    workers: Optional[int] = None

    def __post_init__(self) -> None:
        if self.format not in FORMATS:
            raise UsageError(f'format must be one of {", ".join(FORMATS)}')
        if self.check_points < 0:
            raise UsageError('check points must be nonnegative')


@dataclass(frozen=True)
class Experiment:
    """A catalogued sweep.

    ``rows`` evaluates one grid value into one or more output rows;
    ``finish`` may append rows computed from the whole sweep.
    """
    name: str
    template: str
    defaults: Dict[str, Any]
    grid: SweepGrid
    columns: Tuple[str, ...]
    rows: Callable[[Params, float], List[Row]]
    finish: Optional[Callable[[Params, List[Row]], List[Row]]] = None
    description: str = ''

    def resolve(self, overrides: Optional[Dict[str, Any]] = None) -> Params:
        overrides = dict(overrides or {})
        known = set(self.defaults) | set(get_template(self.template).defaults)
        unknown = sorted(set(overrides) - known)
        if unknown:
            raise UsageError(f'experiment {self.name!r} has no parameters {", ".join(unknown)}')
        params = dict(self.defaults)
        params.update(overrides)
        return params

    def template_params(self, params: Params) -> Params:
        template = get_template(self.template)
        return template.resolve({k: v for k, v in params.items() if k in template.defaults})


@dataclass(frozen=True)
class ExperimentResult:
    run_id: str
    columns: Tuple[str, ...]
    rows: List[Row]
    text: str


def _retrial_rows(experiment_name: str) -> Callable[[Params, float], List[Row]]:
    def rows(params: Params, value: float) -> List[Row]:
        template = get_template('retrial')
        variable = EXPERIMENTS[experiment_name].grid.variable
        point = template.resolve({k: params[k] for k in template.defaults if k in params})
        point[variable] = value
        row: Row = {variable: value, 'loss_ratio': evaluate(template, point, 'loss_ratio')}
        try:
            row['closed_form_loss_ratio'] = retrial_closed_form(
                point['lam'], point['kappa'], point['nu'], point['mu'], point['gamma_u'], point['gamma_d'],
            ).loss_ratio
        except LapisFlowError:
            row['closed_form_loss_ratio'] = None
        return [row]
    return rows


def _retrial_cost_rows(params: Params, gamma_u: float) -> List[Row]:
    base = EXPERIMENTS['retrial-cost'].template_params(params)
    point = retrial_cost_point(
        base, gamma_u, params['target'], params['cost_up'], params['cost_down'],
        (params['gamma_d_min'], params['gamma_d_max']),
    )
    return [{**point.to_dict(), 'optimum': False}]


def _retrial_cost_finish(params: Params, rows: List[Row]) -> List[Row]:
    grid = [
        RetrialCostPoint(row['gamma_u'], row.get('gamma_d'), row['cost'] if row.get('cost') is not None else math.inf)
        for row in rows
    ]
    if not any(point.feasible for point in grid):
        return [{'optimum': True, 'feasible': False, 'error': 'no failure rate on the grid meets the loss ratio target'}]

    base = EXPERIMENTS['retrial-cost'].template_params(params)
    optimum = refine_retrial_cost(
        base, grid, params['target'], params['cost_up'], params['cost_down'],
        (params['gamma_d_min'], params['gamma_d_max']),
    )
    return [{**optimum.to_dict(), 'optimum': True}]


def _storage_exp1_rows(params: Params, fraction: float) -> List[Row]:
    experiment = EXPERIMENTS['storage-exp1']
    point = experiment.template_params({**params, 'premium_fraction': fraction})
    values = point_metrics(get_template(experiment.template), point, params['horizon'])
    return [{'premium_fraction': fraction, **values.to_dict()}]


def _storage_exp2_rows(experiment_name: str) -> Callable[[Params, float], List[Row]]:
    def rows(params: Params, rate: float) -> List[Row]:
        experiment = EXPERIMENTS[experiment_name]
        variable = experiment.grid.variable
        base = experiment.template_params(params)
        ratios = np.geomspace(params['ratio_min'], params['ratio_max'], int(params['ratio_points']))
        choices = storage_endpoint_choices(
            rate, [float(r) for r in ratios],
            variable=variable, params=base, horizon=params['horizon'],
        )
        return [
            {
                variable: rate,
                'ratio': choice.ratio,
                'cost_none': choice.cost_none,
                'cost_all': choice.cost_all,
                'best_premium_fraction': choice.best_premium_fraction,
                'critical_ratio': choice.critical_ratio,
            }
            for choice in choices
        ]
    return rows


def _storage_exp3_rows(params: Params, fraction: float) -> List[Row]:
    experiment = EXPERIMENTS['storage-exp3']
    template = get_template(experiment.template)
    base = experiment.template_params({**params, 'premium_fraction': fraction})

    def loss_fraction(gamma_d: float) -> float:
        return evaluate(template, {**base, 'gamma_d': gamma_d}, 'loss_fraction', params['horizon'])

    result = bisect_threshold(loss_fraction, params['gamma_d_min'], params['gamma_d_max'], params['target'])
    return [{
        'premium_fraction': fraction,
        'status': result.status,
        'min_gamma_d': result.value,
        'loss_fraction': result.metric,
    }]


def _rerouting_rows(params: Params, gamma_d: float) -> List[Row]:
    template = get_template('rerouting')
    base = template.resolve({k: v for k, v in params.items() if k in template.defaults})
    base['gamma_d'] = gamma_d
    report = rerouting_crossing(base, horizon=params['horizon'], ratio_bounds=(params['ratio_min'], params['ratio_max']))
    return [{'gamma_d': gamma_d, **report.to_dict()}]


_RETRIAL = {'lam': 100.0, 'kappa': 2.0, 'nu': 2.0, 'mu': 1.0, 'gamma_u': 0.1}
_PREMIUM = {'lam': 1e4, 'mu_copy': 24.0, 'gamma_u': 0.01, 'gamma_d': 2.0}

EXPERIMENTS: Dict[str, Experiment] = {
    experiment.name: experiment
    for experiment in (
        Experiment(
            name='retrial-exp1',
            template='retrial',
            defaults=dict(_RETRIAL),
            grid=SweepGrid('gamma_d', 0.5, 10.0, 20),
            columns=('gamma_d', 'loss_ratio', 'closed_form_loss_ratio', 'error'),
            rows=_retrial_rows('retrial-exp1'),
            description='loss ratio against the repair rate',
        ),
        Experiment(
            name='retrial-exp2',
            template='retrial',
            defaults={**_RETRIAL, 'gamma_d': 0.5},
            grid=SweepGrid('gamma_u', 1e-4, 0.1, 25, 'log'),
            columns=('gamma_u', 'loss_ratio', 'closed_form_loss_ratio', 'error'),
            rows=_retrial_rows('retrial-exp2'),
            description='loss ratio against the failure rate',
        ),
        Experiment(
            name='retrial-cost',
            template='retrial',
            defaults={
                'lam': 100.0, 'kappa': 2.0, 'nu': 2.0, 'mu': 1.0,
                'target': 0.1, 'cost_up': 1.0, 'cost_down': 1.0,
                'gamma_d_min': 1e-6, 'gamma_d_max': 1e3,
            },
            grid=SweepGrid('gamma_u', 1e-3, 1.0, 25, 'log'),
            columns=('gamma_u', 'gamma_d', 'cost', 'feasible', 'optimum', 'error'),
            rows=_retrial_cost_rows,
            finish=_retrial_cost_finish,
            description='cheapest failure and repair rate pair meeting a loss ratio target',
        ),
        Experiment(
            name='storage-exp1',
            template='premium-storage',
            defaults={**_PREMIUM, 'horizon': 1.0},
            grid=SweepGrid('premium_fraction', 0.0, 1.0, 21),
            columns=('premium_fraction', 'expected_losses', 'expected_usage', 'expected_arrivals', 'loss_fraction', 'error'),
            rows=_storage_exp1_rows,
            description='lost files and stored copies against the premium fraction',
        ),
        Experiment(
            name='storage-exp2',
            template='premium-storage',
            defaults={
                **_PREMIUM, 'gamma_u': 1.0, 'horizon': 1.0,
                'ratio_min': 1e-3, 'ratio_max': 1e3, 'ratio_points': 13,
            },
            grid=SweepGrid('gamma_d', 0.5, 24.0, 20),
            columns=('gamma_d', 'ratio', 'cost_none', 'cost_all', 'best_premium_fraction', 'critical_ratio', 'error'),
            rows=_storage_exp2_rows('storage-exp2'),
            description='cheapest premium fraction for a linear cost of losses and storage',
        ),
        Experiment(
            name='storage-exp2-gamma-u',
            template='premium-storage',
            defaults={
                **_PREMIUM, 'gamma_d': 2.0, 'horizon': 1.0,
                'ratio_min': 1e-3, 'ratio_max': 1e3, 'ratio_points': 13,
            },
            grid=SweepGrid('gamma_u', 0.01, 1.0, 20, 'log'),
            columns=('gamma_u', 'ratio', 'cost_none', 'cost_all', 'best_premium_fraction', 'critical_ratio', 'error'),
            rows=_storage_exp2_rows('storage-exp2-gamma-u'),
            description='cheapest premium fraction against the failure rate',
        ),
        Experiment(
            name='storage-exp3',
            template='premium-storage',
            defaults={
                **_PREMIUM, 'gamma_u': 0.1, 'horizon': 2.0, 'target': 0.05,
                'gamma_d_min': 1e-6, 'gamma_d_max': 24.0,
            },
            grid=SweepGrid('premium_fraction', 0.0, 1.0, 21),
            columns=('premium_fraction', 'status', 'min_gamma_d', 'loss_fraction', 'error'),
            rows=_storage_exp3_rows,
            description='minimal repair rate keeping the loss fraction below a target',
        ),
        Experiment(
            name='rerouting-threshold',
            template='rerouting',
            defaults={
                'links': 3, 'lam': 1.0, 'mu': 1.0, 'gamma_u': 0.1, 'horizon': 1.0,
                'ratio_min': 1e-6, 'ratio_max': 1e6,
            },
            grid=SweepGrid('gamma_d', 0.1, 10.0, 20, 'log'),
            columns=(
                'gamma_d', 'critical_ratio', 'losses_rerouted', 'losses_direct',
                'usage_rerouted', 'usage_direct', 'status', 'error',
            ),
            rows=_rerouting_rows,
            description='price ratio above which detours pay off',
        ),
    )
}


def get_experiment(name: str) -> Experiment:
    try:
        return EXPERIMENTS[name]
    except KeyError:
        raise UsageError(f'unknown experiment {name!r}; choose from {", ".join(sorted(EXPERIMENTS))}') from None


def _safe_rows(experiment: Experiment, params: Params, value: float) -> List[Row]:
    try:
        return experiment.rows(params, value)
    except LapisFlowError as exc:
        _log.warning('experiment %s failed at %s = %r: %s', experiment.name, experiment.grid.variable, value, exc)
        return [{experiment.grid.variable: value, 'error': '; '.join(str(m) for m in exc.messages)}]


def _check_identity(experiment: Experiment, params: Params, grid: SweepGrid, values: Sequence[float], spec: ExperimentSpec) -> None:
    template = get_template(experiment.template)
    if grid.variable not in template.defaults:
        return

    rng = np.random.default_rng(spec.seed)
    picked = rng.choice(len(values), size=min(spec.check_points, len(values)), replace=False)
    horizon = params.get('horizon', 1.0)
    for index in sorted(picked):
        point = experiment.template_params({**params, grid.variable: float(values[index])})
        check_counter_identity(template, point, horizon)
    _log.info('counter identity checked at %d grid points', len(picked))


def run_experiment(spec: ExperimentSpec) -> ExperimentResult:
    """Sweeps the experiment's grid and writes one CSV or JSON table.

    Grid points are evaluated concurrently; rows keep grid order. A point
    whose analysis fails yields a row with the ``error`` column set and
    the sweep continues.
    """
    experiment = get_experiment(spec.name)
    params = experiment.resolve(spec.params)
    grid = spec.grid or experiment.grid
    if grid.variable != experiment.grid.variable:
        raise UsageError(f'experiment {experiment.name!r} sweeps {experiment.grid.variable!r}, not {grid.variable!r}')

    values = [float(v) for v in grid.values()]
    workers = spec.workers or get_env_var('WORKERS', DEFAULT_WORKERS, integer=True)
    run_id = new_run_id()
    _log.info('experiment %s (%s): %d grid points', experiment.name, run_id, len(values))

    with ThreadPoolExecutor(max_workers=workers) as pool:
        chunks = list(pool.map(lambda value: _safe_rows(experiment, params, value), values))
    rows = [row for chunk in chunks for row in chunk]

    if experiment.finish is not None:
        try:
            rows.extend(experiment.finish(params, rows))
        except LapisFlowError as exc:
            rows.append({'error': '; '.join(str(m) for m in exc.messages)})

    if spec.check_points:
        _check_identity(experiment, params, grid, values, spec)

    text = write_rows(
        experiment.columns, rows,
        path=spec.output, fmt=spec.format,
        experiment=experiment.name, params=params, grid=grid.to_dict(),
    )
    _log.info('experiment %s (%s) finished', experiment.name, run_id)
    return ExperimentResult(run_id, experiment.columns, rows, text)
