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

from typing import Dict, Any
from marshmallow import Schema, fields, validate, validates_schema, post_load, ValidationError
from schemas.fields import EnumField
from common.schemas_models import positive_validator, index_validator
from common.constants import DEFAULT_SEED
from experiments import catalogue, search
from oracles import simulation
from enum import Enum

__all__ = (
    'Scale',
    'OutputFormat',
    'Direction',
    'Metric',
    'SweepGrid',
    'ExperimentSpec',
    'ThresholdQuery',
    'SimulationConfig',
)


class Scale(Enum):
    """Spacing of sweep grid points."""
    LINEAR = 'linear'
    LOG = 'log'


class OutputFormat(Enum):
    CSV = 'csv'
    JSON = 'json'


class Direction(Enum):
    """How a searched metric moves as its variable grows.

    Attributes
    ----------
    DECREASING
        The metric falls; the smallest acceptable value is searched.
    INCREASING
        The metric rises; the largest acceptable value is searched.
    """
    DECREASING = 'decreasing'
    INCREASING = 'increasing'


class Metric(Enum):
    LOSS_RATIO = 'loss_ratio'
    LOSS_FRACTION = 'loss_fraction'
    EXPECTED_LOSSES = 'expected_losses'
    EXPECTED_ARRIVALS = 'expected_arrivals'
    EXPECTED_USAGE = 'expected_usage'


class SweepGrid(Schema):
    """Represents the sweep grid of an experiment spec.

    variable (string) : the swept template parameter.
    min, max (number) : the finite grid bounds.
    points (integer) : at least 2.
    scale (string) : ``linear`` or ``log``.
    """
    variable = fields.String(required=True)
    minimum = fields.Float(data_key='min', required=True, allow_nan=False)
    maximum = fields.Float(data_key='max', required=True, allow_nan=False)
    points = fields.Integer(strict=True, required=True, validate=validate.Range(min=2))
    scale = EnumField(Scale, load_default=Scale.LINEAR)

    @post_load
    def make_grid(self, data: Dict[str, Any], **kwargs: Any) -> Any:
        return catalogue.SweepGrid(data['variable'], data['minimum'], data['maximum'], data['points'], data['scale'].value)


class ExperimentSpec(Schema):
    """Represents an experiment spec file.

    name (string) : the catalogued experiment.
    params (object) : parameter overrides.
    grid (object?) : replaces the default grid, see :class:`SweepGrid`.
    output (string?) : output file, standard output when omitted.
    format (string) : ``csv`` or ``json``.
    check_points (integer) : grid points at which the loss counter is cross-checked.
    seed (integer) : seed for picking the check points.
    """
    name = fields.String(required=True)
    params = fields.Dict(keys=fields.String(), load_default=dict)
    grid = fields.Nested(SweepGrid, load_default=None)
    output = fields.String(load_default=None)
    format = EnumField(OutputFormat, load_default=OutputFormat.CSV)
    check_points = fields.Integer(strict=True, load_default=0, validate=validate.Range(min=0))
    seed = fields.Integer(strict=True, load_default=DEFAULT_SEED)

    @post_load
    def make_spec(self, data: Dict[str, Any], **kwargs: Any) -> Any:
        return catalogue.ExperimentSpec(**{**data, 'format': data['format'].value})


class ThresholdQuery(Schema):
    """Represents a threshold query file.

    template (string) : the model template.
    params (object) : fixed template parameters.
    variable (string) : the searched template parameter.
    metric (string) : see :class:`Metric`.
    target (number) : the largest acceptable metric value.
    lower, upper (number) : variable bounds.
    direction (string) : see :class:`Direction`.
    horizon (number?) : T for cumulative metrics.
    """
    template = fields.String(required=True)
    params = fields.Dict(keys=fields.String(), load_default=dict)
    variable = fields.String(required=True)
    metric = EnumField(Metric, load_default=Metric.LOSS_RATIO)
    target = fields.Float(required=True, allow_nan=False)
    lower = fields.Float(required=True, allow_nan=False)
    upper = fields.Float(required=True, allow_nan=False)
    direction = EnumField(Direction, load_default=Direction.DECREASING)
    horizon = fields.Float(load_default=None, validate=positive_validator)

    @validates_schema
    def validate_bounds(self, data: Dict[str, Any], **kwargs: Any) -> None:
        if data['lower'] >= data['upper']:
            raise ValidationError('Must be below upper.', 'lower')
        if data['metric'] is not Metric.LOSS_RATIO and data.get('horizon') is None:
            raise ValidationError('Required for cumulative metrics.', 'horizon')

    @post_load
    def make_query(self, data: Dict[str, Any], **kwargs: Any) -> Any:
        return search.ThresholdQuery(**{**data, 'metric': data['metric'].value, 'direction': data['direction'].value})


class SimulationConfig(Schema):
    """Represents a simulation config file.

    replications (integer) : at least 1.
    horizon (number) : positive.
    seed (integer) : the master seed.
    population (array?) : initial population, empty when omitted.
    env (integer) : initial environment state, 1-based.
    counted_departures (array) : 1-based queues whose departures are losses.
    usage_weights (array?) : per-queue weights for Z_s.
    """
    replications = fields.Integer(strict=True, required=True, validate=validate.Range(min=1))
    horizon = fields.Float(required=True, validate=positive_validator)
    seed = fields.Integer(strict=True, load_default=DEFAULT_SEED)
    population = fields.List(fields.Integer(strict=True, validate=validate.Range(min=0)), load_default=None)
    env = fields.Integer(strict=True, load_default=1, validate=index_validator)
    counted_departures = fields.List(fields.Integer(strict=True, validate=index_validator), load_default=list)
    usage_weights = fields.List(fields.Float(allow_nan=False), load_default=None)
    batch_size = fields.Integer(strict=True, load_default=None, validate=validate.Range(min=1))
    trace = fields.String(load_default=None)

    @post_load
    def make_config(self, data: Dict[str, Any], **kwargs: Any) -> Any:
        return simulation.SimulationConfig(
            replications=data['replications'],
            horizon=data['horizon'],
            seed=data['seed'],
            population=data['population'],
            env=data['env'] - 1,
            counted_departures=tuple(q - 1 for q in data['counted_departures']),
            usage_weights=data['usage_weights'],
            batch_size=data['batch_size'],
            trace=data['trace'],
        )
