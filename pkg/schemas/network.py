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
from schemas.fields import MatrixField
from common.schemas_models import rate_validator, index_validator
from common.exceptions import ModelValidationError
from models import network as models

import json

__all__ = (
    'Transition',
    'Labels',
    'NetworkModel',
    'InitialState',
    'load_model_file',
)


class Transition(Schema):
    """Represents a multiplicative transition in a model file.

    Attributes
    ----------
    from: :class:`int`
        The environment state left, 1-based.
    to: :class:`int`
        The environment state entered, 1-based.
    rate: :class:`float`
        The rate of the transition.
    matrix: List[List[:class:`int`]]
        The N x N nonnegative integer matrix applied to the population.
    loss_weights: Optional[List[:class:`int`]]
        Customers of each queue destroyed by the transition; zeros when omitted.
    """
    from_env = fields.Integer(data_key='from', strict=True, required=True, validate=index_validator)
    to_env = fields.Integer(data_key='to', strict=True, required=True, validate=index_validator)
    rate = fields.Float(required=True, validate=rate_validator)
    matrix = MatrixField(2, integer=True, required=True)
    loss_weights = MatrixField(1, integer=True, load_default=None)


class Labels(Schema):
    queues = fields.List(fields.String(), load_default=None)
    env = fields.List(fields.String(), load_default=None)


class NetworkModel(Schema):
    """Represents a network model file.

    Indices are 1-based. ``departure_rates[i][n][0]`` is the rate of
    leaving the network from queue n in state i and
    ``departure_rates[i][n][k]`` the rate of moving on to queue k.

    Loading produces a :class:`models.network.NetworkModel`; validity
    beyond the file's shape is checked by :func:`models.network.validate`.
    """
    n_queues = fields.Integer(strict=True, required=True, validate=validate.Range(min=1))
    n_env = fields.Integer(strict=True, required=True, validate=validate.Range(min=1))
    arrival_rates = MatrixField(2, required=True)
    departure_rates = MatrixField(3, required=True)
    transitions = fields.List(fields.Nested(Transition), load_default=list)
    rejected_rates = MatrixField(1, load_default=None)
    labels = fields.Nested(Labels, load_default=None)

    @validates_schema
    def validate_shapes(self, data: Dict[str, Any], **kwargs: Any) -> None:
        N, I = data['n_queues'], data['n_env']
        errors: Dict[str, str] = {}
        if data['arrival_rates'].shape != (I, N):
            errors['arrival_rates'] = f'Must have shape ({I}, {N}).'
        if data['departure_rates'].shape != (I, N, N + 1):
            errors['departure_rates'] = f'Must have shape ({I}, {N}, {N + 1}).'
        rejected = data.get('rejected_rates')
        if rejected is not None and rejected.shape != (I,):
            errors['rejected_rates'] = f'Must have length {I}.'

        labels = data.get('labels') or {}
        if labels.get('queues') is not None and len(labels['queues']) != N:
            errors['labels'] = f'Queue labels must number {N}.'
        if labels.get('env') is not None and len(labels['env']) != I:
            errors['labels'] = f'Environment labels must number {I}.'
        if errors:
            raise ValidationError(errors)

    @post_load
    def make_model(self, data: Dict[str, Any], **kwargs: Any) -> Any:
        labels = data.get('labels') or {}
        return models.NetworkModel(
            n_queues=data['n_queues'],
            n_env=data['n_env'],
            arrival_rates=data['arrival_rates'],
            departure_rates=data['departure_rates'],
            transitions=[
                models.MultiplicativeTransition(
                    t['from_env'] - 1, t['to_env'] - 1, t['rate'], t['matrix'], t.get('loss_weights'),
                )
                for t in data['transitions']
            ],
            rejected_rates=data.get('rejected_rates'),
            queue_labels=labels.get('queues'),
            env_labels=labels.get('env'),
        )


class InitialState(Schema):
    """The initial point state (population, environment state), 1-based."""
    population = fields.List(fields.Integer(strict=True, validate=validate.Range(min=0)), load_default=None)
    env = fields.Integer(strict=True, load_default=1, validate=index_validator)


def load_model_file(path: str) -> models.NetworkModel:
    """Reads and loads a JSON model file.

    Raises :class:`ModelValidationError` when the file cannot be parsed or
    does not match the schema.
    """
    try:
        with open(path, encoding='utf-8') as fp:
            data = json.load(fp)
    except OSError as exc:
        raise ModelValidationError(f'cannot read model file {path!r}: {exc.strerror}') from None
    except json.JSONDecodeError as exc:
        raise ModelValidationError(f'model file {path!r} is not valid JSON: {exc}') from None

    return models.NetworkModel.from_dict(data)
