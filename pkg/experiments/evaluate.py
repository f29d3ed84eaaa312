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

from typing import Optional, Dict, Any
from dataclasses import dataclass
from common.exceptions import UsageError, NumericalError
from models.network import InitialCondition
from models.assembly import assemble
from analysis.metrics import counter_counts, expected_losses, metric_w, stationary_loss_ratio
from experiments.templates import Template, Params

import logging

__all__ = (
    'METRICS',
    'PointMetrics',
    'point_metrics',
    'evaluate',
    'check_counter_identity',
)

_log = logging.getLogger(__name__)

METRICS = ('loss_ratio', 'loss_fraction', 'expected_losses', 'expected_arrivals', 'expected_usage')


@dataclass(frozen=True)
class PointMetrics:
    """Cumulative metrics over [0, T] from an empty network in the first
    environment state."""
    expected_arrivals: float
    expected_losses: float
    expected_usage: float

    @property
    def loss_fraction(self) -> float:
        if self.expected_arrivals == 0:
            return 0.0
        return self.expected_losses / self.expected_arrivals

    def to_dict(self) -> Dict[str, Any]:
        return {
            'expected_arrivals': self.expected_arrivals,
            'expected_losses': self.expected_losses,
            'expected_usage': self.expected_usage,
            'loss_fraction': self.loss_fraction,
        }


def point_metrics(template: Template, params: Params, horizon: float) -> PointMetrics:
    """E Z_a(T) and E Z_l(T) from the counter-augmented transient means,
    E Z_s(T) from the integrated means."""
    model = template.build(params)
    init = InitialCondition.empty(model)
    counts = counter_counts(model, init, horizon, template.counted(params))
    usage = metric_w(assemble(model), init, template.usage_weights(params, model), horizon)
    return PointMetrics(counts.arrivals, counts.losses, usage)


def evaluate(template: Template, params: Params, metric: str, horizon: Optional[float] = None) -> float:
    """A single metric of the template at ``params``.

    ``loss_ratio`` is the long-run loss fraction; every other metric is
    cumulative over ``[0, horizon]``.
    """
    if metric == 'loss_ratio':
        model = template.build(params)
        return stationary_loss_ratio(assemble(model), template.counted(params))
    if metric not in METRICS:
        raise UsageError(f'unknown metric {metric!r}; choose from {", ".join(METRICS)}')
    if horizon is None or not horizon > 0:
        raise UsageError(f'metric {metric!r} needs a positive horizon')

    values = point_metrics(template, params, horizon)
    if metric == 'loss_fraction':
        return values.loss_fraction
    return getattr(values, metric)


def check_counter_identity(template: Template, params: Params, horizon: float, tol: float = 1e-8) -> float:
    """Compares E Z_l(T) from counter augmentation with the weighted
    integral of the means; raises :class:`NumericalError` on disagreement.

    Returns the absolute difference.
    """
    model = template.build(params)
    init = InitialCondition.empty(model)
    counted = template.counted(params)
    augmented = counter_counts(model, init, horizon, counted).losses
    integrated = expected_losses(assemble(model), init, horizon, counted)
    difference = abs(augmented - integrated)
    if difference > tol * max(1.0, abs(integrated)):
        raise NumericalError(
            f'loss counter {augmented!r} and weighted integral {integrated!r} disagree at {dict(params)!r}',
        )
    _log.debug('counter identity holds to %.3g', difference)
    return difference
