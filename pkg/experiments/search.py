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

from typing import Callable, Optional, Dict, Any
from dataclasses import dataclass, field
from common.constants import BISECTION_RTOL, BISECTION_MAX_ITERATIONS
from common.exceptions import UsageError, ConvergenceError, MonotonicityError
from experiments.templates import get_template
from experiments.evaluate import METRICS, evaluate

import math
import logging

__all__ = (
    'ThresholdQuery',
    'ThresholdResult',
    'bisect_threshold',
    'run_threshold_search',
)

_log = logging.getLogger(__name__)

DIRECTIONS = ('decreasing', 'increasing')


@dataclass(frozen=True)
class ThresholdQuery:
    """Find the rate at which a metric crosses its target.

    Attributes
    ----------
    template: :class:`str`
        The model template, see :data:`experiments.templates.TEMPLATES`.
    variable: :class:`str`
        The template parameter searched over.
    metric: :class:`str`
        ``loss_ratio`` or one of the cumulative metrics, usually ``loss_fraction``.
    target: :class:`float`
        The largest acceptable metric value.
    lower: :class:`float`
        Lower bound of the variable.
    upper: :class:`float`
        Upper bound of the variable.
    direction: :class:`str`
        ``decreasing`` when the metric falls as the variable grows, the
        answer is then the smallest acceptable value; ``increasing``
        otherwise, the answer is then the largest acceptable value.
    params: Dict[:class:`str`, Any]
        Fixed template parameters overriding the defaults.
    horizon: Optional[:class:`float`]
        T for cumulative metrics.
    """
    template: str
    variable: str
    metric: str
    target: float
    lower: float
    upper: float
    direction: str = 'decreasing'
    params: Dict[str, Any] = field(default_factory=dict)
    horizon: Optional[float] = None

    def __post_init__(self) -> None:
        errors = []
        if self.direction not in DIRECTIONS:
            errors.append(f'direction must be one of {", ".join(DIRECTIONS)}')
        if self.metric not in METRICS:
            errors.append(f'metric must be one of {", ".join(METRICS)}')
        if not (math.isfinite(self.lower) and math.isfinite(self.upper) and self.lower < self.upper):
            errors.append('variable bounds must be finite with lower < upper')
        if self.metric != 'loss_ratio' and not (self.horizon and self.horizon > 0):
            errors.append(f'metric {self.metric!r} needs a positive horizon')
        if errors:
            raise UsageError(errors)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'template': self.template,
            'variable': self.variable,
            'metric': self.metric,
            'target': self.target,
            'lower': self.lower,
            'upper': self.upper,
            'direction': self.direction,
            'params': dict(self.params),
            'horizon': self.horizon,
        }


@dataclass(frozen=True)
class ThresholdResult:
    """The outcome of a threshold search.

    ``status`` is ``found`` when the target is crossed inside the bounds,
    ``unconstrained`` when every value within the bounds meets it (``value``
    is then the bound that is cheapest) and ``infeasible`` when none does;
    ``metric`` is then the value at the most favourable bound.
    """
    status: str
    value: Optional[float]
    metric: float
    iterations: int = 0

    @property
    def feasible(self) -> bool:
        return self.status != 'infeasible'

    def to_dict(self) -> Dict[str, Any]:
        return {
            'status': self.status,
            'value': self.value,
            'metric': self.metric,
            'iterations': self.iterations,
        }


def bisect_threshold(
        func: Callable[[float], float],
        lower: float,
        upper: float,
        target: float,
        *,
        decreasing: bool = True,
        rtol: float = BISECTION_RTOL,
        max_iterations: int = BISECTION_MAX_ITERATIONS,
    ) -> ThresholdResult:
    """Bisects a monotone function for the boundary of ``func(x) <= target``.

    The bracket is halved until its width is below ``rtol`` times the
    larger endpoint magnitude; the returned value lies on the acceptable
    side.
    """
    at_lower, at_upper = func(lower), func(upper)
    if (decreasing and at_lower < at_upper) or (not decreasing and at_lower > at_upper):
        raise MonotonicityError(
            f'metric is {at_lower!r} at {lower!r} and {at_upper!r} at {upper!r}, '
            f'not {"decreasing" if decreasing else "increasing"}',
        )

    if decreasing:
        good, bad, at_good, at_bad = upper, lower, at_upper, at_lower
    else:
        good, bad, at_good, at_bad = lower, upper, at_lower, at_upper

    if at_good > target:
        return ThresholdResult('infeasible', None, at_good)
    if at_bad <= target:
        return ThresholdResult('unconstrained', bad, at_bad)

    iterations = 0
    while abs(good - bad) > rtol * max(abs(good), abs(bad)):
        if iterations >= max_iterations:
            raise ConvergenceError(f'bisection did not reach relative width {rtol!r} in {max_iterations} steps')
        middle = 0.5 * (good + bad)
        value = func(middle)
        _log.debug('bisection step %d: f(%.12g) = %.12g', iterations, middle, value)
        if value <= target:
            good, at_good = middle, value
        else:
            bad = middle
        iterations += 1

    return ThresholdResult('found', good, at_good, iterations)


def run_threshold_search(query: ThresholdQuery) -> ThresholdResult:
    """Runs a threshold search against a model template."""
    template = get_template(query.template)
    base = template.resolve(query.params)
    if query.variable not in base:
        raise UsageError(f'template {template.name!r} has no parameter {query.variable!r}')

    def metric(x: float) -> float:
        return evaluate(template, {**base, query.variable: x}, query.metric, query.horizon)

    result = bisect_threshold(
        metric, query.lower, query.upper, query.target,
        decreasing=query.direction == 'decreasing',
    )
    _log.info(
        'threshold search on %s.%s: %s (value %s, metric %.6g)',
        template.name, query.variable, result.status, result.value, result.metric,
    )
    return result
