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

from typing import Optional, Sequence, Mapping, List, Dict, Any
from dataclasses import dataclass, field
from scipy.optimize import minimize_scalar
from common.constants import GOLDEN_SECTION_XTOL
from common.exceptions import UsageError, InfeasibleQueryError
from experiments.templates import get_template, Params
from experiments.evaluate import point_metrics, evaluate
from experiments.search import ThresholdResult, bisect_threshold

import math
import logging
import numpy as np

__all__ = (
    'COST_KINDS',
    'EndpointChoice',
    'RetrialCostPoint',
    'RetrialCostReport',
    'retrial_cost_point',
    'refine_retrial_cost',
    'CrossingReport',
    'storage_endpoint_choices',
    'retrial_cost_optimum',
    'rerouting_crossing',
    'run_cost_optimization',
)

_log = logging.getLogger(__name__)

COST_KINDS = ('storage', 'retrial', 'rerouting')


@dataclass(frozen=True)
class EndpointChoice:
    """Linear cost ``ratio * E Z_l(T) + E Z_s(T)`` of storing no premium
    files against storing only premium files.

    ``critical_ratio`` is the loss-to-storage price ratio at which both
    choices cost the same; premium storage wins above it.
    """
    rate: float
    ratio: float
    cost_none: float
    cost_all: float
    critical_ratio: float

    @property
    def best_premium_fraction(self) -> float:
        return 0.0 if self.cost_none <= self.cost_all else 1.0

    def to_dict(self) -> Dict[str, Any]:
        return {
            'rate': self.rate,
            'ratio': self.ratio,
            'cost_none': self.cost_none,
            'cost_all': self.cost_all,
            'best_premium_fraction': self.best_premium_fraction,
            'critical_ratio': self.critical_ratio,
        }


def storage_endpoint_choices(
        rate: float,
        ratios: Sequence[float],
        *,
        variable: str = 'gamma_d',
        params: Optional[Mapping[str, Any]] = None,
        horizon: float = 1.0,
    ) -> List[EndpointChoice]:
    """Compares the two extreme premium fractions at every price ratio.

    The optimal premium fraction of a linear cost sits at 0 or 1, so only
    the endpoints are evaluated.
    """
    template = get_template('premium-storage')
    base = template.resolve(params)
    none = point_metrics(template, {**base, variable: rate, 'premium_fraction': 0.0}, horizon)
    full = point_metrics(template, {**base, variable: rate, 'premium_fraction': 1.0}, horizon)

    saved = none.expected_losses - full.expected_losses
    extra = full.expected_usage - none.expected_usage
    critical = extra / saved if saved > 0 else math.inf

    return [
        EndpointChoice(
            rate=rate,
            ratio=ratio,
            cost_none=ratio * none.expected_losses + none.expected_usage,
            cost_all=ratio * full.expected_losses + full.expected_usage,
            critical_ratio=critical,
        )
        for ratio in ratios
    ]


@dataclass(frozen=True)
class RetrialCostPoint:
    gamma_u: float
    gamma_d: Optional[float]
    cost: float

    @property
    def feasible(self) -> bool:
        return self.gamma_d is not None

    def to_dict(self) -> Dict[str, Any]:
        return {'gamma_u': self.gamma_u, 'gamma_d': self.gamma_d, 'cost': self.cost, 'feasible': self.feasible}


def retrial_cost_point(
        base: Params,
        gamma_u: float,
        target: float,
        cost_up: float,
        cost_down: float,
        gamma_d_bounds: Sequence[float] = (1e-6, 1e3),
    ) -> RetrialCostPoint:
    """The minimal repair rate meeting the loss ratio target at a given
    failure rate, and the cost of the pair."""
    template = get_template('retrial')
    result = bisect_threshold(
        lambda gamma_d: evaluate(template, {**base, 'gamma_u': gamma_u, 'gamma_d': gamma_d}, 'loss_ratio'),
        gamma_d_bounds[0], gamma_d_bounds[1], target,
    )
    if not result.feasible:
        return RetrialCostPoint(gamma_u, None, math.inf)
    return RetrialCostPoint(gamma_u, result.value, cost_up / gamma_u + cost_down * result.value)


def refine_retrial_cost(
        base: Params,
        grid: Sequence[RetrialCostPoint],
        target: float,
        cost_up: float,
        cost_down: float,
        gamma_d_bounds: Sequence[float] = (1e-6, 1e3),
    ) -> RetrialCostPoint:
    """Golden-section refinement around the cheapest point of a log-spaced
    failure-rate grid. Edge minima are returned unrefined."""
    costs = np.array([p.cost for p in grid])
    best = int(np.argmin(costs))
    optimum = grid[best]
    if not 0 < best < len(grid) - 1:
        return optimum

    def cost(log_gamma_u: float) -> float:
        return retrial_cost_point(base, math.exp(log_gamma_u), target, cost_up, cost_down, gamma_d_bounds).cost

    logs = [math.log(grid[k].gamma_u) for k in (best - 1, best, best + 1)]
    refined = minimize_scalar(cost, bracket=tuple(logs), method='golden', options={'xtol': GOLDEN_SECTION_XTOL})
    candidate = retrial_cost_point(base, math.exp(float(refined.x)), target, cost_up, cost_down, gamma_d_bounds)
    return candidate if candidate.cost <= optimum.cost else optimum


@dataclass(frozen=True)
class RetrialCostReport:
    """The cheapest (failure rate, repair rate) pair meeting a loss ratio target.

    Attributes
    ----------
    optimum: :class:`RetrialCostPoint`
        The optimum after golden-section refinement.
    grid: List[:class:`RetrialCostPoint`]
        Every point of the failure-rate grid with its minimal repair rate.
    """
    optimum: RetrialCostPoint
    grid: List[RetrialCostPoint] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {'optimum': self.optimum.to_dict(), 'grid': [point.to_dict() for point in self.grid]}


def retrial_cost_optimum(
        target: float,
        *,
        cost_up: float = 1.0,
        cost_down: float = 1.0,
        params: Optional[Mapping[str, Any]] = None,
        gamma_u_bounds: Sequence[float] = (1e-3, 1.0),
        points: int = 25,
        gamma_d_bounds: Sequence[float] = (1e-6, 1e3),
    ) -> RetrialCostReport:
    """Minimizes ``cost_up / gamma_u + cost_down * gamma_d`` subject to a
    loss ratio of at most ``target``.

    For each failure rate on a log grid the minimal acceptable repair rate
    is found by bisection; the best grid point is then refined by a
    golden-section search over the log failure rate.
    """
    if not (cost_up > 0 and cost_down > 0):
        raise UsageError('cost coefficients must be positive')
    if points < 2:
        raise UsageError('the failure rate grid needs at least 2 points')

    base = get_template('retrial').resolve(params)

    def point(log_gamma_u: float) -> RetrialCostPoint:
        return retrial_cost_point(base, math.exp(log_gamma_u), target, cost_up, cost_down, gamma_d_bounds)

    logs = np.linspace(math.log(gamma_u_bounds[0]), math.log(gamma_u_bounds[1]), points)
    grid = [point(x) for x in logs]
    if not any(p.feasible for p in grid):
        raise InfeasibleQueryError(f'no failure rate in {tuple(gamma_u_bounds)!r} meets loss ratio {target!r}')

    optimum = refine_retrial_cost(base, grid, target, cost_up, cost_down, gamma_d_bounds)

    _log.info('retrial cost optimum: gamma_u=%.6g gamma_d=%s cost=%.6g', optimum.gamma_u, optimum.gamma_d, optimum.cost)
    return RetrialCostReport(optimum, grid)


@dataclass(frozen=True)
class CrossingReport:
    """Where detours start to pay off.

    ``critical_ratio`` is the loss-to-usage price ratio above which the
    network with detours is cheaper, None when no ratio in the searched
    range makes it so.
    """
    critical_ratio: Optional[float]
    losses_rerouted: float
    losses_direct: float
    usage_rerouted: float
    usage_direct: float
    search: ThresholdResult

    def to_dict(self) -> Dict[str, Any]:
        return {
            'critical_ratio': self.critical_ratio,
            'losses_rerouted': self.losses_rerouted,
            'losses_direct': self.losses_direct,
            'usage_rerouted': self.usage_rerouted,
            'usage_direct': self.usage_direct,
            'status': self.search.status,
        }


def rerouting_crossing(
        params: Optional[Mapping[str, Any]] = None,
        *,
        horizon: float = 1.0,
        ratio_bounds: Sequence[float] = (1e-6, 1e6),
    ) -> CrossingReport:
    """Bisects the price ratio at which rerouting and direct-only routing
    have the same cost ``ratio * E Z_l(T) + E Z_s(T)``."""
    rerouting = get_template('rerouting')
    direct = get_template('direct-only')
    rerouted = point_metrics(rerouting, rerouting.resolve(params), horizon)
    plain = point_metrics(direct, direct.resolve(params), horizon)

    def difference(ratio: float) -> float:
        return (ratio * rerouted.expected_losses + rerouted.expected_usage) - \
            (ratio * plain.expected_losses + plain.expected_usage)

    search = bisect_threshold(difference, ratio_bounds[0], ratio_bounds[1], 0.0)
    critical = search.value
    return CrossingReport(
        critical_ratio=critical,
        losses_rerouted=rerouted.expected_losses,
        losses_direct=plain.expected_losses,
        usage_rerouted=rerouted.expected_usage,
        usage_direct=plain.expected_usage,
        search=search,
    )


def run_cost_optimization(kind: str, params: Optional[Mapping[str, Any]] = None, **options: Any) -> Any:
    """Dispatches to the cost optimization named by ``kind``.

    ``storage`` returns a list of :class:`EndpointChoice`, ``retrial`` a
    :class:`RetrialCostReport` and ``rerouting`` a :class:`CrossingReport`.
    """
    if kind == 'storage':
        return storage_endpoint_choices(params=params, **options)
    if kind == 'retrial':
        return retrial_cost_optimum(params=params, **options)
    if kind == 'rerouting':
        return rerouting_crossing(params, **options)
    raise UsageError(f'unknown cost optimization {kind!r}; choose from {", ".join(COST_KINDS)}')
