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

from typing import Iterable, Dict, Any
from dataclasses import dataclass
from common.exceptions import NumericalError
from models.network import NetworkModel, InitialCondition
from models.augment import CountedDeparture, augment_with_counters, counted_queues
from models.assembly import AssembledSystem, assemble
from analysis.moments import (
    transient_mean,
    integrated_mean,
    integrated_env_distribution,
    stationary_mean,
)

import numpy as np

__all__ = (
    'CumulativeCounts',
    'expand_weights',
    'metric_v',
    'metric_w',
    'loss_weight_vector',
    'expected_arrivals',
    'expected_losses',
    'extend_initial',
    'counter_counts',
    'stationary_loss_ratio',
)


@dataclass(frozen=True)
class CumulativeCounts:
    """Expected cumulative counts over [0, T].

    Attributes
    ----------
    arrivals: :class:`float`
        E Z_a(T), rejected arrivals included.
    losses: :class:`float`
        E Z_l(T).
    """
    arrivals: float
    losses: float

    @property
    def loss_fraction(self) -> float:
        if self.arrivals == 0:
            return 0.0
        return self.losses / self.arrivals

    def to_dict(self) -> Dict[str, Any]:
        return {'arrivals': self.arrivals, 'losses': self.losses, 'loss_fraction': self.loss_fraction}


def expand_weights(model: NetworkModel, weights: Any) -> np.ndarray:
    """Turns per-queue weights (length N) or per-state weights (shape
    (I, N) or length J) into a length J vector."""
    weights = np.asarray(weights, dtype=float)
    N, I = model.n_queues, model.n_env
    if weights.shape == (N,):
        return np.tile(weights, I)
    if weights.shape == (I, N):
        return weights.reshape(-1)
    if weights.shape == (N * I,):
        return weights
    raise NumericalError(f'weights must have length {N}, shape ({I}, {N}) or length {N * I}, got {weights.shape}')


def metric_v(sys: AssembledSystem, init: InitialCondition, weights: Any, T: float) -> float:
    """v(T) = <weights, Mbar(T)>."""
    return float(expand_weights(sys.model, weights) @ transient_mean(sys, init, T))


def metric_w(sys: AssembledSystem, init: InitialCondition, weights: Any, T: float) -> float:
    """w(T) = <weights, integral of Mbar over [0, T]>."""
    return float(expand_weights(sys.model, weights) @ integrated_mean(sys, init, T))


def loss_weight_vector(model: NetworkModel, counted_departures: Iterable[CountedDeparture] = ()) -> np.ndarray:
    """The rate at which a customer at (i, n) is lost.

    Sums the jump rates out of i weighted by their loss weights and the
    counted departure rates of state i.
    """
    counted = counted_queues(model, counted_departures)
    weights = np.zeros((model.n_env, model.n_queues))
    for transition in model.transitions:
        weights[transition.from_env] += transition.rate * transition.loss_weights
    for queue in counted:
        weights[:, queue] += model.departure_rates[:, queue, 0]
    return weights.reshape(-1)


def expected_arrivals(sys: AssembledSystem, init: InitialCondition, T: float) -> float:
    """E Z_a(T) from the integrated environment law."""
    occupation = integrated_env_distribution(sys, init.env_dist, T)
    return float(sys.model.total_arrival_rates() @ occupation)


def expected_losses(
        sys: AssembledSystem,
        init: InitialCondition,
        T: float,
        counted_departures: Iterable[CountedDeparture] = (),
    ) -> float:
    """E Z_l(T) as a weighted integral of the means plus the rejected arrivals."""
    weights = loss_weight_vector(sys.model, counted_departures)
    losses = metric_w(sys, init, weights, T)
    if np.any(sys.model.rejected_rates):
        occupation = integrated_env_distribution(sys, init.env_dist, T)
        losses += float(sys.model.rejected_rates @ occupation)
    return losses


def extend_initial(init: InitialCondition, n_queues: int, extra: int) -> InitialCondition:
    """The initial condition of a model with ``extra`` empty queues appended."""
    n_env = init.env_dist.shape[0]
    blocks = init.mean_vector.reshape(n_env, n_queues)
    mean = np.hstack([blocks, np.zeros((n_env, extra))]).reshape(-1)

    point = None
    if init.point is not None:
        population, env = init.point
        point = (population + (0,) * extra, env)

    return InitialCondition(init.env_dist, mean, point)


def counter_counts(
        model: NetworkModel,
        init: InitialCondition,
        T: float,
        counted_departures: Iterable[CountedDeparture] = (),
    ) -> CumulativeCounts:
    """E Z_a(T) and E Z_l(T) as transient means of appended counter queues."""
    augmented, arrival_queue, loss_queue = augment_with_counters(model, counted_departures)
    sys = assemble(augmented)
    mean = transient_mean(sys, extend_initial(init, model.n_queues, 2), T).reshape(model.n_env, -1)
    return CumulativeCounts(
        arrivals=float(mean[:, arrival_queue].sum()),
        losses=float(mean[:, loss_queue].sum()),
    )


def stationary_loss_ratio(sys: AssembledSystem, counted_departures: Iterable[CountedDeparture] = ()) -> float:
    """The long-run fraction of arrivals that are lost."""
    pi, mean = stationary_mean(sys)
    arrivals = float(sys.model.total_arrival_rates() @ pi)
    if arrivals == 0:
        return 0.0

    losses = float(loss_weight_vector(sys.model, counted_departures) @ mean)
    losses += float(sys.model.rejected_rates @ pi)
    return losses / arrivals
