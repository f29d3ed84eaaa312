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

from typing import Sequence, List, Dict, Any
from dataclasses import dataclass, field
from common.exceptions import ModelValidationError
from models.network import NetworkModel, MultiplicativeTransition
from builders.subsets import ordered_subsets, subset_positions, subset_label, indicator

import numpy as np

__all__ = (
    'RetrialNetworkParams',
    'build_retrial_network',
    'single_retrial_params',
    'pool_queues',
)


@dataclass(frozen=True, eq=False)
class RetrialNetworkParams:
    """Stations that fail and get repaired, each with a retrial pool.

    Attributes
    ----------
    arrival_rates: :class:`numpy.ndarray`
        Length S; external arrivals per station.
    routing_rates: :class:`numpy.ndarray`
        Shape (S, S + 1); column 0 is the rate of leaving after service,
        column k the rate of moving on to station k - 1.
    retrial_rates: :class:`numpy.ndarray`
        Length S; per-customer rate kappa of retrying from the pool.
    renege_rates: :class:`numpy.ndarray`
        Length S; per-customer rate nu of abandoning the pool.
    up_rates: :class:`numpy.ndarray`
        Length S; failure rates.
    down_rates: :class:`numpy.ndarray`
        Length S; repair rates.
    """
    arrival_rates: np.ndarray
    routing_rates: np.ndarray
    retrial_rates: np.ndarray
    renege_rates: np.ndarray
    up_rates: np.ndarray
    down_rates: np.ndarray
    stations: int = field(init=False)

    def __post_init__(self) -> None:
        for name in ('arrival_rates', 'routing_rates', 'retrial_rates', 'renege_rates', 'up_rates', 'down_rates'):
            object.__setattr__(self, name, np.array(getattr(self, name), dtype=float))

        S = self.arrival_rates.shape[0] if self.arrival_rates.ndim == 1 else 0
        object.__setattr__(self, 'stations', S)

        errors: List[str] = []
        if S < 1:
            errors.append('at least one station is required')
        if self.routing_rates.shape != (S, S + 1):
            errors.append(f'routing rates must have shape ({S}, {S + 1})')
        for name in ('retrial_rates', 'renege_rates', 'up_rates', 'down_rates'):
            if getattr(self, name).shape != (S,):
                errors.append(f'{name.replace("_", " ")} must have length {S}')
        if not errors:
            for name in ('arrival_rates', 'routing_rates', 'retrial_rates', 'renege_rates', 'up_rates', 'down_rates'):
                values = getattr(self, name)
                if np.any(~np.isfinite(values)) or np.any(values < 0):
                    errors.append(f'{name.replace("_", " ")} must be finite and nonnegative')
        if errors:
            raise ModelValidationError(errors)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'arrival_rates': self.arrival_rates.tolist(),
            'routing_rates': self.routing_rates.tolist(),
            'retrial_rates': self.retrial_rates.tolist(),
            'renege_rates': self.renege_rates.tolist(),
            'up_rates': self.up_rates.tolist(),
            'down_rates': self.down_rates.tolist(),
        }


def single_retrial_params(
        lam: float,
        kappa: float,
        nu: float,
        mu: float,
        gamma_u: float,
        gamma_d: float,
    ) -> RetrialNetworkParams:
    """One station serving at rate ``mu`` with its retrial pool."""
    return RetrialNetworkParams(
        arrival_rates=[lam],
        routing_rates=[[mu, 0.0]],
        retrial_rates=[kappa],
        renege_rates=[nu],
        up_rates=[gamma_u],
        down_rates=[gamma_d],
    )


def pool_queues(params: RetrialNetworkParams) -> List[int]:
    """The 0-based queue indices of the retrial pools; reneging from them is a loss."""
    return list(range(params.stations, 2 * params.stations))


def build_retrial_network(params: RetrialNetworkParams) -> NetworkModel:
    """Encodes the retrial network.

    Queues 1..S hold customers in service at the stations, queues S+1..2S
    the retrial pools. Environment states are the sets of stations that
    are up, ordered all-up first, then by decreasing size. A failing
    station moves its customers into its pool; repairs leave the
    population unchanged.
    """
    S = params.stations
    N = 2 * S
    up_sets = ordered_subsets(S)
    position = subset_positions(up_sets)
    I = len(up_sets)

    arrivals = np.zeros((I, N))
    departures = np.zeros((I, N, N + 1))
    transitions: List[MultiplicativeTransition] = []

    for i, up in enumerate(up_sets):
        for n in range(S):
            on = indicator(n, up)
            arrivals[i, n] = params.arrival_rates[n] * on
            arrivals[i, n + S] = params.arrival_rates[n] * (1 - on)

            departures[i, n, 0] = params.routing_rates[n, 0]
            for target in range(S):
                rate = params.routing_rates[n, target + 1]
                target_on = indicator(target, up)
                departures[i, n, target + 1] += rate * target_on
                departures[i, n, target + S + 1] += rate * (1 - target_on)

            departures[i, n + S, n + 1] = params.retrial_rates[n] * on
            departures[i, n + S, 0] = params.renege_rates[n]

        for n in range(S):
            if n in up:
                matrix = np.eye(N, dtype=np.int64)
                matrix[n, n] = 0
                matrix[n + S, n] = 1
                transitions.append(MultiplicativeTransition(i, position[up - {n}], params.up_rates[n], matrix))
            else:
                transitions.append(MultiplicativeTransition(
                    i, position[up | {n}], params.down_rates[n], np.eye(N, dtype=np.int64),
                ))

    return NetworkModel(
        n_queues=N,
        n_env=I,
        arrival_rates=arrivals,
        departure_rates=departures,
        transitions=transitions,
        queue_labels=[f'station{n + 1}' for n in range(S)] + [f'pool{n + 1}' for n in range(S)],
        env_labels=[subset_label('up', up) for up in up_sets],
    )
