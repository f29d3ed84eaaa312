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

from typing import Sequence, Tuple, List, Dict, Any
from dataclasses import dataclass, field
from common.exceptions import ModelValidationError
from models.network import NetworkModel, MultiplicativeTransition
from builders.subsets import ordered_subsets, subset_positions, subset_label, indicator

import numpy as np

__all__ = (
    'ReroutingParams',
    'build_rerouting_network',
    'build_direct_only_network',
    'rerouting_usage_weights',
    'ring_routes',
)


@dataclass(frozen=True, eq=False)
class ReroutingParams:
    """Origin-destination pairs served by a direct link, with a two-link
    detour used while the direct link is down.

    Attributes
    ----------
    arrival_rates: :class:`numpy.ndarray`
        Length L; client arrival rate per pair.
    service_rates: :class:`numpy.ndarray`
        Length L; per-client completion rate, the same on either route.
    routes: Tuple[Tuple[:class:`int`, :class:`int`], ...]
        The two links (0-based) of each pair's detour.
    up_rates: :class:`numpy.ndarray`
        Length L; link failure rates.
    down_rates: :class:`numpy.ndarray`
        Length L; link repair rates.
    """
    arrival_rates: np.ndarray
    service_rates: np.ndarray
    routes: Tuple[Tuple[int, int], ...]
    up_rates: np.ndarray
    down_rates: np.ndarray
    links: int = field(init=False)

    def __post_init__(self) -> None:
        for name in ('arrival_rates', 'service_rates', 'up_rates', 'down_rates'):
            object.__setattr__(self, name, np.array(getattr(self, name), dtype=float))
        object.__setattr__(self, 'routes', tuple((int(a), int(b)) for a, b in self.routes))

        L = self.arrival_rates.shape[0] if self.arrival_rates.ndim == 1 else 0
        object.__setattr__(self, 'links', L)

        errors: List[str] = []
        if L < 3:
            errors.append('a detour needs at least three links')
        for name in ('service_rates', 'up_rates', 'down_rates'):
            values = getattr(self, name)
            if values.shape != (L,):
                errors.append(f'{name.replace("_", " ")} must have length {L}')
            elif np.any(~np.isfinite(values)) or np.any(values < 0):
                errors.append(f'{name.replace("_", " ")} must be finite and nonnegative')
        if np.any(~np.isfinite(self.arrival_rates)) or np.any(self.arrival_rates < 0):
            errors.append('arrival rates must be finite and nonnegative')
        if len(self.routes) != L:
            errors.append(f'exactly {L} detours are required')
        else:
            for n, (first, second) in enumerate(self.routes):
                if first == second or n in (first, second) or not (0 <= first < L and 0 <= second < L):
                    errors.append(f'detour of link {n + 1} must be two distinct other links, got ({first + 1}, {second + 1})')
        if errors:
            raise ModelValidationError(errors)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'arrival_rates': self.arrival_rates.tolist(),
            'service_rates': self.service_rates.tolist(),
            'routes': [[a + 1, b + 1] for a, b in self.routes],
            'up_rates': self.up_rates.tolist(),
            'down_rates': self.down_rates.tolist(),
        }


def ring_routes(links: int) -> Tuple[Tuple[int, int], ...]:
    """Detours of a ring: link n is bypassed over links n + 1 and n + 2."""
    return tuple(((n + 1) % links, (n + 2) % links) for n in range(links))


def rerouting_usage_weights(params: ReroutingParams) -> np.ndarray:
    """Links occupied per client: 1 on the direct route, 2 on a detour."""
    return np.concatenate([np.ones(params.links), 2 * np.ones(params.links)])


def build_rerouting_network(params: ReroutingParams) -> NetworkModel:
    """Encodes the rerouting network.

    Queues 1..L count clients on their direct link, queues L+1..2L clients
    on their detour. A failing link moves its direct clients to the detour
    when both detour links are up and destroys them otherwise; clients of
    every detour through the failed link are destroyed. A repaired link
    takes its detoured clients back. Arrivals that find both routes
    unavailable are rejected.
    """
    L = params.links
    N = 2 * L
    up_sets = ordered_subsets(L)
    position = subset_positions(up_sets)
    I = len(up_sets)

    arrivals = np.zeros((I, N))
    rejected = np.zeros(I)
    departures = np.zeros((I, N, N + 1))
    departures[:, :L, 0] = params.service_rates
    departures[:, L:, 0] = params.service_rates
    transitions: List[MultiplicativeTransition] = []

    for i, up in enumerate(up_sets):
        for n in range(L):
            first, second = params.routes[n]
            direct = indicator(n, up)
            detour = indicator(first, up) * indicator(second, up)
            arrivals[i, n] = params.arrival_rates[n] * direct
            arrivals[i, n + L] = params.arrival_rates[n] * (1 - direct) * detour
            rejected[i] += params.arrival_rates[n] * (1 - direct) * (1 - detour)

        for n in range(L):
            matrix = np.eye(N, dtype=np.int64)
            losses = np.zeros(N, dtype=np.int64)
            if n in up:
                matrix[n, n] = 0
                if set(params.routes[n]) <= up:
                    matrix[n + L, n] = 1
                else:
                    losses[n] = 1
                for other, route in enumerate(params.routes):
                    if n in route:
                        matrix[other + L, other + L] = 0
                        losses[other + L] = 1
                transitions.append(MultiplicativeTransition(i, position[up - {n}], params.up_rates[n], matrix, losses))
            else:
                matrix[n + L, n + L] = 0
                matrix[n, n + L] = 1
                transitions.append(MultiplicativeTransition(i, position[up | {n}], params.down_rates[n], matrix))

    return NetworkModel(
        n_queues=N,
        n_env=I,
        arrival_rates=arrivals,
        departure_rates=departures,
        transitions=transitions,
        rejected_rates=rejected,
        queue_labels=[f'direct{n + 1}' for n in range(L)] + [f'detour{n + 1}' for n in range(L)],
        env_labels=[subset_label('up', up) for up in up_sets],
    )


def build_direct_only_network(params: ReroutingParams) -> NetworkModel:
    """The same links without detours.

    A failing link destroys its clients and arrivals on a failed link are
    rejected. Compared against :func:`build_rerouting_network` to price
    the detours.
    """
    L = params.links
    up_sets = ordered_subsets(L)
    position = subset_positions(up_sets)
    I = len(up_sets)

    arrivals = np.zeros((I, L))
    rejected = np.zeros(I)
    departures = np.zeros((I, L, L + 1))
    departures[:, :, 0] = params.service_rates
    transitions: List[MultiplicativeTransition] = []

    for i, up in enumerate(up_sets):
        for n in range(L):
            on = indicator(n, up)
            arrivals[i, n] = params.arrival_rates[n] * on
            rejected[i] += params.arrival_rates[n] * (1 - on)

            if n in up:
                matrix = np.eye(L, dtype=np.int64)
                matrix[n, n] = 0
                losses = np.zeros(L, dtype=np.int64)
                losses[n] = 1
                transitions.append(MultiplicativeTransition(i, position[up - {n}], params.up_rates[n], matrix, losses))
            else:
                transitions.append(MultiplicativeTransition(
                    i, position[up | {n}], params.down_rates[n], np.eye(L, dtype=np.int64),
                ))

    return NetworkModel(
        n_queues=L,
        n_env=I,
        arrival_rates=arrivals,
        departure_rates=departures,
        transitions=transitions,
        rejected_rates=rejected,
        queue_labels=[f'direct{n + 1}' for n in range(L)],
        env_labels=[subset_label('up', up) for up in up_sets],
    )
