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

from typing import Iterable, Union, Tuple, Optional, Set
from common.exceptions import ModelValidationError
from models.network import NetworkModel, MultiplicativeTransition, ensure_valid

import logging
import numpy as np

__all__ = (
    'CountedDeparture',
    'counted_queues',
    'augment_with_loss_counter',
    'augment_with_arrival_counter',
    'augment_with_counters',
)

_log = logging.getLogger(__name__)

CountedDeparture = Union[int, Tuple[int, int]]


def counted_queues(model: NetworkModel, counted: Iterable[CountedDeparture]) -> Set[int]:
    queues: Set[int] = set()
    for item in counted:
        if isinstance(item, tuple):
            queue, target = item
            if target != 0:
                raise ModelValidationError(f'only departures leaving the network can be counted, got target {target}')
        else:
            queue = item
        queue = int(queue)
        if not 0 <= queue < model.n_queues:
            raise ModelValidationError(f'counted queue {queue + 1} is out of range')
        queues.add(queue)
    return queues


def _extend_labels(labels: Optional[Tuple[str, ...]], model: NetworkModel, name: str) -> Tuple[str, ...]:
    if labels is None:
        labels = tuple(model.queue_label(n) for n in range(model.n_queues))
    return labels + (name,)


def _extend_transition(
        transition: MultiplicativeTransition,
        last_row: np.ndarray,
        loss_weights: np.ndarray,
    ) -> MultiplicativeTransition:

    N = transition.matrix.shape[0]
    matrix = np.zeros((N + 1, N + 1), dtype=np.int64)
    matrix[:N, :N] = transition.matrix
    matrix[N, :N] = last_row
    matrix[N, N] = 1
    return MultiplicativeTransition(transition.from_env, transition.to_env, transition.rate, matrix, loss_weights)


def augment_with_loss_counter(
        model: NetworkModel,
        counted_departures: Iterable[CountedDeparture] = (),
        *,
        count_rejected: bool = True,
        label: str = 'lost',
    ) -> NetworkModel:
    """Appends a drain-free queue that accumulates lost customers.

    The counter receives every counted departure stream (``queue -> 0``,
    queues 0-based), ``loss_weights @ m`` customers at each multiplicative
    jump and, when ``count_rejected`` is set, the rejected arrivals. Its
    mean at time T is therefore E Z_l(T). Loss weights of the returned
    model are all zero; the counter itself is preserved by every jump.
    """
    ensure_valid(model, allow_reducible=True)
    counted = counted_queues(model, counted_departures)
    N, I = model.n_queues, model.n_env

    for queue in sorted(counted):
        if not np.any(model.departure_rates[:, queue, 0] > 0):
            raise ModelValidationError(
                f'queue {queue + 1} never leaves the network, so there is nothing to count',
                error_code='NOTHING_TO_COUNT',
            )

    arrivals = np.zeros((I, N + 1))
    arrivals[:, :N] = model.arrival_rates
    if count_rejected:
        arrivals[:, N] = model.rejected_rates

    departures = np.zeros((I, N + 1, N + 2))
    departures[:, :N, :N + 1] = model.departure_rates
    for queue in counted:
        departures[:, queue, N + 1] = model.departure_rates[:, queue, 0]
        departures[:, queue, 0] = 0.0

    transitions = tuple(
        _extend_transition(t, t.loss_weights, np.zeros(N + 1, dtype=np.int64))
        for t in model.transitions
    )

    _log.debug('appended loss counter to %d-queue model (counted queues: %s)', N, sorted(counted))
    return NetworkModel(
        n_queues=N + 1,
        n_env=I,
        arrival_rates=arrivals,
        departure_rates=departures,
        transitions=transitions,
        rejected_rates=model.rejected_rates,
        queue_labels=_extend_labels(model.queue_labels, model, label),
        env_labels=model.env_labels,
    )


def augment_with_arrival_counter(model: NetworkModel, *, label: str = 'arrived') -> NetworkModel:
    """Appends a drain-free queue that counts every arrival, rejected ones
    included, so that its mean at time T is E Z_a(T)."""
    ensure_valid(model, allow_reducible=True)
    N, I = model.n_queues, model.n_env

    arrivals = np.zeros((I, N + 1))
    arrivals[:, :N] = model.arrival_rates
    arrivals[:, N] = model.total_arrival_rates()

    departures = np.zeros((I, N + 1, N + 2))
    departures[:, :N, :N + 1] = model.departure_rates

    transitions = tuple(
        _extend_transition(t, np.zeros(N, dtype=np.int64), np.append(t.loss_weights, 0))
        for t in model.transitions
    )

    return NetworkModel(
        n_queues=N + 1,
        n_env=I,
        arrival_rates=arrivals,
        departure_rates=departures,
        transitions=transitions,
        rejected_rates=model.rejected_rates,
        queue_labels=_extend_labels(model.queue_labels, model, label),
        env_labels=model.env_labels,
    )


def augment_with_counters(
        model: NetworkModel,
        counted_departures: Iterable[CountedDeparture] = (),
    ) -> Tuple[NetworkModel, int, int]:
    """Appends an arrival counter and then a loss counter.

    The arrival counter must come first: the loss counter's own arrival
    stream carries the rejected arrivals, which would otherwise be counted
    twice. Returns the augmented model and the 0-based queue indices of
    the arrival and loss counters.
    """
    with_arrivals = augment_with_arrival_counter(model)
    augmented = augment_with_loss_counter(with_arrivals, counted_departures)
    return augmented, model.n_queues, model.n_queues + 1
