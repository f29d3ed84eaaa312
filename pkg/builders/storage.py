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

from typing import Optional, Tuple, List, Dict, Any
from dataclasses import dataclass, field
from common.constants import MAX_STORAGE_LOCATIONS
from common.exceptions import ModelValidationError
from models.network import NetworkModel, MultiplicativeTransition
from builders.subsets import ordered_subsets, subset_positions, subset_label, Subset

import numpy as np

__all__ = (
    'StorageParams',
    'build_storage_network',
    'storage_usage_weights',
    'build_premium_storage',
    'PREMIUM_USAGE_WEIGHTS',
    'PREMIUM_QUEUES',
    'PREMIUM_ENV_STATES',
)

PREMIUM_QUEUES = ('premium-A', 'premium-B', 'premium-AB', 'basic-A', 'basic-B')
PREMIUM_ENV_STATES = ('both-up', 'A-up', 'B-up', 'both-down')
PREMIUM_USAGE_WEIGHTS = (1.0, 1.0, 2.0, 1.0, 1.0)


@dataclass(frozen=True, eq=False)
class StorageParams:
    """Files stored at subsets of K failing locations.

    Queues are the nonempty subsets of locations in the order of
    :func:`builders.subsets.ordered_subsets`: all locations first, then by
    decreasing size and lexicographically within one size. For K = 3 the
    single-location files are queues 5, 6 and 7.

    Attributes
    ----------
    locations: :class:`int`
        The number of locations K.
    arrival_rates: :class:`numpy.ndarray`
        Length 2^K - 1; rate of new files destined to each subset.
    copy_rates: Optional[:class:`numpy.ndarray`]
        Shape (2^K - 1, 2^K) or (2^K, 2^K - 1, 2^K); per-file rate of moving
        from subset n to subset k - 1 (column k), or of being deleted
        (column 0). Zero when omitted.
    up_rates: :class:`numpy.ndarray`
        Length K; location failure rates.
    down_rates: :class:`numpy.ndarray`
        Length K; location repair rates.
    """
    locations: int
    arrival_rates: np.ndarray
    up_rates: np.ndarray
    down_rates: np.ndarray
    copy_rates: Optional[np.ndarray] = None
    subsets: Tuple[Subset, ...] = field(init=False)

    def __post_init__(self) -> None:
        K = int(self.locations)
        object.__setattr__(self, 'locations', K)
        errors: List[str] = []
        if not 1 <= K <= MAX_STORAGE_LOCATIONS:
            raise ModelValidationError(f'locations must lie in 1..{MAX_STORAGE_LOCATIONS}, got {K}')

        subsets = ordered_subsets(K, include_empty=False)
        object.__setattr__(self, 'subsets', subsets)
        N, I = len(subsets), 2 ** K

        for name in ('arrival_rates', 'up_rates', 'down_rates'):
            object.__setattr__(self, name, np.array(getattr(self, name), dtype=float))
        if self.copy_rates is None:
            object.__setattr__(self, 'copy_rates', np.zeros((N, N + 1)))
        else:
            object.__setattr__(self, 'copy_rates', np.array(self.copy_rates, dtype=float))

        expected = {'arrival_rates': (N,), 'up_rates': (K,), 'down_rates': (K,)}
        for name, shape in expected.items():
            values = getattr(self, name)
            if values.shape != shape:
                errors.append(f'{name.replace("_", " ")} must have length {shape[0]}')
            elif np.any(~np.isfinite(values)) or np.any(values < 0):
                errors.append(f'{name.replace("_", " ")} must be finite and nonnegative')
        if self.copy_rates.shape not in ((N, N + 1), (I, N, N + 1)):
            errors.append(f'copy rates must have shape ({N}, {N + 1}) or ({I}, {N}, {N + 1})')
        elif np.any(~np.isfinite(self.copy_rates)) or np.any(self.copy_rates < 0):
            errors.append('copy rates must be finite and nonnegative')
        if errors:
            raise ModelValidationError(errors)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'locations': self.locations,
            'arrival_rates': self.arrival_rates.tolist(),
            'copy_rates': self.copy_rates.tolist(),
            'up_rates': self.up_rates.tolist(),
            'down_rates': self.down_rates.tolist(),
        }


def storage_usage_weights(params: StorageParams) -> np.ndarray:
    """Copies held per file of each queue, the size of its subset."""
    return np.array([len(subset) for subset in params.subsets], dtype=float)


def build_storage_network(params: StorageParams) -> NetworkModel:
    """Encodes the replicated storage system.

    A file destined to subset S arrives at the part of S that is up; if
    none of S is up it is rejected. A failing location k drops its copy
    of every file: files held only at k are lost, the others move to the
    subset without k. Repairs leave the population unchanged.
    """
    K = params.locations
    subsets = params.subsets
    queue_of = subset_positions(subsets)
    up_sets = ordered_subsets(K)
    env_of = subset_positions(up_sets)
    N, I = len(subsets), len(up_sets)

    arrivals = np.zeros((I, N))
    rejected = np.zeros(I)
    for i, up in enumerate(up_sets):
        for n, subset in enumerate(subsets):
            surviving = subset & up
            if surviving:
                arrivals[i, queue_of[surviving]] += params.arrival_rates[n]
            else:
                rejected[i] += params.arrival_rates[n]

    departures = np.broadcast_to(params.copy_rates, (I, N, N + 1)).copy()

    transitions: List[MultiplicativeTransition] = []
    for i, up in enumerate(up_sets):
        for k in range(K):
            if k not in up:
                transitions.append(MultiplicativeTransition(
                    i, env_of[up | {k}], params.down_rates[k], np.eye(N, dtype=np.int64),
                ))
                continue

            matrix = np.eye(N, dtype=np.int64)
            losses = np.zeros(N, dtype=np.int64)
            for n, subset in enumerate(subsets):
                if k not in subset:
                    continue
                matrix[n, n] = 0
                rest = subset - {k}
                if rest:
                    matrix[queue_of[rest], n] = 1
                else:
                    losses[n] = 1
            transitions.append(MultiplicativeTransition(i, env_of[up - {k}], params.up_rates[k], matrix, losses))

    return NetworkModel(
        n_queues=N,
        n_env=I,
        arrival_rates=arrivals,
        departure_rates=departures,
        transitions=transitions,
        rejected_rates=rejected,
        queue_labels=[subset_label('at', subset) for subset in subsets],
        env_labels=[subset_label('up', up) for up in up_sets],
    )


def build_premium_storage(lam: float, p: float, mu_copy: float, gamma_u: float, gamma_d: float) -> NetworkModel:
    """Two locations A and B storing basic and premium files.

    A fraction ``p`` of the ``lam`` new files per unit time is basic and
    kept at one location only. Premium files are copied to the other
    location at rate ``mu_copy`` whenever both are up, which also covers
    re-copying after a repair. New files of either class go to each up
    location with equal probability and are lost when both are down.

    Queues: premium at A, premium at B, premium at both, basic at A,
    basic at B. Environment states: both up, only A up, only B up, both
    down. The usage weights :data:`PREMIUM_USAGE_WEIGHTS` count stored
    copies.
    """
    values = {'lam': lam, 'mu_copy': mu_copy, 'gamma_u': gamma_u, 'gamma_d': gamma_d}
    errors = [f'{name} must be finite and nonnegative, got {value!r}'
              for name, value in values.items() if not (np.isfinite(value) and value >= 0)]
    if not 0 <= p <= 1:
        errors.append(f'basic fraction p must lie in [0, 1], got {p!r}')
    if errors:
        raise ModelValidationError(errors)

    basic, premium = p * lam, (1 - p) * lam
    both_up, a_up, b_up, both_down = range(4)
    prem_a, prem_b, prem_ab, basic_a, basic_b = range(5)

    arrivals = np.zeros((4, 5))
    arrivals[both_up] = [premium / 2, premium / 2, 0, basic / 2, basic / 2]
    arrivals[a_up, prem_a], arrivals[a_up, basic_a] = premium, basic
    arrivals[b_up, prem_b], arrivals[b_up, basic_b] = premium, basic
    rejected = np.array([0, 0, 0, lam], dtype=float)

    departures = np.zeros((4, 5, 6))
    departures[both_up, prem_a, prem_ab + 1] = mu_copy
    departures[both_up, prem_b, prem_ab + 1] = mu_copy

    def failure(lost: Tuple[int, int], survivor: int) -> Tuple[np.ndarray, np.ndarray]:
        matrix = np.eye(5, dtype=np.int64)
        losses = np.zeros(5, dtype=np.int64)
        for queue in lost:
            matrix[queue, queue] = 0
            losses[queue] = 1
        matrix[prem_ab, prem_ab] = 0
        matrix[survivor, prem_ab] = 1
        return matrix, losses

    a_fails = failure((prem_a, basic_a), prem_b)
    b_fails = failure((prem_b, basic_b), prem_a)
    identity = np.eye(5, dtype=np.int64)

    transitions = [
        MultiplicativeTransition(both_up, b_up, gamma_u, *a_fails),
        MultiplicativeTransition(a_up, both_down, gamma_u, *a_fails),
        MultiplicativeTransition(both_up, a_up, gamma_u, *b_fails),
        MultiplicativeTransition(b_up, both_down, gamma_u, *b_fails),
        MultiplicativeTransition(b_up, both_up, gamma_d, identity),
        MultiplicativeTransition(both_down, a_up, gamma_d, identity),
        MultiplicativeTransition(a_up, both_up, gamma_d, identity),
        MultiplicativeTransition(both_down, b_up, gamma_d, identity),
    ]

    return NetworkModel(
        n_queues=5,
        n_env=4,
        arrival_rates=arrivals,
        departure_rates=departures,
        transitions=transitions,
        rejected_rates=rejected,
        queue_labels=PREMIUM_QUEUES,
        env_labels=PREMIUM_ENV_STATES,
    )
