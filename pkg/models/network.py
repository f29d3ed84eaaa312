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

from typing import Optional, Sequence, Tuple, List, Dict, Any
from dataclasses import dataclass, field
from common.constants import DISTRIBUTION_TOLERANCE
from common.exceptions import ModelValidationError
from marshmallow import ValidationError as SchemaValidationError

import math
import numpy as np
import networkx as nx

__all__ = (
    'MultiplicativeTransition',
    'NetworkModel',
    'InitialCondition',
    'ValidationReport',
    'validate',
    'ensure_valid',
    'is_irreducible',
    'REDUCIBLE_ENVIRONMENT',
    'aggregate_env_generator',
    'environment_graph',
)

REDUCIBLE_ENVIRONMENT = 'environment chain is not irreducible'


def _frozen(array: Any, dtype: Any = float) -> np.ndarray:
    out = np.array(array, dtype=dtype)
    out.setflags(write=False)
    return out


def _frozen_integers(array: Any, name: str) -> np.ndarray:
    values = np.array(array, dtype=float)
    if not (np.all(np.isfinite(values)) and np.array_equal(values, np.floor(values))):
        raise ModelValidationError(f'transition {name} entries must be integers')
    return _frozen(values, dtype=np.int64)


@dataclass(frozen=True, eq=False)
class MultiplicativeTransition:
    """A jump of the environment from ``from_env`` to ``to_env`` that
    simultaneously replaces the population vector ``m`` by ``matrix @ m``.

    Environment indices are 0-based here; model files use 1-based indices.

    Attributes
    ----------
    from_env: :class:`int`
        The environment state the jump leaves.
    to_env: :class:`int`
        The environment state the jump enters. May equal ``from_env``.
    rate: :class:`float`
        The rate of the jump.
    matrix: :class:`numpy.ndarray`
        The N x N nonnegative integer matrix applied to the population.
    loss_weights: :class:`numpy.ndarray`
        Length N nonnegative integer vector; a jump with population ``m``
        destroys ``loss_weights @ m`` customers.
    """
    from_env: int
    to_env: int
    rate: float
    matrix: np.ndarray
    loss_weights: np.ndarray

    def __init__(
            self,
            from_env: int,
            to_env: int,
            rate: float,
            matrix: Any,
            loss_weights: Optional[Any] = None,
        ) -> None:

        matrix = _frozen_integers(matrix, 'matrix')
        if loss_weights is None:
            loss_weights = np.zeros(matrix.shape[1] if matrix.ndim == 2 else 0, dtype=np.int64)

        object.__setattr__(self, 'from_env', int(from_env))
        object.__setattr__(self, 'to_env', int(to_env))
        object.__setattr__(self, 'rate', float(rate))
        object.__setattr__(self, 'matrix', matrix)
        object.__setattr__(self, 'loss_weights', _frozen_integers(loss_weights, 'loss weight'))

    @property
    def is_identity(self) -> bool:
        return bool(np.array_equal(self.matrix, np.eye(self.matrix.shape[0], dtype=np.int64)))

    def to_dict(self) -> Dict[str, Any]:
        return {
            'from': self.from_env + 1,
            'to': self.to_env + 1,
            'rate': self.rate,
            'matrix': self.matrix.tolist(),
            'loss_weights': self.loss_weights.tolist(),
        }


@dataclass(frozen=True, eq=False)
class NetworkModel:
    """A network of Markov-modulated infinite-server queues with
    multiplicative transitions.

    Attributes
    ----------
    n_queues: :class:`int`
        The number of queues N.
    n_env: :class:`int`
        The number of environment states I.
    arrival_rates: :class:`numpy.ndarray`
        Array of shape (I, N); ``arrival_rates[i, n]`` is the arrival rate
        at queue n while the environment is in state i.
    departure_rates: :class:`numpy.ndarray`
        Array of shape (I, N, N + 1); ``departure_rates[i, n, 0]`` is the
        per-customer rate of leaving the network from queue n and
        ``departure_rates[i, n, k]`` for k >= 1 the per-customer rate of
        moving from queue n to queue k - 1.
    transitions: Tuple[:class:`MultiplicativeTransition`, ...]
        The multiplicative transitions. Several transitions may share the
        same pair of environment states.
    rejected_rates: :class:`numpy.ndarray`
        Length I; rate of arrivals that find no admissible queue in state i
        and are lost on arrival. They never enter the population.
    queue_labels: Optional[Tuple[:class:`str`, ...]]
        Human readable queue names.
    env_labels: Optional[Tuple[:class:`str`, ...]]
        Human readable environment state names.
    """
    n_queues: int
    n_env: int
    arrival_rates: np.ndarray
    departure_rates: np.ndarray
    transitions: Tuple[MultiplicativeTransition, ...] = ()
    rejected_rates: np.ndarray = field(default=None)  # type: ignore
    queue_labels: Optional[Tuple[str, ...]] = None
    env_labels: Optional[Tuple[str, ...]] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, 'n_queues', int(self.n_queues))
        object.__setattr__(self, 'n_env', int(self.n_env))
        object.__setattr__(self, 'arrival_rates', _frozen(self.arrival_rates))
        object.__setattr__(self, 'departure_rates', _frozen(self.departure_rates))
        object.__setattr__(self, 'transitions', tuple(self.transitions))

        if self.rejected_rates is None:
            object.__setattr__(self, 'rejected_rates', _frozen(np.zeros(self.n_env)))
        else:
            object.__setattr__(self, 'rejected_rates', _frozen(self.rejected_rates))
        if self.queue_labels is not None:
            object.__setattr__(self, 'queue_labels', tuple(self.queue_labels))
        if self.env_labels is not None:
            object.__setattr__(self, 'env_labels', tuple(self.env_labels))

    @property
    def n_states(self) -> int:
        """The dimension J = I * N of the mean vector."""
        return self.n_env * self.n_queues

    def index(self, env: int, queue: int) -> int:
        """The position of the pair (env, queue) in environment-major order."""
        return env * self.n_queues + queue

    def queue_label(self, queue: int) -> str:
        if self.queue_labels is not None:
            return self.queue_labels[queue]
        return f'q{queue + 1}'

    def env_label(self, env: int) -> str:
        if self.env_labels is not None:
            return self.env_labels[env]
        return f'e{env + 1}'

    def state_labels(self) -> List[str]:
        """Labels of the J mean-vector entries, ``env/queue``."""
        return [
            f'{self.env_label(i)}/{self.queue_label(n)}'
            for i in range(self.n_env)
            for n in range(self.n_queues)
        ]

    def total_arrival_rates(self) -> np.ndarray:
        """Length I vector of all arrivals per environment state, rejected ones included."""
        return self.arrival_rates.sum(axis=1) + self.rejected_rates

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> NetworkModel:
        """Loads the 1-based file format written by :meth:`to_dict`.

        Raises :class:`ModelValidationError` when ``data`` does not match
        the file schema.
        """
        from schemas.network import NetworkModel as NetworkModelSchema

        try:
            return NetworkModelSchema().load(data)  # type: ignore
        except SchemaValidationError as exc:
            raise ModelValidationError.from_external_exc(exc) from None

    def to_dict(self) -> Dict[str, Any]:
        """Serializes the model to the 1-based file format."""
        out: Dict[str, Any] = {
            'n_queues': self.n_queues,
            'n_env': self.n_env,
            'arrival_rates': self.arrival_rates.tolist(),
            'departure_rates': self.departure_rates.tolist(),
            'transitions': [t.to_dict() for t in self.transitions],
        }
        if np.any(self.rejected_rates):
            out['rejected_rates'] = self.rejected_rates.tolist()

        labels: Dict[str, Any] = {}
        if self.queue_labels is not None:
            labels['queues'] = list(self.queue_labels)
        if self.env_labels is not None:
            labels['env'] = list(self.env_labels)
        if labels:
            out['labels'] = labels

        return out


@dataclass(frozen=True)
class ValidationReport:
    """The outcome of :func:`validate`.

    Attributes
    ----------
    violations: Tuple[:class:`str`, ...]
        Human readable descriptions of every violated invariant. Indices in
        the messages are 1-based.
    """
    violations: Tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def to_dict(self) -> Dict[str, Any]:
        return {'valid': self.ok, 'violations': list(self.violations)}


@dataclass(frozen=True, eq=False)
class InitialCondition:
    """The law of the system at time 0 as far as first moments go.

    Attributes
    ----------
    env_dist: :class:`numpy.ndarray`
        The environment distribution pi(0), length I.
    mean_vector: :class:`numpy.ndarray`
        Length J; entry (i, n) is E[M_n(0) 1{X(0) = i}].
    point: Optional[Tuple[Tuple[:class:`int`, ...], :class:`int`]]
        The point state (m, i) the condition was built from, if any.
        Simulation and the truncated master equation need it.
    """
    env_dist: np.ndarray
    mean_vector: np.ndarray
    point: Optional[Tuple[Tuple[int, ...], int]] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, 'env_dist', _frozen(self.env_dist))
        object.__setattr__(self, 'mean_vector', _frozen(self.mean_vector))

        pi = self.env_dist
        if pi.ndim != 1 or np.any(~np.isfinite(pi)) or np.any(pi < 0):
            raise ModelValidationError('initial environment distribution must be a finite nonnegative vector')
        if abs(pi.sum() - 1.0) > DISTRIBUTION_TOLERANCE:
            raise ModelValidationError(f'initial environment distribution sums to {pi.sum()!r}, not 1')

        n_env = pi.shape[0]
        mean = self.mean_vector
        if mean.ndim != 1 or mean.shape[0] % n_env != 0:
            raise ModelValidationError('initial mean vector length must be a multiple of the number of environment states')
        blocks = mean.reshape(n_env, -1)
        for i in np.flatnonzero(pi == 0):
            if np.any(blocks[i] != 0):
                raise ModelValidationError(f'initial mean is nonzero in environment state {i + 1} which has probability 0')

    @classmethod
    def from_point(cls, model: NetworkModel, population: Sequence[int], env: int) -> InitialCondition:
        """The condition induced by starting in population ``population``
        and environment state ``env`` (0-based) with certainty."""
        population = tuple(int(m) for m in population)
        if len(population) != model.n_queues or any(m < 0 for m in population):
            raise ModelValidationError(f'initial population must be {model.n_queues} nonnegative integers')
        if not 0 <= env < model.n_env:
            raise ModelValidationError(f'initial environment state {env + 1} is out of range')

        pi = np.zeros(model.n_env)
        pi[env] = 1.0
        mean = np.zeros(model.n_states)
        start = model.index(env, 0)
        mean[start:start + model.n_queues] = population
        return cls(pi, mean, (population, env))

    @classmethod
    def empty(cls, model: NetworkModel, env: int = 0) -> InitialCondition:
        """An empty network with the environment in state ``env``."""
        return cls.from_point(model, [0] * model.n_queues, env)

    def to_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {
            'env_dist': self.env_dist.tolist(),
            'mean_vector': self.mean_vector.tolist(),
        }
        if self.point is not None:
            out['population'] = list(self.point[0])
            out['env'] = self.point[1] + 1
        return out


def _check_rates(values: np.ndarray, describe: str, violations: List[str]) -> None:
    for index in zip(*np.nonzero(~np.isfinite(values))):
        violations.append(f'non-finite {describe} at {_one_based(index)}')
    with np.errstate(invalid='ignore'):
        negative = np.nonzero(values < 0)
    for index in zip(*negative):
        violations.append(f'negative {describe} at {_one_based(index)}')


def _one_based(index: Tuple[Any, ...]) -> str:
    return '(' + ','.join(str(int(k) + 1) for k in index) + ')'


def environment_graph(model: NetworkModel) -> nx.DiGraph:
    """The directed graph of environment states with an edge i -> j
    whenever some transition with i != j has positive rate."""
    graph = nx.DiGraph()
    graph.add_nodes_from(range(model.n_env))
    for transition in model.transitions:
        if transition.from_env != transition.to_env and transition.rate > 0:
            graph.add_edge(transition.from_env, transition.to_env)
    return graph


def validate(model: NetworkModel) -> ValidationReport:
    """Checks every invariant of a network model.

    Returns a report whose violation list is empty if and only if the
    model is well formed. Irreducibility of the environment is checked as
    strong connectivity of :func:`environment_graph`.
    """
    violations: List[str] = []
    N, I = model.n_queues, model.n_env

    if N < 1:
        violations.append('number of queues must be positive')
    if I < 1:
        violations.append('number of environment states must be positive')
    if violations:
        return ValidationReport(tuple(violations))

    if model.arrival_rates.shape != (I, N):
        violations.append(f'arrival rates must have shape ({I}, {N}), got {model.arrival_rates.shape}')
    else:
        _check_rates(model.arrival_rates, 'rate', violations)

    if model.departure_rates.shape != (I, N, N + 1):
        violations.append(f'departure rates must have shape ({I}, {N}, {N + 1}), got {model.departure_rates.shape}')
    else:
        _check_rates(model.departure_rates, 'departure rate', violations)
        for i in range(I):
            for n in range(N):
                if model.departure_rates[i, n, n + 1] != 0:
                    violations.append(f'self-routing rate at ({i + 1},{n + 1}) must be 0')

    if model.rejected_rates.shape != (I,):
        violations.append(f'rejected arrival rates must have length {I}')
    else:
        _check_rates(model.rejected_rates, 'rejected arrival rate', violations)

    for k, transition in enumerate(model.transitions, start=1):
        where = f'transition {k}'
        if not (0 <= transition.from_env < I and 0 <= transition.to_env < I):
            violations.append(f'{where}: environment states out of range')
        if not math.isfinite(transition.rate):
            violations.append(f'{where}: non-finite rate')
        elif transition.rate < 0:
            violations.append(f'{where}: negative rate')

        matrix = transition.matrix
        if matrix.shape != (N, N):
            violations.append(f'{where}: matrix must have shape ({N}, {N}), got {matrix.shape}')
            continue
        if np.any(matrix < 0):
            violations.append(f'{where}: matrix entries must be nonnegative integers')

        weights = transition.loss_weights
        if weights.shape != (N,):
            violations.append(f'{where}: loss weights must have length {N}')
            continue
        if np.any(weights < 0):
            violations.append(f'{where}: loss weights must be nonnegative integers')
        for n in np.flatnonzero(weights):
            if np.any(matrix[:, n] != 0):
                violations.append(f'{where}: queue {n + 1} is counted lost but its column relocates customers')

    if not violations and not is_irreducible(model):
        violations.append(REDUCIBLE_ENVIRONMENT)

    return ValidationReport(tuple(violations))


def is_irreducible(model: NetworkModel) -> bool:
    """Whether every environment state can reach every other one."""
    return model.n_env == 1 or nx.is_strongly_connected(environment_graph(model))


def ensure_valid(model: NetworkModel, *, allow_reducible: bool = False) -> NetworkModel:
    """Returns the model unchanged or raises :class:`ModelValidationError`.

    Transient analysis does not need an irreducible environment; callers
    that only integrate over finite horizons pass ``allow_reducible``.
    """
    report = validate(model)
    if allow_reducible:
        report = ValidationReport(tuple(v for v in report.violations if v != REDUCIBLE_ENVIRONMENT))
    if not report.ok:
        raise ModelValidationError.from_report(report)
    return model


def aggregate_env_generator(model: NetworkModel) -> np.ndarray:
    """The I x I generator of the environment chain.

    Off-diagonal entries sum the rates of all transitions between a pair of
    distinct states; self-transitions do not move the environment and are
    left out. Rows sum to zero.
    """
    generator = np.zeros((model.n_env, model.n_env))
    for transition in model.transitions:
        if transition.from_env != transition.to_env:
            generator[transition.from_env, transition.to_env] += transition.rate

    np.fill_diagonal(generator, 0.0)
    generator[np.diag_indices_from(generator)] = -generator.sum(axis=1)
    return generator
