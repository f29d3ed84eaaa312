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
from dataclasses import dataclass
from scipy import sparse
from scipy.stats import poisson
from common.constants import (
    LEAK_TOLERANCE,
    UNIFORMIZATION_TOLERANCE,
    MAX_TRUNCATED_QUEUES,
    MAX_TRUNCATION_CAP,
    MAX_TRUNCATED_ENV,
)
from common.exceptions import UsageError
from models.network import NetworkModel, ensure_valid

import logging
import numpy as np

__all__ = (
    'TruncatedDistribution',
    'truncated_generator',
    'truncated_distribution',
    'marginal_moments',
)

_log = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class TruncatedDistribution:
    """The law of (M(T), X(T)) on the lattice {0..cap}^N x {1..I}.

    Attributes
    ----------
    probabilities: :class:`numpy.ndarray`
        Array of shape (I, cap + 1, ..., cap + 1); entry ``[i, m_1, ..., m_N]``
        is the probability of population m in environment state i.
    leak: :class:`float`
        The mass that left the lattice before T.
    cap: :class:`int`
        The largest population per queue kept on the lattice.
    horizon: :class:`float`
        The time T.
    flagged: :class:`bool`
        True when ``leak`` exceeds the declared tolerance.
    """
    probabilities: np.ndarray
    leak: float
    cap: int
    horizon: float
    flagged: bool

    @property
    def mean_vector(self) -> np.ndarray:
        """Length J; entry (i, n) is E[M_n(T) 1{X(T) = i}] restricted to the lattice."""
        return marginal_moments(self.probabilities)[1]

    @property
    def env_marginal(self) -> np.ndarray:
        return marginal_moments(self.probabilities)[0]

    def to_dict(self) -> Dict[str, Any]:
        return {
            'cap': self.cap,
            'horizon': self.horizon,
            'leak': self.leak,
            'flagged': self.flagged,
            'env_marginal': self.env_marginal.tolist(),
            'mean_vector': self.mean_vector.tolist(),
        }


def marginal_moments(probabilities: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """The environment marginal and the first moments of a probability table
    shaped (I, C + 1, ..., C + 1).

    Returns ``(env_marginal, mean_vector)`` with the mean vector in
    environment-major order.
    """
    probabilities = np.asarray(probabilities, dtype=float)
    n_env, n_queues = probabilities.shape[0], probabilities.ndim - 1
    levels = np.arange(probabilities.shape[1], dtype=float)

    env_marginal = probabilities.reshape(n_env, -1).sum(axis=1)
    means = np.zeros((n_env, n_queues))
    for n in range(n_queues):
        other = tuple(axis for axis in range(1, n_queues + 1) if axis != n + 1)
        marginal = probabilities.sum(axis=other) if other else probabilities
        means[:, n] = marginal @ levels

    return env_marginal, means.reshape(-1)


def _check_scale(model: NetworkModel, cap: int) -> None:
    errors: List[str] = []
    if model.n_queues > MAX_TRUNCATED_QUEUES:
        errors.append(f'at most {MAX_TRUNCATED_QUEUES} queues can be truncated, got {model.n_queues}')
    if model.n_env > MAX_TRUNCATED_ENV:
        errors.append(f'at most {MAX_TRUNCATED_ENV} environment states can be truncated, got {model.n_env}')
    if not 0 < cap <= MAX_TRUNCATION_CAP:
        errors.append(f'cap must lie in 1..{MAX_TRUNCATION_CAP}, got {cap}')
    if errors:
        raise UsageError(errors)


def truncated_generator(model: NetworkModel, cap: int) -> sparse.csr_matrix:
    """The generator of (M, X) restricted to {0..cap}^N x {1..I}.

    States are numbered ``i * L + k`` where k is the row-major index of
    the population and ``L = (cap + 1)^N``; the last state collects every
    transition that would leave the lattice and is absorbing.
    """
    _check_scale(model, cap)
    N, I = model.n_queues, model.n_env
    shape = (cap + 1,) * N
    size = int(np.prod(shape))
    leak = I * size

    points = np.indices(shape).reshape(N, -1).T
    origin = np.arange(size)
    rows: List[np.ndarray] = []
    cols: List[np.ndarray] = []
    vals: List[np.ndarray] = []

    def connect(env_from: int, env_to: int, targets: np.ndarray, rates: np.ndarray) -> None:
        inside = np.all(targets <= cap, axis=1)
        moving = rates > 0
        dest = np.full(size, leak, dtype=np.int64)
        dest[inside] = env_to * size + np.ravel_multi_index(tuple(targets[inside].T), shape)
        source = env_from * size + origin
        keep = moving & (dest != source)
        rows.append(source[keep])
        cols.append(dest[keep])
        vals.append(rates[keep])

    eye = np.eye(N, dtype=np.int64)
    for i in range(I):
        for n in range(N):
            connect(i, i, points + eye[n], np.full(size, model.arrival_rates[i, n]))
            drained = points - eye[n]
            connect(i, i, np.maximum(drained, 0), model.departure_rates[i, n, 0] * points[:, n])
            for k in range(N):
                if k != n:
                    connect(i, i, np.maximum(drained + eye[k], 0), model.departure_rates[i, n, k + 1] * points[:, n])

    for transition in model.transitions:
        connect(
            transition.from_env,
            transition.to_env,
            points @ transition.matrix.T,
            np.full(size, transition.rate),
        )

    row = np.concatenate(rows) if rows else np.zeros(0, dtype=np.int64)
    col = np.concatenate(cols) if cols else np.zeros(0, dtype=np.int64)
    val = np.concatenate(vals) if vals else np.zeros(0)

    total = leak + 1
    generator = sparse.coo_matrix((val, (row, col)), shape=(total, total)).tocsr()
    exit_rates = np.asarray(generator.sum(axis=1)).ravel()
    generator = generator - sparse.diags(exit_rates)
    _log.debug('truncated generator: %d states, %d transitions', total, generator.nnz)
    return generator.tocsr()


def truncated_distribution(
        model: NetworkModel,
        cap: int,
        env_dist: Sequence[float],
        population: Sequence[int],
        T: float,
        *,
        leak_tolerance: float = LEAK_TOLERANCE,
        tol: float = UNIFORMIZATION_TOLERANCE,
    ) -> TruncatedDistribution:
    """Solves the master equation on the truncated lattice by uniformization.

    The process starts in population ``population`` with the environment
    drawn from ``env_dist``. The Poisson series is cut once its remaining
    weight drops below ``tol``, so every probability is accurate to that
    absolute error. The result is flagged when the leaked mass exceeds
    ``leak_tolerance``.
    """
    ensure_valid(model, allow_reducible=True)
    _check_scale(model, cap)
    N, I = model.n_queues, model.n_env

    population = tuple(int(m) for m in population)
    if len(population) != N or any(not 0 <= m <= cap for m in population):
        raise UsageError(f'initial population must be {N} integers within 0..{cap}')
    env_dist = np.asarray(env_dist, dtype=float)
    if env_dist.shape != (I,):
        raise UsageError(f'initial environment distribution must have length {I}')
    if T < 0:
        raise UsageError('horizon must be nonnegative')

    generator = truncated_generator(model, cap)
    shape = (cap + 1,) * N
    size = int(np.prod(shape))
    start = np.ravel_multi_index(population, shape)

    p = np.zeros(generator.shape[0])
    p[np.arange(I) * size + start] = env_dist

    rate = float(-generator.diagonal().min())
    if rate > 0 and T > 0:
        forward = generator.T.tocsr()
        horizon = rate * T
        terms = int(poisson.isf(tol, horizon)) + 1
        weights = poisson.pmf(np.arange(terms + 1), horizon)
        _log.debug('uniformization: rate %g, %d terms', rate, terms)

        v = p
        p = weights[0] * v
        for k in range(1, terms + 1):
            v = v + forward @ v / rate
            p += weights[k] * v
        p /= weights.sum()

    leak = float(p[-1])
    flagged = leak > leak_tolerance
    if flagged:
        _log.warning('truncated distribution leaked %.3g of its mass beyond cap %d', leak, cap)

    probabilities = p[:-1].reshape((I,) + shape)
    return TruncatedDistribution(probabilities, leak, cap, float(T), flagged)
