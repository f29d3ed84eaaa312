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

from typing import Optional, Tuple, List, Dict, Any, IO, Iterable
from dataclasses import dataclass, field
from concurrent.futures import ThreadPoolExecutor
from common.constants import (
    CONFIDENCE_Z,
    DEFAULT_SEED,
    DEFAULT_SIM_BATCH,
    DEFAULT_WORKERS,
    POPULATION_LIMIT,
)
from common.exceptions import UsageError, NumericalError
from common.utils import get_env_var, new_run_id
from models.network import NetworkModel, ensure_valid
from models.augment import CountedDeparture, counted_queues
from analysis.metrics import expand_weights

import json
import logging
import numpy as np

__all__ = (
    'SimulationConfig',
    'MetricEstimate',
    'SimulationResult',
    'simulate',
)

_log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SimulationConfig:
    """Parameters of a simulation run.

    Attributes
    ----------
    replications: :class:`int`
        The number of independent replications R.
    horizon: :class:`float`
        The time T at which every replication stops.
    seed: :class:`int`
        The master seed; batches draw from substreams spawned from it.
    population: Optional[Tuple[:class:`int`, ...]]
        The initial population, empty when omitted.
    env: :class:`int`
        The initial environment state (0-based).
    counted_departures: Tuple[CountedDeparture, ...]
        Queues whose departures out of the network count as losses.
    usage_weights: Optional[Any]
        Weights whose time integral against the population is Z_s. Per
        queue (length N) or per environment and queue.
    batch_size: Optional[:class:`int`]
        Replications simulated in lock-step. Defaults to
        ``LAPIS_FLOW_SIM_BATCH``.
    workers: Optional[:class:`int`]
        Threads simulating batches. Defaults to ``LAPIS_FLOW_WORKERS``.
    trace: Optional[:class:`str`]
        Path of a JSON-lines file receiving the events of the first
        replication.
    """
    replications: int
    horizon: float
    seed: int = DEFAULT_SEED
    population: Optional[Tuple[int, ...]] = None
    env: int = 0
    counted_departures: Tuple[CountedDeparture, ...] = ()
    usage_weights: Optional[Any] = field(default=None, compare=False)
    batch_size: Optional[int] = None
    workers: Optional[int] = None
    trace: Optional[str] = None

    def __post_init__(self) -> None:
        errors = []
        if int(self.replications) < 1:
            errors.append('replications must be at least 1')
        if not float(self.horizon) > 0:
            errors.append('horizon must be positive')
        if self.batch_size is not None and self.batch_size < 1:
            errors.append('batch size must be at least 1')
        if self.workers is not None and self.workers < 1:
            errors.append('workers must be at least 1')
        if errors:
            raise UsageError(errors)

        object.__setattr__(self, 'counted_departures', tuple(self.counted_departures))
        if self.population is not None:
            object.__setattr__(self, 'population', tuple(int(m) for m in self.population))


@dataclass(frozen=True, eq=False)
class MetricEstimate:
    """A replication average with its 95% confidence half-width.

    ``mean``, ``sd`` and ``half_width`` are floats for scalar metrics and
    arrays for vector valued ones.
    """
    mean: Any
    sd: Any
    half_width: Any

    @classmethod
    def from_samples(cls, samples: np.ndarray) -> MetricEstimate:
        samples = np.asarray(samples, dtype=float)
        count = samples.shape[0]
        mean = samples.mean(axis=0)
        sd = samples.std(axis=0, ddof=1) if count > 1 else np.zeros_like(mean)
        half_width = CONFIDENCE_Z * sd / np.sqrt(count)
        if samples.ndim == 1:
            return cls(float(mean), float(sd), float(half_width))
        return cls(mean, sd, half_width)

    @classmethod
    def from_ratio(cls, numerator: np.ndarray, denominator: np.ndarray) -> MetricEstimate:
        """The ratio of two replication means; the half-width comes from
        the delta method."""
        count = numerator.shape[0]
        scale = denominator.mean()
        if scale == 0:
            return cls(0.0, 0.0, 0.0)

        ratio = numerator.mean() / scale
        residual = numerator - ratio * denominator
        sd = float(residual.std(ddof=1) / scale) if count > 1 else 0.0
        return cls(float(ratio), sd, CONFIDENCE_Z * sd / float(np.sqrt(count)))

    def contains(self, value: Any) -> bool:
        """Whether ``value`` lies inside the confidence interval."""
        return bool(np.all(np.abs(np.asarray(value) - self.mean) <= self.half_width))

    def to_dict(self) -> Dict[str, Any]:
        return {
            'mean': np.asarray(self.mean).tolist(),
            'sd': np.asarray(self.sd).tolist(),
            'half_width': np.asarray(self.half_width).tolist(),
        }


@dataclass(frozen=True, eq=False)
class SimulationResult:
    """Replication estimates at the horizon.

    Attributes
    ----------
    run_id: :class:`str`
        ULID tagging the run in logs and traces.
    replications: :class:`int`
        Replications that finished; overflowed ones are left out.
    overflowed: :class:`int`
        Replications aborted because a population exceeded 2**31.
    arrivals: :class:`MetricEstimate`
        Z_a(T), rejected arrivals included.
    losses: :class:`MetricEstimate`
        Z_l(T).
    usage: :class:`MetricEstimate`
        Z_s(T).
    loss_fraction: :class:`MetricEstimate`
        E Z_l(T) / E Z_a(T).
    mean: :class:`MetricEstimate`
        Length J; entry (i, n) estimates E[M_n(T) 1{X(T) = i}].
    env_dist: :class:`MetricEstimate`
        Length I; the environment law at T.
    """
    run_id: str
    replications: int
    overflowed: int
    arrivals: MetricEstimate
    losses: MetricEstimate
    usage: MetricEstimate
    loss_fraction: MetricEstimate
    mean: MetricEstimate
    env_dist: MetricEstimate

    def to_dict(self) -> Dict[str, Any]:
        return {
            'run_id': self.run_id,
            'replications': self.replications,
            'overflowed': self.overflowed,
            'arrivals': self.arrivals.to_dict(),
            'losses': self.losses.to_dict(),
            'usage': self.usage.to_dict(),
            'loss_fraction': self.loss_fraction.to_dict(),
            'mean': self.mean.to_dict(),
            'env_dist': self.env_dist.to_dict(),
        }


@dataclass(frozen=True, eq=False)
class _EventTable:
    # Event columns per environment state: N arrivals, one rejected
    # arrival, N * (N + 1) departures (source-major) and the padded
    # multiplicative transitions leaving that state.
    n_queues: int
    arrival_rates: np.ndarray
    rejected_rates: np.ndarray
    departure_rates: np.ndarray
    transition_rates: np.ndarray
    transition_slots: np.ndarray
    counted: np.ndarray
    usage_weights: np.ndarray
    matrices: Tuple[np.ndarray, ...]
    loss_weights: Tuple[np.ndarray, ...]
    targets: np.ndarray

    @classmethod
    def build(cls, model: NetworkModel, counted: Iterable[int], usage_weights: np.ndarray) -> _EventTable:
        I = model.n_env
        leaving: List[List[int]] = [[] for _ in range(I)]
        for k, transition in enumerate(model.transitions):
            if transition.rate > 0:
                leaving[transition.from_env].append(k)

        width = max((len(slots) for slots in leaving), default=0)
        rates = np.zeros((I, width))
        slots = np.full((I, width), -1, dtype=np.int64)
        for i, indices in enumerate(leaving):
            for j, k in enumerate(indices):
                rates[i, j] = model.transitions[k].rate
                slots[i, j] = k

        mask = np.zeros(model.n_queues, dtype=bool)
        mask[list(counted)] = True

        return cls(
            n_queues=model.n_queues,
            arrival_rates=model.arrival_rates,
            rejected_rates=model.rejected_rates,
            departure_rates=model.departure_rates.reshape(I, model.n_queues, model.n_queues + 1),
            transition_rates=rates,
            transition_slots=slots,
            counted=mask,
            usage_weights=usage_weights,
            matrices=tuple(t.matrix for t in model.transitions),
            loss_weights=tuple(t.loss_weights for t in model.transitions),
            targets=np.array([t.to_env for t in model.transitions], dtype=np.int64),
        )


@dataclass
class _BatchOutcome:
    arrivals: np.ndarray
    losses: np.ndarray
    usage: np.ndarray
    population: np.ndarray
    env: np.ndarray
    overflowed: np.ndarray


class _Tracer:
    def __init__(self, stream: IO[str], run_id: str) -> None:
        self.stream = stream
        self.run_id = run_id

    def emit(self, t: float, kind: str, **indices: int) -> None:
        record: Dict[str, Any] = {'run': self.run_id, 't': t, 'kind': kind}
        record.update({key: int(value) + 1 for key, value in indices.items()})
        self.stream.write(json.dumps(record) + '\n')


def _simulate_batch(
        table: _EventTable,
        size: int,
        horizon: float,
        population: np.ndarray,
        env0: int,
        seed: np.random.SeedSequence,
        tracer: Optional[_Tracer] = None,
    ) -> _BatchOutcome:

    rng = np.random.Generator(np.random.Philox(seed))
    N = table.n_queues
    first_departure = N + 1
    first_transition = first_departure + N * (N + 1)

    m = np.tile(population, (size, 1))
    env = np.full(size, env0, dtype=np.int64)
    t = np.zeros(size)
    arrivals = np.zeros(size)
    losses = np.zeros(size)
    usage = np.zeros(size)
    overflowed = np.zeros(size, dtype=bool)
    active = np.arange(size)

    while active.size:
        e = env[active]
        current = m[active]
        departures = (table.departure_rates[e] * current[:, :, None]).reshape(active.size, -1)
        rates = np.hstack([
            table.arrival_rates[e],
            table.rejected_rates[e][:, None],
            departures,
            table.transition_rates[e],
        ])
        total = rates.sum(axis=1)

        with np.errstate(divide='ignore'):
            step = rng.standard_exponential(active.size) / total
        end = t[active] + step
        done = end >= horizon
        holding = np.where(done, horizon - t[active], step)
        usage[active] += (table.usage_weights[e] * current).sum(axis=1) * holding
        t[active] = np.minimum(end, horizon)

        fire = ~done
        rows = active[fire]
        if not rows.size:
            break

        rates = rates[fire]
        e = e[fire]
        threshold = rng.random(rows.size) * total[fire]
        event = (np.cumsum(rates, axis=1) <= threshold[:, None]).sum(axis=1)
        last_positive = rates.shape[1] - 1 - np.argmax(rates[:, ::-1] > 0, axis=1)
        event = np.minimum(event, last_positive)

        if tracer is not None:
            _trace_first(tracer, rows, event, e, t, N)

        arrived = event < N
        arrival_rows = rows[arrived]
        m[arrival_rows, event[arrived]] += 1
        arrivals[arrival_rows] += 1

        rejected = rows[event == N]
        arrivals[rejected] += 1
        losses[rejected] += 1

        moved = (event >= first_departure) & (event < first_transition)
        offset = event[moved] - first_departure
        source, target = np.divmod(offset, N + 1)
        departure_rows = rows[moved]
        m[departure_rows, source] -= 1
        routed = target > 0
        m[departure_rows[routed], target[routed] - 1] += 1
        lost = ~routed & table.counted[source]
        losses[departure_rows[lost]] += 1

        jumped = event >= first_transition
        slots = table.transition_slots[e[jumped], event[jumped] - first_transition]
        jump_rows = rows[jumped]
        for k in np.unique(slots):
            selected = jump_rows[slots == k]
            before = m[selected]
            losses[selected] += before @ table.loss_weights[k]
            m[selected] = before @ table.matrices[k].T
            env[selected] = table.targets[k]

        exploded = np.any(m[rows] > POPULATION_LIMIT, axis=1)
        overflowed[rows[exploded]] = True
        active = rows[~exploded]

    return _BatchOutcome(arrivals, losses, usage, m, env, overflowed)


def _trace_first(tracer: _Tracer, rows: np.ndarray, event: np.ndarray, env: np.ndarray, t: np.ndarray, N: int) -> None:
    where = np.flatnonzero(rows == 0)
    if not where.size:
        return

    k = int(event[where[0]])
    now = float(t[0])
    i = int(env[where[0]])
    if k < N:
        tracer.emit(now, 'arrival', queue=k, env=i)
    elif k == N:
        tracer.emit(now, 'rejected', env=i)
    elif k < N + 1 + N * (N + 1):
        source, target = divmod(k - N - 1, N + 1)
        if target:
            tracer.emit(now, 'route', queue=source, to=target - 1, env=i)
        else:
            tracer.emit(now, 'departure', queue=source, env=i)
    else:
        tracer.emit(now, 'jump', env=i)


def _batch_sizes(replications: int, batch_size: int) -> List[int]:
    full, rest = divmod(replications, batch_size)
    return [batch_size] * full + ([rest] if rest else [])


def simulate(model: NetworkModel, cfg: SimulationConfig) -> SimulationResult:
    """Exact stochastic simulation of the network up to ``cfg.horizon``.

    Each batch of replications advances in lock-step, one event per
    replication and step, and draws from its own Philox stream spawned
    from the master seed. Results depend only on the seed and the batch
    size, not on the number of workers or the order batches complete in.

    Replications whose population exceeds 2**31 are aborted and left out
    of the estimates; if every replication overflows a
    :class:`NumericalError` is raised.
    """
    ensure_valid(model, allow_reducible=True)
    N, I = model.n_queues, model.n_env

    population = np.zeros(N, dtype=np.int64)
    if cfg.population is not None:
        if len(cfg.population) != N or any(v < 0 for v in cfg.population):
            raise UsageError(f'initial population must be {N} nonnegative integers')
        population[:] = cfg.population
    if not 0 <= cfg.env < I:
        raise UsageError(f'initial environment state {cfg.env + 1} is out of range')

    weights = np.zeros(N) if cfg.usage_weights is None else cfg.usage_weights
    usage_weights = expand_weights(model, weights).reshape(I, N)
    table = _EventTable.build(model, counted_queues(model, cfg.counted_departures), usage_weights)

    batch_size = cfg.batch_size or get_env_var('SIM_BATCH', DEFAULT_SIM_BATCH, integer=True)
    workers = cfg.workers or get_env_var('WORKERS', DEFAULT_WORKERS, integer=True)
    sizes = _batch_sizes(cfg.replications, batch_size)
    seeds = np.random.SeedSequence(cfg.seed).spawn(len(sizes))

    run_id = new_run_id()
    _log.info('simulation %s: %d replications in %d batches, horizon %g', run_id, cfg.replications, len(sizes), cfg.horizon)

    stream = open(cfg.trace, 'w', encoding='utf-8') if cfg.trace else None
    try:
        tracer = _Tracer(stream, run_id) if stream is not None else None

        def run(index: int) -> _BatchOutcome:
            return _simulate_batch(
                table,
                sizes[index],
                float(cfg.horizon),
                population,
                cfg.env,
                seeds[index],
                tracer if index == 0 else None,
            )

        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(run, range(len(sizes))))
    finally:
        if stream is not None:
            stream.close()

    overflowed = np.concatenate([o.overflowed for o in outcomes])
    keep = ~overflowed
    finished = int(keep.sum())
    if overflowed.any():
        _log.warning('simulation %s: %d replications exceeded the population limit', run_id, int(overflowed.sum()))
    if not finished:
        raise NumericalError(
            'every replication exceeded the population limit; the model looks explosive',
            error_code='POPULATION_OVERFLOW',
        )

    arrivals = np.concatenate([o.arrivals for o in outcomes])[keep]
    losses = np.concatenate([o.losses for o in outcomes])[keep]
    usage = np.concatenate([o.usage for o in outcomes])[keep]
    final_env = np.concatenate([o.env for o in outcomes])[keep]
    final_population = np.concatenate([o.population for o in outcomes])[keep]

    occupancy = np.zeros((finished, I, N))
    occupancy[np.arange(finished), final_env] = final_population
    indicator = np.zeros((finished, I))
    indicator[np.arange(finished), final_env] = 1.0

    _log.info('simulation %s finished', run_id)
    return SimulationResult(
        run_id=run_id,
        replications=finished,
        overflowed=int(overflowed.sum()),
        arrivals=MetricEstimate.from_samples(arrivals),
        losses=MetricEstimate.from_samples(losses),
        usage=MetricEstimate.from_samples(usage),
        loss_fraction=MetricEstimate.from_ratio(losses, arrivals),
        mean=MetricEstimate.from_samples(occupancy.reshape(finished, -1)),
        env_dist=MetricEstimate.from_samples(indicator),
    )
