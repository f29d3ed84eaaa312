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

from numpy.testing import assert_allclose
from scipy.stats import poisson
from common.exceptions import FormulaRegimeError, ModelValidationError, NumericalError, UsageError
from models import NetworkModel, InitialCondition, assemble
from analysis import stationary_mean, stationary_loss_ratio, transient_mean, counter_counts, metric_w
from oracles import (
    retrial_closed_form,
    retrial_loss_floor,
    truncated_generator,
    truncated_distribution,
    marginal_moments,
    SimulationConfig,
    MetricEstimate,
    simulate,
)

import math
import json
import pytest
import numpy as np


def test_closed_form_matches_stationary_mean(retrial_model, rng):
    checked = 0
    while checked < 100:
        lam = rng.uniform(1.0, 200.0)
        kappa, nu, mu, gamma_u, gamma_d = rng.uniform(0.05, 5.0, 5)
        try:
            expected = retrial_closed_form(lam, kappa, nu, mu, gamma_u, gamma_d)
        except FormulaRegimeError:
            continue

        sys = assemble(retrial_model(lam, kappa, nu, mu, gamma_u, gamma_d))
        _, mean = stationary_mean(sys)
        assert_allclose(mean[[0, 1, 3]], [expected.station_up, expected.pool_up, expected.pool_down], rtol=1e-9)
        assert mean[2] == pytest.approx(0.0, abs=1e-9 * lam)
        assert stationary_loss_ratio(sys, (1,)) == pytest.approx(expected.loss_ratio, rel=1e-9)
        checked += 1


def test_closed_form_rejects_bad_parameters():
    with pytest.raises(ModelValidationError):
        retrial_closed_form(100.0, 2.0, 2.0, 1.0, 0.0, 1.0)
    assert retrial_closed_form(100.0, 2.0, 2.0, 1.0, 0.1, 2.0).to_dict().keys() == {
        'station_up', 'pool_up', 'pool_down', 'loss_ratio',
    }


def test_loss_floor():
    assert retrial_loss_floor(2.0, 2.0, 1.0, 0.1) == pytest.approx(0.2 / 4.2)
    ratios = [retrial_closed_form(100.0, 2.0, 2.0, 1.0, 0.1, gamma_d).loss_ratio for gamma_d in (1.0, 10.0, 1e3)]
    assert ratios[0] > ratios[1] > ratios[2] > 0.2 / 4.2


def test_marginal_moments():
    table = np.zeros((2, 3, 3))
    table[0, 2, 1] = 0.25
    table[1, 0, 2] = 0.75
    env, mean = marginal_moments(table)
    assert_allclose(env, [0.25, 0.75])
    assert_allclose(mean, [0.5, 0.25, 0.0, 1.5])


def test_truncated_generator_rows_sum_to_zero(retrial_model):
    generator = truncated_generator(retrial_model(lam=1.0), 5)
    assert generator.shape == (2 * 36 + 1, 2 * 36 + 1)
    assert_allclose(np.asarray(generator.sum(axis=1)).ravel(), 0.0, atol=1e-12)
    assert not generator[-1].toarray().any()


def test_no_arrivals_stay_at_origin(mm_inf):
    result = truncated_distribution(mm_inf(lam=0.0), 10, [1.0], [0], 3.0)
    assert result.probabilities[0, 0] == pytest.approx(1.0)
    assert result.leak == 0.0
    assert not result.flagged


def test_single_queue_is_poisson(mm_inf):
    T = 2.0
    result = truncated_distribution(mm_inf(lam=3.0, mu=1.0), 30, [1.0], [0], T)
    expected = poisson.pmf(np.arange(31), 3.0 * (1 - math.exp(-T)))
    assert_allclose(result.probabilities[0], expected, atol=1e-9)
    assert result.probabilities.sum() == pytest.approx(1.0 - result.leak, abs=1e-12)


def test_truncated_mean_matches_moments(retrial_model):
    model = retrial_model(lam=2.0)
    T = 5.0
    result = truncated_distribution(model, 25, [1.0, 0.0], [0, 0], T)
    exact = transient_mean(assemble(model), InitialCondition.empty(model), T)
    assert np.all(np.abs(result.mean_vector - exact) <= result.leak + 1e-6)
    assert_allclose(result.env_marginal.sum() + result.leak, 1.0, atol=1e-10)
    assert result.to_dict()['cap'] == 25


def test_tight_cap_is_flagged(mm_inf):
    result = truncated_distribution(mm_inf(lam=20.0, mu=1.0), 5, [1.0], [0], 5.0)
    assert result.flagged
    assert result.probabilities.sum() == pytest.approx(1.0 - result.leak, abs=1e-9)


def test_truncation_limits(mm_inf):
    big = NetworkModel(4, 1, np.ones((1, 4)), np.zeros((1, 4, 5)))
    with pytest.raises(UsageError):
        truncated_distribution(big, 5, [1.0], [0, 0, 0, 0], 1.0)
    with pytest.raises(UsageError):
        truncated_distribution(mm_inf(), 41, [1.0], [0], 1.0)
    with pytest.raises(UsageError):
        truncated_distribution(mm_inf(), 5, [1.0], [6], 1.0)


def test_metric_estimates():
    estimate = MetricEstimate.from_samples(np.array([1.0, 2.0, 3.0, 4.0]))
    assert estimate.mean == 2.5
    assert estimate.half_width == pytest.approx(1.96 * np.std([1, 2, 3, 4], ddof=1) / 2)
    assert estimate.contains(2.0)
    assert not estimate.contains(5.0)

    ratio = MetricEstimate.from_ratio(np.array([1.0, 1.0]), np.array([2.0, 2.0]))
    assert ratio.mean == 0.5
    assert ratio.half_width == 0.0
    assert MetricEstimate.from_ratio(np.zeros(3), np.zeros(3)).mean == 0.0


def test_simulation_config_is_checked():
    with pytest.raises(UsageError):
        SimulationConfig(replications=0, horizon=1.0)
    with pytest.raises(UsageError):
        SimulationConfig(replications=10, horizon=0.0)


def test_simulation_is_reproducible(retrial_model):
    model = retrial_model(lam=2.0)
    one = simulate(model, SimulationConfig(200, 2.0, seed=7, counted_departures=(1,), batch_size=64, workers=1))
    two = simulate(model, SimulationConfig(200, 2.0, seed=7, counted_departures=(1,), batch_size=64, workers=3))
    assert_allclose(one.mean.mean, two.mean.mean)
    assert one.losses.mean == two.losses.mean
    assert one.replications == 200
    assert one.overflowed == 0
    assert one.run_id != two.run_id


def test_simulation_without_arrivals(mm_inf):
    result = simulate(mm_inf(lam=0.0), SimulationConfig(10, 5.0, population=(3,), batch_size=4))
    assert result.arrivals.mean == 0.0
    assert result.mean.mean[0] <= 3


def test_simulation_trace(tmp_path, retrial_model):
    path = tmp_path / 'trace.jsonl'
    simulate(retrial_model(), SimulationConfig(5, 1.0, seed=3, batch_size=5, trace=str(path)))
    records = [json.loads(line) for line in path.read_text().splitlines()]
    assert records
    assert {record['kind'] for record in records} <= {'arrival', 'rejected', 'route', 'departure', 'jump'}
    times = [record['t'] for record in records]
    assert times == sorted(times)


def test_explosive_model_overflows(doubling_queue):
    model = doubling_queue(50.0, mu=0.0)
    with pytest.raises(NumericalError) as info:
        simulate(model, SimulationConfig(8, 10.0, population=(1,), batch_size=8, workers=1))
    assert 'population limit' in str(info.value)


@pytest.mark.slow
def test_simulation_agrees_with_moments(retrial_model):
    model = retrial_model(lam=2.0)
    T = 5.0
    result = simulate(model, SimulationConfig(100_000, T, seed=11, counted_departures=(1,), workers=4))
    init = InitialCondition.empty(model)
    exact = transient_mean(assemble(model), init, T)
    assert np.all(np.abs(result.mean.mean - exact) <= 2 * result.mean.half_width + 1e-12)

    counts = counter_counts(model, init, T, (1,))
    assert abs(result.losses.mean - counts.losses) <= 2 * result.losses.half_width
    assert abs(result.arrivals.mean - counts.arrivals) <= 2 * result.arrivals.half_width
    assert abs(result.loss_fraction.mean - counts.loss_fraction) <= 2 * result.loss_fraction.half_width


@pytest.mark.slow
def test_simulated_storage_usage(storage_k2):
    T = 3.0
    weights = np.array([2.0, 1.0, 1.0])
    result = simulate(storage_k2, SimulationConfig(50_000, T, seed=5, usage_weights=weights))
    init = InitialCondition.empty(storage_k2)
    expected = metric_w(assemble(storage_k2), init, weights, T)
    assert abs(result.usage.mean - expected) <= 2 * result.usage.half_width
    counts = counter_counts(storage_k2, init, T)
    assert abs(result.losses.mean - counts.losses) <= 2 * result.losses.half_width
