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
from common.exceptions import UnstableModelError, ModelValidationError, NumericalError
from models import InitialCondition, assemble, moment_ode_rhs
from numerics import integrate_ode, integrate_function
from analysis import (
    stability,
    env_distribution,
    integrated_env_distribution,
    transient_mean,
    integrated_mean,
    transient_state,
    trajectory,
    stationary_mean,
    metric_v,
    metric_w,
    expand_weights,
    loss_weight_vector,
    expected_arrivals,
    expected_losses,
    counter_counts,
    stationary_loss_ratio,
)

import math
import pytest
import numpy as np


def test_single_queue_transient_mean(mm_inf):
    sys = assemble(mm_inf(lam=3.0, mu=2.0))
    init = InitialCondition.from_point(sys.model, [5], 0)
    for t in (0.0, 0.1, 1.0, 7.5):
        expected = 5 * math.exp(-2 * t) + 1.5 * (1 - math.exp(-2 * t))
        assert transient_mean(sys, init, t)[0] == pytest.approx(expected, rel=1e-12)


def test_single_queue_integrated_mean(mm_inf):
    sys = assemble(mm_inf(lam=3.0, mu=2.0))
    init = InitialCondition.empty(sys.model)
    T = 2.0
    expected = 1.5 * T - 0.75 * (1 - math.exp(-2 * T))
    assert integrated_mean(sys, init, T)[0] == pytest.approx(expected, rel=1e-12)


def test_transient_mean_matches_ode(retrial_model):
    sys = assemble(retrial_model())
    init = InitialCondition.empty(sys.model)
    T = 5.0
    exact = transient_mean(sys, init, T)
    integrated = integrate_ode(lambda t, m: moment_ode_rhs(sys, t, init.env_dist, m), init.mean_vector, T, tol=1e-12)
    assert_allclose(exact, integrated, rtol=1e-8, atol=1e-8)


@pytest.mark.parametrize('fixture', ['retrial_model', 'storage_k2'])
def test_integrated_mean_matches_quadrature(fixture, request):
    value = request.getfixturevalue(fixture)
    model = value() if callable(value) else value
    sys = assemble(model)
    init = InitialCondition.empty(model)
    T = 5.0
    quadrature = integrate_function(lambda t: transient_mean(sys, init, t), T, tol=1e-11)
    assert_allclose(integrated_mean(sys, init, T), quadrature, rtol=1e-7, atol=1e-12)


def test_environment_law(retrial_model):
    sys = assemble(retrial_model(gamma_u=1.0, gamma_d=3.0))
    pi0 = np.array([1.0, 0.0])
    t = 0.4
    down = 0.25 * (1 - math.exp(-4.0 * t))
    assert_allclose(env_distribution(sys, pi0, t), [1 - down, down], atol=1e-14)

    T = 2.0
    integral = 0.25 * (T - (1 - math.exp(-4.0 * T)) / 4.0)
    assert_allclose(integrated_env_distribution(sys, pi0, T), [T - integral, integral], atol=1e-13)


def test_trajectory_and_state(retrial_model):
    sys = assemble(retrial_model(lam=2.0))
    init = InitialCondition.empty(sys.model)
    states = trajectory(sys, init, [0.0, 1.0, 2.0], integrated=True)
    assert [s.t for s in states] == [0.0, 1.0, 2.0]
    assert_allclose(states[0].mean, 0.0)
    assert_allclose(states[2].mean, transient_mean(sys, init, 2.0))
    document = transient_state(sys, init, 1.0).to_dict(sys)
    assert set(document) == {'t', 'pi', 'mean'}
    assert set(document['mean']) == {'up{1}/station1', 'up{1}/pool1', 'up{}/station1', 'up{}/pool1'}


def test_negative_time_is_rejected(mm_inf):
    sys = assemble(mm_inf())
    with pytest.raises(NumericalError):
        transient_mean(sys, InitialCondition.empty(sys.model), -1.0)


@pytest.mark.parametrize('alpha, stable', [(0.999, True), (1.001, False)])
def test_doubling_queue_stability(doubling_queue, alpha, stable):
    sys = assemble(doubling_queue(alpha, mu=1.0))
    verdict = stability(sys)
    assert verdict.stable is stable
    assert verdict.omega == pytest.approx(alpha * (2 - 1) - 1.0, abs=1e-9)
    assert not verdict.marginal


def test_doubling_queue_stationary_mean(doubling_queue):
    pi, mean = stationary_mean(assemble(doubling_queue(0.5, mu=1.0, lam=2.0)))
    assert_allclose(pi, [1.0])
    assert mean[0] == pytest.approx(4.0)

    with pytest.raises(UnstableModelError) as info:
        stationary_mean(assemble(doubling_queue(1.5)))
    assert info.value.omega == pytest.approx(0.5)
    assert info.value.exit_code == 3


def test_marginal_verdict(doubling_queue):
    verdict = stability(assemble(doubling_queue(1.0)))
    assert verdict.marginal
    assert not verdict.usable


def test_stationary_mean_needs_irreducible_environment(retrial_model):
    with pytest.raises(ModelValidationError):
        stationary_mean(assemble(retrial_model(gamma_u=0.0)))


def test_stationary_limit_of_transient_mean(retrial_model):
    sys = assemble(retrial_model(lam=10.0))
    _, mean = stationary_mean(sys)
    assert_allclose(transient_mean(sys, InitialCondition.empty(sys.model), 500.0), mean, rtol=1e-8)


def test_expand_weights(retrial_model):
    model = retrial_model()
    assert_allclose(expand_weights(model, [1.0, 2.0]), [1.0, 2.0, 1.0, 2.0])
    assert_allclose(expand_weights(model, [[1.0, 2.0], [3.0, 4.0]]), [1.0, 2.0, 3.0, 4.0])
    with pytest.raises(NumericalError):
        expand_weights(model, [1.0, 2.0, 3.0])


def test_metric_v_and_w(mm_inf):
    sys = assemble(mm_inf(lam=3.0, mu=2.0))
    init = InitialCondition.empty(sys.model)
    assert metric_v(sys, init, [2.0], 1.0) == pytest.approx(2 * transient_mean(sys, init, 1.0)[0])
    assert metric_w(sys, init, [2.0], 1.0) == pytest.approx(2 * integrated_mean(sys, init, 1.0)[0])


def test_loss_weights(retrial_model, storage_k2):
    assert_allclose(loss_weight_vector(retrial_model(nu=2.0), [1]), [0.0, 2.0, 0.0, 2.0])
    weights = loss_weight_vector(storage_k2).reshape(4, 3)
    assert_allclose(weights[0], [0.0, 0.3, 0.7])
    assert_allclose(weights[1], [0.0, 0.3, 0.0])
    assert_allclose(weights[3], 0.0)


def test_expected_arrivals(retrial_model):
    sys = assemble(retrial_model(lam=7.0))
    init = InitialCondition.empty(sys.model)
    occupation = integrated_env_distribution(sys, init.env_dist, 3.0)
    assert expected_arrivals(sys, init, 3.0) == pytest.approx(7.0 * occupation.sum())


@pytest.mark.parametrize('fixture, counted', [('retrial_model', (1,)), ('storage_k2', ())])
def test_counters_agree_with_weighted_integrals(fixture, counted, request):
    value = request.getfixturevalue(fixture)
    model = value() if callable(value) else value
    sys = assemble(model)
    init = InitialCondition.empty(model)
    counts = counter_counts(model, init, 5.0, counted)
    assert counts.losses == pytest.approx(expected_losses(sys, init, 5.0, counted), rel=1e-8)
    assert counts.arrivals == pytest.approx(expected_arrivals(sys, init, 5.0), rel=1e-8)
    assert 0 < counts.loss_fraction < 1


def test_no_failures_no_losses(retrial_model):
    model = retrial_model(gamma_u=0.0)
    counts = counter_counts(model, InitialCondition.empty(model), 4.0, (1,))
    assert counts.losses == pytest.approx(0.0, abs=1e-12)
    assert counts.arrivals == pytest.approx(400.0)


def test_stationary_loss_ratio_is_long_run_fraction(retrial_model):
    sys = assemble(retrial_model(lam=10.0))
    init = InitialCondition.empty(sys.model)
    ratio = stationary_loss_ratio(sys, (1,))
    T = 400.0
    late = expected_losses(sys, init, T, (1,)) - expected_losses(sys, init, T / 2, (1,))
    arrivals = expected_arrivals(sys, init, T) - expected_arrivals(sys, init, T / 2)
    assert late / arrivals == pytest.approx(ratio, rel=1e-6)
