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

from numpy.testing import assert_allclose, assert_array_equal
from common.exceptions import ModelValidationError
from models import InitialCondition, assemble, validate
from analysis import transient_mean, counter_counts
from builders import (
    ordered_subsets,
    subset_label,
    RetrialNetworkParams,
    ReroutingParams,
    StorageParams,
    build_retrial_network,
    build_rerouting_network,
    build_direct_only_network,
    build_storage_network,
    build_premium_storage,
    pool_queues,
    ring_routes,
    rerouting_usage_weights,
    storage_usage_weights,
    PREMIUM_QUEUES,
)

import pytest
import numpy as np


def _transition(model, source, target):
    found = [t for t in model.transitions if (t.from_env, t.to_env) == (source, target)]
    assert len(found) == 1
    return found[0]


def test_ordered_subsets():
    assert ordered_subsets(2) == (frozenset({0, 1}), frozenset({0}), frozenset({1}), frozenset())
    assert ordered_subsets(3, include_empty=False) == tuple(map(frozenset, (
        {0, 1, 2}, {0, 1}, {0, 2}, {1, 2}, {0}, {1}, {2},
    )))
    assert subset_label('up', frozenset({2, 0})) == 'up{1,3}'


def test_two_station_retrial_network():
    params = RetrialNetworkParams(
        arrival_rates=[1.0, 2.0],
        routing_rates=[[0.5, 0.0, 0.5], [1.0, 0.0, 0.0]],
        retrial_rates=[1.0, 1.0],
        renege_rates=[0.1, 0.2],
        up_rates=[0.1, 0.2],
        down_rates=[1.0, 2.0],
    )
    model = build_retrial_network(params)
    assert (model.n_queues, model.n_env) == (4, 4)
    assert validate(model).ok
    assert pool_queues(params) == [2, 3]

    # station 1 down: its arrivals and the customers routed to it go to pool 1
    assert_allclose(model.arrival_rates[2], [0.0, 2.0, 1.0, 0.0])
    assert model.departure_rates[2, 0, 2] == 0.5
    assert model.departure_rates[1, 0, 2] == 0.0
    assert model.departure_rates[1, 0, 4] == 0.5

    failure = _transition(model, 0, 1)
    expected = np.eye(4, dtype=int)
    expected[1, 1] = 0
    expected[3, 1] = 1
    assert_array_equal(failure.matrix, expected)
    assert failure.rate == 0.2


def test_retrial_params_are_checked():
    with pytest.raises(ModelValidationError):
        RetrialNetworkParams([1.0], [[1.0]], [1.0], [1.0], [1.0], [1.0])


def test_station_that_never_fails_keeps_its_pool_empty(retrial_model):
    model = retrial_model(gamma_u=0.0)
    mean = transient_mean(assemble(model), InitialCondition.empty(model), 3.0)
    assert_allclose(mean[[1, 3]], 0.0, atol=1e-12)


def test_ring_rerouting_failure_matrix():
    params = ReroutingParams(
        arrival_rates=[1.0, 1.0, 1.0],
        service_rates=[1.0, 1.0, 1.0],
        routes=ring_routes(3),
        up_rates=[0.1, 0.2, 0.3],
        down_rates=[1.0, 1.0, 1.0],
    )
    assert params.routes == ((1, 2), (2, 0), (0, 1))
    model = build_rerouting_network(params)
    assert (model.n_queues, model.n_env) == (6, 8)
    assert validate(model).ok

    failure = _transition(model, 0, 3)
    expected = np.eye(6, dtype=int)
    expected[0, 0] = 0
    expected[3, 0] = 1
    expected[4, 4] = 0
    expected[5, 5] = 0
    assert_array_equal(failure.matrix, expected)
    assert_array_equal(failure.loss_weights, [0, 0, 0, 0, 1, 1])
    assert failure.rate == 0.1

    repair = _transition(model, 3, 0)
    expected = np.eye(6, dtype=int)
    expected[3, 3] = 0
    expected[0, 3] = 1
    assert_array_equal(repair.matrix, expected)

    assert_allclose(model.arrival_rates[3], [0.0, 1.0, 1.0, 1.0, 0.0, 0.0])
    assert model.rejected_rates[3] == 0.0
    assert model.rejected_rates[5] == 2.0
    assert model.rejected_rates[7] == 3.0
    assert_allclose(rerouting_usage_weights(params), [1, 1, 1, 2, 2, 2])


def test_rerouting_without_failures_loses_nothing():
    params = ReroutingParams([1.0] * 3, [1.0] * 3, ring_routes(3), [0.0] * 3, [1.0] * 3)
    for model in (build_rerouting_network(params), build_direct_only_network(params)):
        counts = counter_counts(model, InitialCondition.empty(model), 2.0)
        assert counts.losses == pytest.approx(0.0, abs=1e-12)


def test_direct_only_network():
    params = ReroutingParams([1.0] * 3, [2.0] * 3, ring_routes(3), [0.1] * 3, [1.0] * 3)
    model = build_direct_only_network(params)
    assert (model.n_queues, model.n_env) == (3, 8)
    failure = _transition(model, 0, 3)
    assert_array_equal(failure.loss_weights, [1, 0, 0])
    assert failure.matrix[0, 0] == 0


def test_detour_needs_distinct_links():
    with pytest.raises(ModelValidationError):
        ReroutingParams([1.0] * 3, [1.0] * 3, ((0, 1), (2, 0), (0, 1)), [0.1] * 3, [1.0] * 3)


def test_two_location_storage_matrices(storage_k2):
    model = storage_k2
    assert (model.n_queues, model.n_env) == (3, 4)
    location_2_fails = np.array([[0, 0, 0], [1, 1, 0], [0, 0, 0]])
    location_1_fails = np.array([[0, 0, 0], [0, 0, 0], [1, 0, 1]])

    for source, target in ((0, 1), (2, 3)):
        transition = _transition(model, source, target)
        assert_array_equal(transition.matrix, location_2_fails)
        assert_array_equal(transition.loss_weights, [0, 0, 1])
        assert transition.rate == 0.7
    for source, target in ((0, 2), (1, 3)):
        transition = _transition(model, source, target)
        assert_array_equal(transition.matrix, location_1_fails)
        assert_array_equal(transition.loss_weights, [0, 1, 0])
        assert transition.rate == 0.3
    for source, target, rate in ((1, 0, 5.0), (3, 2, 5.0), (2, 0, 2.0), (3, 1, 2.0)):
        transition = _transition(model, source, target)
        assert_array_equal(transition.matrix, np.eye(3))
        assert transition.rate == rate

    assert_allclose(model.arrival_rates[0], [1.0, 1.0, 1.0])
    assert_allclose(model.arrival_rates[1], [0.0, 2.0, 0.0])
    assert_allclose(model.rejected_rates, [0.0, 1.0, 1.0, 3.0])
    assert model.queue_labels == ('at{1,2}', 'at{1}', 'at{2}')


def test_single_location_storage():
    params = StorageParams(locations=1, arrival_rates=[2.0], up_rates=[0.5], down_rates=[1.0])
    model = build_storage_network(params)
    assert (model.n_queues, model.n_env) == (1, 2)
    failure = _transition(model, 0, 1)
    assert_array_equal(failure.matrix, [[0]])
    assert_array_equal(failure.loss_weights, [1])
    assert_allclose(storage_usage_weights(params), [1.0])


def test_three_location_storage():
    params = StorageParams(locations=3, arrival_rates=np.ones(7), up_rates=np.full(3, 0.1), down_rates=np.ones(3))
    model = build_storage_network(params)
    assert (model.n_queues, model.n_env) == (7, 8)
    assert validate(model).ok
    assert_allclose(storage_usage_weights(params), [3, 2, 2, 2, 1, 1, 1])


def test_storage_limits():
    with pytest.raises(ModelValidationError):
        StorageParams(locations=9, arrival_rates=[], up_rates=[], down_rates=[])
    with pytest.raises(ModelValidationError):
        StorageParams(locations=2, arrival_rates=[1.0], up_rates=[0.1, 0.1], down_rates=[1.0, 1.0])


def test_premium_storage_layout():
    model = build_premium_storage(10.0, 0.3, 24.0, 0.01, 2.0)
    assert model.queue_labels == PREMIUM_QUEUES
    assert validate(model).ok
    assert_allclose(model.arrival_rates[0], [3.5, 3.5, 0.0, 1.5, 1.5])
    assert_allclose(model.arrival_rates[1], [7.0, 0.0, 0.0, 3.0, 0.0])
    assert_allclose(model.arrival_rates.sum(axis=1) + model.rejected_rates, 10.0)
    assert model.departure_rates[0, 0, 3] == 24.0
    assert model.departure_rates[1, 0, 3] == 0.0

    a_fails = _transition(model, 0, 2)
    assert_array_equal(a_fails.loss_weights, [1, 0, 0, 1, 0])
    assert a_fails.matrix[1, 2] == 1
    assert a_fails.matrix[2, 2] == 0


def test_all_basic_files_leave_premium_queues_empty():
    model = build_premium_storage(100.0, 1.0, 24.0, 0.01, 2.0)
    mean = transient_mean(assemble(model), InitialCondition.empty(model), 1.0).reshape(4, 5)
    assert_allclose(mean[:, :3], 0.0, atol=1e-12)


def test_premium_files_without_failures_are_never_lost():
    model = build_premium_storage(100.0, 0.0, 24.0, 0.0, 2.0)
    counts = counter_counts(model, InitialCondition.empty(model), 1.0)
    assert counts.losses == pytest.approx(0.0, abs=1e-10)


def test_premium_fraction_is_checked():
    with pytest.raises(ModelValidationError):
        build_premium_storage(1.0, 1.5, 24.0, 0.01, 2.0)
