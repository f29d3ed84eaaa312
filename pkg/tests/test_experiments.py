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
from common.exceptions import UsageError, MonotonicityError, InfeasibleQueryError
from oracles import retrial_loss_floor, retrial_closed_form
from scipy.optimize import brentq
from experiments import (
    TEMPLATES,
    get_template,
    evaluate,
    point_metrics,
    check_counter_identity,
    ThresholdQuery,
    bisect_threshold,
    run_threshold_search,
    storage_endpoint_choices,
    retrial_cost_optimum,
    rerouting_crossing,
    run_cost_optimization,
    SweepGrid,
    ExperimentSpec,
    EXPERIMENTS,
    run_experiment,
)

import csv
import json
import pytest
import numpy as np


def test_bisection_finds_crossing():
    result = bisect_threshold(lambda x: 1.0 / x, 0.1, 10.0, 0.5)
    assert result.status == 'found'
    assert result.value == pytest.approx(2.0, rel=1e-6)
    assert result.value >= 2.0
    assert result.metric <= 0.5


def test_bisection_increasing():
    result = bisect_threshold(lambda x: x * x, 0.0, 3.0, 4.0, decreasing=False)
    assert result.status == 'found'
    assert result.value == pytest.approx(2.0, rel=1e-6)
    assert result.value <= 2.0


def test_bisection_edge_outcomes():
    unconstrained = bisect_threshold(lambda x: 1.0 / x, 1.0, 10.0, 5.0)
    assert (unconstrained.status, unconstrained.value) == ('unconstrained', 1.0)

    infeasible = bisect_threshold(lambda x: 1.0 / x, 1.0, 10.0, 0.01)
    assert infeasible.status == 'infeasible'
    assert infeasible.value is None
    assert infeasible.metric == pytest.approx(0.1)
    assert not infeasible.feasible


def test_bisection_checks_direction():
    with pytest.raises(MonotonicityError) as info:
        bisect_threshold(lambda x: x, 1.0, 2.0, 1.5)
    assert info.value.exit_code == 1


def _closed_form_loss_ratio(gamma_d: float) -> float:
    return retrial_closed_form(100.0, 2.0, 2.0, 1.0, 0.1, gamma_d).loss_ratio


def test_repair_rate_threshold():
    query = ThresholdQuery('retrial', 'gamma_d', 'loss_ratio', 0.1, 0.5, 10.0)
    result = run_threshold_search(query)
    root = brentq(lambda gamma_d: _closed_form_loss_ratio(gamma_d) - 0.1, 0.5, 10.0, xtol=1e-12)
    assert result.status == 'found'
    assert result.value == pytest.approx(root, rel=2e-6)
    assert result.value == pytest.approx(2.15147, abs=1e-4)


def test_loss_ratio_near_published_threshold():
    template = get_template('retrial')
    value = evaluate(template, template.resolve({'gamma_d': 2.1496}), 'loss_ratio')
    assert value == pytest.approx(0.1, abs=1e-3)
    assert value > 0.1


def test_loss_ratio_floor():
    template = get_template('retrial')
    params = template.resolve({'gamma_d': 1e6})
    floor = retrial_loss_floor(2.0, 2.0, 1.0, 0.1)
    assert floor == pytest.approx(0.2 / 4.2)
    assert evaluate(template, params, 'loss_ratio') == pytest.approx(floor, abs=1e-4)


def test_failure_rate_threshold():
    query = ThresholdQuery(
        'retrial', 'gamma_u', 'loss_ratio', 0.01, 1e-6, 0.1,
        direction='increasing', params={'gamma_d': 0.5},
    )
    result = run_threshold_search(query)
    assert result.status == 'found'
    assert result.value == pytest.approx(0.0037, abs=2e-4)


def test_query_validation():
    with pytest.raises(UsageError):
        ThresholdQuery('retrial', 'gamma_d', 'loss_fraction', 0.1, 0.5, 10.0)
    with pytest.raises(UsageError):
        ThresholdQuery('retrial', 'gamma_d', 'loss_ratio', 0.1, 10.0, 0.5)
    with pytest.raises(UsageError):
        run_threshold_search(ThresholdQuery('retrial', 'rho', 'loss_ratio', 0.1, 0.5, 10.0))


def test_templates_reject_unknown_parameters():
    with pytest.raises(UsageError):
        get_template('retrial').resolve({'lambda': 1.0})
    with pytest.raises(UsageError):
        get_template('queue')


@pytest.mark.parametrize('name', sorted(TEMPLATES))
def test_templates_build_valid_models(name):
    template = get_template(name)
    params = template.resolve()
    model = template.build(params)
    assert template.usage_weights(params, model).shape == (model.n_queues,)


def test_evaluate_needs_horizon_for_counts():
    template = get_template('storage')
    with pytest.raises(UsageError):
        evaluate(template, template.resolve(), 'expected_losses')
    with pytest.raises(UsageError):
        evaluate(template, template.resolve(), 'losses', 1.0)


@pytest.mark.parametrize('name, params, horizon', [
    ('retrial', {}, 5.0),
    ('retrial-network', {}, 5.0),
    ('rerouting', {'links': 3}, 2.0),
    ('direct-only', {}, 2.0),
    ('storage', {'locations': 2}, 3.0),
    ('storage', {'locations': 3, 'gamma_u': 0.5}, 1.0),
    ('premium-storage', {'premium_fraction': 0.4}, 1.0),
])
def test_counter_identity(name, params, horizon):
    template = get_template(name)
    difference = check_counter_identity(template, template.resolve(params), horizon)
    assert difference <= 1e-8 * max(1.0, point_metrics(template, template.resolve(params), horizon).expected_losses)


def test_premium_fraction_shapes():
    template = get_template('premium-storage')
    base = template.resolve({'lam': 1e4, 'mu_copy': 24.0, 'gamma_u': 0.01, 'gamma_d': 2.0})
    values = [point_metrics(template, {**base, 'premium_fraction': q}, 1.0) for q in np.linspace(0, 1, 21)]
    usage = np.array([v.expected_usage for v in values])
    losses = np.array([v.expected_losses for v in values])
    assert np.all(np.diff(usage) > 0)
    assert np.all(np.diff(losses) < 0)
    assert_allclose([v.expected_arrivals for v in values], values[0].expected_arrivals, rtol=1e-10)


@pytest.mark.parametrize('fraction, feasible', [(0.3, False), (0.7, True)])
def test_minimal_repair_rate_feasibility(fraction, feasible):
    query = ThresholdQuery(
        'premium-storage', 'gamma_d', 'loss_fraction', 0.05, 1e-6, 24.0,
        params={'premium_fraction': fraction, 'gamma_u': 0.1},
        horizon=2.0,
    )
    assert run_threshold_search(query).feasible is feasible


def test_storage_endpoint_choices():
    probe = storage_endpoint_choices(2.0, [1.0], params={'gamma_u': 1.0})[0]
    critical = probe.critical_ratio
    assert 0 < critical < np.inf

    low, at, high = storage_endpoint_choices(2.0, [critical / 10, critical, critical * 10], params={'gamma_u': 1.0})
    assert low.best_premium_fraction == 0.0
    assert at.cost_none == pytest.approx(at.cost_all, rel=1e-9)
    assert high.best_premium_fraction == 1.0


def test_rerouting_crossing():
    report = rerouting_crossing({'gamma_d': 1.0}, horizon=1.0)
    assert report.search.status == 'found'
    assert report.losses_rerouted < report.losses_direct
    assert report.usage_rerouted > report.usage_direct
    ratio = report.critical_ratio
    rerouted = ratio * report.losses_rerouted + report.usage_rerouted
    direct = ratio * report.losses_direct + report.usage_direct
    assert rerouted == pytest.approx(direct, rel=1e-5)


def test_retrial_cost_optimum():
    report = retrial_cost_optimum(0.1, gamma_u_bounds=(0.01, 1.0), points=7)
    feasible = [point.cost for point in report.grid if point.feasible]
    assert feasible
    assert report.optimum.feasible
    assert report.optimum.cost <= min(feasible)
    assert report.to_dict()['optimum']['feasible'] is True


def test_retrial_cost_infeasible():
    with pytest.raises(InfeasibleQueryError):
        retrial_cost_optimum(0.01, gamma_u_bounds=(0.5, 1.0), points=3, gamma_d_bounds=(1e-3, 1.0))


def test_cost_dispatch():
    assert run_cost_optimization('rerouting', {'gamma_d': 2.0}).search.feasible
    with pytest.raises(UsageError):
        run_cost_optimization('shipping')


def test_sweep_grid():
    assert_allclose(SweepGrid('gamma_d', 1.0, 3.0, 3).values(), [1.0, 2.0, 3.0])
    assert_allclose(SweepGrid('gamma_u', 1e-3, 1e-1, 3, 'log').values(), [1e-3, 1e-2, 1e-1])
    with pytest.raises(UsageError):
        SweepGrid('gamma_u', 0.0, 1.0, 3, 'log')
    with pytest.raises(UsageError):
        SweepGrid('gamma_u', 1.0, 0.0, 1)


def test_experiment_csv(tmp_path):
    path = tmp_path / 'curve.csv'
    result = run_experiment(ExperimentSpec('retrial-exp1', grid=SweepGrid('gamma_d', 1.0, 2.0, 2), output=str(path)))
    with path.open() as fp:
        rows = list(csv.DictReader(fp))
    assert list(rows[0]) == ['gamma_d', 'loss_ratio', 'closed_form_loss_ratio', 'error']
    assert [row['gamma_d'] for row in rows] == ['1', '2']
    for row in rows:
        assert float(row['loss_ratio']) == pytest.approx(float(row['closed_form_loss_ratio']), rel=1e-9)
        assert row['error'] == ''
    assert result.text == path.read_text()


def test_experiment_failed_point_keeps_going(tmp_path):
    path = tmp_path / 'curve.json'
    spec = ExperimentSpec('retrial-exp1', grid=SweepGrid('gamma_d', 0.0, 1.0, 2), output=str(path), format='json')
    run_experiment(spec)
    document = json.loads(path.read_text())
    first, second = document['rows']
    assert first['error']
    assert first['loss_ratio'] is None
    assert second['error'] is None
    assert document['experiment'] == 'retrial-exp1'


def test_experiment_checks_counters(tmp_path):
    spec = ExperimentSpec(
        'storage-exp1',
        grid=SweepGrid('premium_fraction', 0.0, 1.0, 3),
        output=str(tmp_path / 'exp1.csv'),
        check_points=2,
    )
    result = run_experiment(spec)
    assert len(result.rows) == 3
    assert result.rows[0]['expected_usage'] < result.rows[2]['expected_usage']


def test_experiment_spec_errors():
    with pytest.raises(UsageError):
        ExperimentSpec('retrial-exp1', format='xml')
    with pytest.raises(UsageError):
        run_experiment(ExperimentSpec('retrial-exp1', grid=SweepGrid('gamma_u', 0.1, 1.0, 2)))
    with pytest.raises(UsageError):
        run_experiment(ExperimentSpec('no-such-experiment'))


def test_catalogue_defaults():
    assert EXPERIMENTS['storage-exp1'].grid.points == 21
    assert EXPERIMENTS['storage-exp3'].defaults['horizon'] == 2.0
    assert EXPERIMENTS['retrial-exp2'].grid.scale == 'log'
    for experiment in EXPERIMENTS.values():
        assert experiment.columns[-1] == 'error'
        assert experiment.grid.variable == experiment.columns[0]


def test_storage_costs_against_failure_rate(tmp_path):
    path = tmp_path / 'exp2-gamma-u.csv'
    spec = ExperimentSpec(
        'storage-exp2-gamma-u',
        params={'ratio_min': 1e-3, 'ratio_max': 1e3, 'ratio_points': 3},
        grid=SweepGrid('gamma_u', 0.1, 1.0, 2),
        output=str(path),
    )
    run_experiment(spec)
    with path.open() as fp:
        rows = list(csv.DictReader(fp))
    assert list(rows[0])[:2] == ['gamma_u', 'ratio']
    assert [float(row['gamma_u']) for row in rows] == pytest.approx([0.1] * 3 + [1.0] * 3)
    for row in rows:
        assert row['error'] == ''
        chosen = 1.0 if float(row['ratio']) > float(row['critical_ratio']) else 0.0
        assert float(row['best_premium_fraction']) == chosen
