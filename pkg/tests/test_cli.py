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

from app import main
from common.utils import get_error_code
from pathlib import Path

import csv
import json
import pytest


@pytest.fixture
def model_file(tmp_path):
    def write(model, name='model.json'):
        path = tmp_path / name
        path.write_text(json.dumps(model.to_dict()))
        return str(path)
    return write


def test_validate_template(capsys):
    assert main(['validate', '--template', 'retrial']) == 0
    report = json.loads(capsys.readouterr().out)
    assert report == {'valid': True, 'violations': []}


def test_validate_reducible_file(capsys, model_file, retrial_model):
    path = model_file(retrial_model(gamma_u=0.0))
    assert main(['validate', '--model', path]) == 2
    captured = capsys.readouterr()
    assert json.loads(captured.out)['valid'] is False
    assert 'not irreducible' in captured.err


def test_validate_missing_file(tmp_path, capsys):
    assert main(['validate', '--model', str(tmp_path / 'absent.json')]) == 2
    assert 'cannot read model file' in capsys.readouterr().err


@pytest.mark.parametrize('argv', [
    [],
    ['frobnicate'],
    ['analyze', '--template', 'retrial', '--params', '[1, 2]'],
    ['validate', '--template', 'retrial', '--model', 'x.json'],
    ['experiment', 'retrial-exp1', '--grid', 'gamma_d:1:2'],
])
def test_usage_errors(argv, capsys):
    assert main(argv) == 1
    assert capsys.readouterr().err


def test_unknown_template(capsys):
    assert main(['analyze', '--template', 'queue']) == 1


def test_analyze_stationary(capsys):
    assert main(['analyze', '--template', 'retrial', '--stationary', '--counted', '2']) == 0
    document = json.loads(capsys.readouterr().out)
    assert document['stability']['stable'] is True
    assert set(document) == {'stability', 'pi', 'mean', 'loss_ratio'}
    assert sum(document['pi'].values()) == pytest.approx(1.0)
    assert 0 < document['loss_ratio'] < 1


def test_analyze_trajectory_csv(tmp_path, capsys):
    path = tmp_path / 'trajectory.csv'
    argv = ['analyze', '--template', 'storage', '--t0', '0.5', '--t1', '2', '--steps', '5', '--counts', '--format', 'csv', '--output', str(path)]
    assert main(argv) == 0
    with path.open() as fp:
        rows = list(csv.DictReader(fp))
    assert len(rows) == 5
    arrivals = [float(row['arrivals']) for row in rows]
    assert arrivals == sorted(arrivals)
    assert arrivals[0] > 0
    assert float(rows[-1]['t']) == 2.0


def test_analyze_unstable(capsys, model_file, doubling_queue):
    path = model_file(doubling_queue(1.5))
    assert main(['analyze', '--model', path, '--stationary']) == 3
    error = json.loads(capsys.readouterr().err)
    assert error['error_code'] == get_error_code('UNSTABLE_MODEL')
    assert error['omega'] == pytest.approx(0.5)


def test_search(capsys):
    argv = [
        'search', '--template', 'retrial', '--variable', 'gamma_d',
        '--target', '0.1', '--lower', '0.5', '--upper', '10',
    ]
    assert main(argv) == 0
    document = json.loads(capsys.readouterr().out)
    assert document['result']['status'] == 'found'
    assert document['result']['value'] == pytest.approx(2.15147, abs=1e-4)


def test_search_missing_flags(capsys):
    assert main(['search', '--template', 'retrial']) == 1


def test_experiment(tmp_path, capsys):
    path = tmp_path / 'exp1.csv'
    argv = ['experiment', 'retrial-exp1', '--grid', 'gamma_d:1:3:3', '--output', str(path)]
    assert main(argv) == 0
    lines = path.read_text().splitlines()
    assert lines[0] == 'gamma_d,loss_ratio,closed_form_loss_ratio,error'
    assert len(lines) == 4


def test_build(capsys):
    assert main(['build', 'premium-storage', '--params', '{"premium_fraction": 0.3}']) == 0
    assert json.loads(capsys.readouterr().out)['n_queues'] == 5


def test_dump_matrices(tmp_path, capsys):
    directory = tmp_path / 'matrices'
    assert main(['dump-matrices', '--template', 'retrial', '--output-dir', str(directory)]) == 0
    files = json.loads(capsys.readouterr().out)['files']
    assert files
    assert all(Path(name).parent == directory and Path(name).exists() for name in files)


def test_simulate(capsys):
    argv = ['simulate', '--template', 'retrial', '--params', '{"lam": 5}', '--reps', '20', '--horizon', '1', '--seed', '7']
    assert main(argv) == 0
    document = json.loads(capsys.readouterr().out)
    assert document['replications'] == 20


def test_simulate_needs_replications(capsys):
    assert main(['simulate', '--template', 'retrial', '--horizon', '1']) == 1
