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
from scipy.linalg import expm as scipy_expm
from common.exceptions import SingularMatrixError, NumericalError
from numerics import (
    expm,
    eigenvalues,
    spectral_abscissa,
    solve_linear,
    stationary_distribution,
    integrate_ode,
    integrate_function,
)

import math
import pytest
import numpy as np


def _random_generator(rng: np.random.Generator, size: int) -> np.ndarray:
    Q = rng.uniform(0, 2, (size, size))
    np.fill_diagonal(Q, 0)
    np.fill_diagonal(Q, -Q.sum(axis=1))
    return Q


def test_expm_of_zero_is_identity():
    assert_allclose(expm(np.zeros((3, 3))), np.eye(3))
    assert_allclose(expm(np.ones((2, 2)), 0.0), np.eye(2))


def test_expm_scalar():
    assert expm(np.array([[-2.5]]), 1.3)[0, 0] == pytest.approx(math.exp(-3.25), rel=1e-14)


def test_expm_matches_scipy(rng):
    for size in (1, 2, 5, 9):
        B = rng.normal(size=(size, size)) * 3
        assert_allclose(expm(B, 0.7), scipy_expm(0.7 * B), rtol=1e-12, atol=1e-12)


def test_expm_semigroup(rng):
    for _ in range(20):
        B = rng.normal(size=(4, 4))
        s, t = rng.uniform(0, 2, 2)
        product = expm(B, s) @ expm(B, t)
        assert_allclose(expm(B, s + t), product, rtol=1e-12, atol=1e-12 * np.abs(product).max())


def test_expm_of_generator_is_stochastic(rng):
    for size in (2, 3, 6):
        Q = _random_generator(rng, size)
        P = expm(Q, rng.uniform(0.1, 5))
        assert np.all(P >= -1e-14)
        assert_allclose(P.sum(axis=1), 1.0, atol=1e-12)
        assert_allclose(expm(Q.T, 2.0).sum(axis=0), 1.0, atol=1e-12)


def test_expm_large_norm_is_scaled():
    B = np.array([[-50.0, 50.0], [20.0, -20.0]])
    assert_allclose(expm(B, 10.0), scipy_expm(10.0 * B), atol=1e-12)


def test_expm_rejects_negative_time():
    with pytest.raises(NumericalError):
        expm(np.eye(2), -1.0)


def test_spectral_radius_of_exponential(rng):
    for _ in range(10):
        B = rng.normal(size=(5, 5))
        omega = spectral_abscissa(B)
        radius = np.abs(np.linalg.eigvals(expm(B))).max()
        assert radius == pytest.approx(math.exp(omega), rel=1e-10)


def test_eigenvalues_of_triangular_matrix():
    B = np.array([[1.0, 7.0, 3.0], [0.0, -2.0, 4.0], [0.0, 0.0, 0.5]])
    assert_allclose(np.sort(eigenvalues(B).real), [-2.0, 0.5, 1.0], atol=1e-12)
    assert spectral_abscissa(B) == pytest.approx(1.0)


def test_complex_pair_abscissa():
    B = np.array([[-1.0, -3.0], [3.0, -1.0]])
    assert spectral_abscissa(B) == pytest.approx(-1.0, abs=1e-12)


def test_solve_linear(rng):
    B = rng.normal(size=(6, 6)) + 6 * np.eye(6)
    x = rng.normal(size=6)
    assert_allclose(solve_linear(B, B @ x), x, rtol=1e-12)


def test_solve_linear_singular():
    with pytest.raises(SingularMatrixError):
        solve_linear(np.array([[1.0, 2.0], [2.0, 4.0]]), np.ones(2))


def test_stationary_distribution_two_states():
    Q = np.array([[-1.0, 1.0], [3.0, -3.0]])
    assert_allclose(stationary_distribution(Q), [0.75, 0.25], atol=1e-14)


def test_stationary_distribution_balances(rng):
    Q = _random_generator(rng, 5)
    pi = stationary_distribution(Q)
    assert_allclose(Q.T @ pi, 0.0, atol=1e-12)
    assert pi.sum() == pytest.approx(1.0)


def test_integrate_ode_exponential_decay():
    y = integrate_ode(lambda t, y: -2.0 * y, np.array([1.0, 3.0]), 1.5)
    assert_allclose(y, np.array([1.0, 3.0]) * math.exp(-3.0), rtol=1e-8)
    assert_allclose(integrate_ode(lambda t, y: y, np.ones(2), 0.0), np.ones(2))


def test_integrate_function():
    value = integrate_function(lambda t: np.array([t, math.exp(-t)]), 2.0)
    assert_allclose(value, [2.0, 1 - math.exp(-2.0)], rtol=1e-10)
