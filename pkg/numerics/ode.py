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

from typing import Callable
from scipy.integrate import solve_ivp, quad_vec
from common.constants import ODE_TOLERANCE
from common.exceptions import StepSizeError, NumericalError

import logging
import numpy as np

__all__ = (
    'integrate_ode',
    'integrate_function',
)

_log = logging.getLogger(__name__)


def integrate_ode(
        rhs: Callable[[float, np.ndarray], np.ndarray],
        y0: np.ndarray,
        T: float,
        tol: float = ODE_TOLERANCE,
    ) -> np.ndarray:
    """Integrates ``y' = rhs(t, y)`` from 0 to T and returns y(T).

    Uses the embedded Runge-Kutta 4(5) pair with relative and absolute
    tolerance ``tol``.
    """
    y0 = np.asarray(y0, dtype=float)
    if T < 0:
        raise NumericalError(f'horizon must be nonnegative, got {T!r}')
    if T == 0:
        return y0.copy()

    solution = solve_ivp(rhs, (0.0, float(T)), y0, method='RK45', rtol=tol, atol=tol)
    if solution.status != 0:
        raise StepSizeError(f'integration stopped at t={solution.t[-1]!r}: {solution.message}')

    _log.debug('integrate_ode: %d right-hand side evaluations', solution.nfev)
    return solution.y[:, -1]


def integrate_function(
        f: Callable[[float], np.ndarray],
        T: float,
        tol: float = ODE_TOLERANCE,
    ) -> np.ndarray:
    """Adaptive quadrature of a vector valued function over [0, T]."""
    if T == 0:
        return np.zeros_like(np.asarray(f(0.0), dtype=float))

    value, error = quad_vec(f, 0.0, float(T), epsabs=tol, epsrel=tol)
    _log.debug('integrate_function: estimated error %.3e', error)
    return np.asarray(value)
