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

from typing import Tuple
from scipy import linalg as sla
from scipy.linalg import lapack
from common.constants import (
    EXPM_THETA_13,
    PADE_13_COEFFICIENTS,
    RESIDUAL_FACTOR,
    CONDITION_WARNING,
)
from common.exceptions import (
    MatrixOverflowError,
    ConvergenceError,
    SingularMatrixError,
    NumericalError,
)

import math
import logging
import numpy as np

__all__ = (
    'expm',
    'eigenvalues',
    'spectral_abscissa',
    'solve_linear',
    'stationary_distribution',
)

_log = logging.getLogger(__name__)


def _square(B: np.ndarray) -> np.ndarray:
    B = np.asarray(B, dtype=float)
    if B.ndim != 2 or B.shape[0] != B.shape[1]:
        raise NumericalError(f'expected a square matrix, got shape {B.shape}')
    if not np.all(np.isfinite(B)):
        raise NumericalError('matrix has non-finite entries')
    return B


def _pade13(A: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    b = PADE_13_COEFFICIENTS
    ident = np.eye(A.shape[0])
    A2 = A @ A
    A4 = A2 @ A2
    A6 = A4 @ A2
    U = A @ (A6 @ (b[13] * A6 + b[11] * A4 + b[9] * A2) + b[7] * A6 + b[5] * A4 + b[3] * A2 + b[1] * ident)
    V = A6 @ (b[12] * A6 + b[10] * A4 + b[8] * A2) + b[6] * A6 + b[4] * A4 + b[2] * A2 + b[0] * ident
    return U, V


def expm(B: np.ndarray, t: float = 1.0) -> np.ndarray:
    """Computes exp(B t) by scaling and squaring with the degree 13
    diagonal Pade approximant.

    The scaling exponent s is the smallest integer with
    ``||B t||_1 / 2**s <= 5.3719...``. Raises :class:`MatrixOverflowError`
    when the result is not finite.
    """
    if t < 0:
        raise NumericalError(f'time must be nonnegative, got {t!r}')

    A = _square(B) * float(t)
    if A.shape[0] == 0:
        return A.copy()

    norm = np.linalg.norm(A, 1)
    s = 0
    if norm > EXPM_THETA_13:
        mantissa, s = math.frexp(norm / EXPM_THETA_13)
        s -= mantissa == 0.5
        A = A / 2.0 ** s

    U, V = _pade13(A)
    with np.errstate(over='ignore', invalid='ignore'):
        R = sla.solve(V - U, V + U)
        for _ in range(s):
            R = R @ R

    _log.debug('expm: order %d, norm %.3e, %d squarings', A.shape[0], norm, s)
    if not np.all(np.isfinite(R)):
        raise MatrixOverflowError(f'exp(B t) overflows for t={t!r} (1-norm of B t is {norm:.3e})')

    return R


def eigenvalues(B: np.ndarray) -> np.ndarray:
    """All eigenvalues of a real nonsymmetric matrix.

    The matrix is balanced, reduced to upper Hessenberg form and handed to
    LAPACK's Francis double-shift QR. Non-convergence raises
    :class:`ConvergenceError`.
    """
    B = _square(B)
    if B.shape[0] == 0:
        return np.zeros(0, dtype=complex)

    balanced, _ = sla.matrix_balance(B, permute=True, scale=True)
    hessenberg = sla.hessenberg(balanced)
    try:
        return sla.eigvals(hessenberg, overwrite_a=True, check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f'QR iteration did not converge: {exc}') from exc


def spectral_abscissa(B: np.ndarray) -> float:
    """The largest real part over the eigenvalues of B."""
    values = eigenvalues(B)
    if values.size == 0:
        raise NumericalError('spectral abscissa of an empty matrix is undefined')
    return float(values.real.max())


def solve_linear(B: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Solves ``B x = rhs`` by LU factorisation with partial pivoting.

    The reciprocal 1-norm condition number is estimated; a matrix singular
    to working precision raises :class:`SingularMatrixError`. The residual
    is checked against ``1e-10 (||B|| ||x|| + ||rhs||)`` in the infinity norm.
    """
    B = _square(B)
    rhs = np.asarray(rhs, dtype=float)
    if rhs.shape[0] != B.shape[0]:
        raise NumericalError(f'right-hand side has {rhs.shape[0]} rows, matrix has {B.shape[0]}')

    lu, piv, info = lapack.dgetrf(B)
    if info > 0:
        raise SingularMatrixError(f'matrix is exactly singular (zero pivot at {info})')

    anorm = np.linalg.norm(B, 1)
    rcond, _ = lapack.dgecon(lu, anorm, norm='1')
    if rcond < np.finfo(float).eps:
        raise SingularMatrixError(f'matrix is singular to working precision (rcond={rcond:.3e})')
    if rcond * CONDITION_WARNING < 1:
        _log.warning('solving an ill-conditioned system (condition estimate %.3e)', 1 / rcond)
    else:
        _log.debug('solve: order %d, condition estimate %.3e', B.shape[0], 1 / rcond)

    x = sla.lu_solve((lu, piv), rhs, check_finite=False)

    residual = np.linalg.norm(B @ x - rhs, np.inf)
    bound = RESIDUAL_FACTOR * (np.linalg.norm(B, np.inf) * np.linalg.norm(x, np.inf) + np.linalg.norm(rhs, np.inf))
    if residual > bound:
        raise SingularMatrixError(f'residual {residual:.3e} exceeds {bound:.3e}; the system is too ill-conditioned')

    return x


def stationary_distribution(generator: np.ndarray) -> np.ndarray:
    """The distribution pi with ``generator.T @ pi = 0`` and ``sum(pi) = 1``.

    The last balance equation is replaced by the normalisation.
    """
    generator = _square(generator)
    size = generator.shape[0]
    system = generator.T.copy()
    system[-1, :] = 1.0
    rhs = np.zeros(size)
    rhs[-1] = 1.0
    return solve_linear(system, rhs)
