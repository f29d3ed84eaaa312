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

from typing import List, Dict
from dataclasses import dataclass
from pathlib import Path
from common.utils import format_float
from models.network import NetworkModel, ensure_valid, aggregate_env_generator
from numerics.linalg import expm

import csv
import logging
import numpy as np

__all__ = (
    'AssembledSystem',
    'assemble',
    'moment_ode_rhs',
    'dump_matrices',
)

_log = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class AssembledSystem:
    """The dense matrices driving the first moments of a network.

    Indices of the J = I * N dimensional mean vector are environment
    major: entry (i, n) sits at position ``i * N + n``.

    Attributes
    ----------
    model: :class:`NetworkModel`
        The model the matrices were assembled from.
    L: :class:`numpy.ndarray`
        J x I arrival matrix; column i holds the arrival rates of state i
        in block i.
    M: :class:`numpy.ndarray`
        J x J block diagonal matrix of per-customer departure and routing rates.
    A: :class:`numpy.ndarray`
        J x J matrix of the multiplicative transitions; block (i, j) is the
        rate-weighted sum of the A-matrices of jumps from j to i, minus the
        total jump rate out of i on the diagonal blocks.
    A_env: :class:`numpy.ndarray`
        I x I generator of the environment.
    C: :class:`numpy.ndarray`
        (J + I) square matrix ``[[M + A, L], [0, A_env.T]]``.
    C1: :class:`numpy.ndarray`
        2J square matrix ``[[0, I], [0, M + A]]``.
    C2: :class:`numpy.ndarray`
        2(J + I) square matrix ``[[0, I], [0, C]]``.
    """
    model: NetworkModel
    L: np.ndarray
    M: np.ndarray
    A: np.ndarray
    A_env: np.ndarray
    C: np.ndarray
    C1: np.ndarray
    C2: np.ndarray

    @property
    def n_queues(self) -> int:
        return self.model.n_queues

    @property
    def n_env(self) -> int:
        return self.model.n_env

    @property
    def n_states(self) -> int:
        return self.model.n_states

    @property
    def drift(self) -> np.ndarray:
        """The matrix M + A of the mean dynamics."""
        return self.M + self.A

    def matrices(self) -> Dict[str, np.ndarray]:
        return {
            'L': self.L,
            'M': self.M,
            'A': self.A,
            'A_env': self.A_env,
            'C': self.C,
            'C1': self.C1,
            'C2': self.C2,
        }


def _departure_block(rates: np.ndarray) -> np.ndarray:
    # rates[n, 0] leaves, rates[n, k] routes n -> k - 1
    routing = rates[:, 1:]
    return routing.T - np.diag(rates.sum(axis=1))


def assemble(model: NetworkModel) -> AssembledSystem:
    """Builds the moment matrices of a valid model."""
    ensure_valid(model, allow_reducible=True)
    N, I = model.n_queues, model.n_env
    J = N * I

    L = np.zeros((J, I))
    M = np.zeros((J, J))
    A = np.zeros((J, J))
    for i in range(I):
        block = slice(i * N, (i + 1) * N)
        L[block, i] = model.arrival_rates[i]
        M[block, block] = _departure_block(model.departure_rates[i])

    identity = np.eye(N)
    for transition in model.transitions:
        source = slice(transition.from_env * N, (transition.from_env + 1) * N)
        target = slice(transition.to_env * N, (transition.to_env + 1) * N)
        A[target, source] += transition.rate * transition.matrix
        A[source, source] -= transition.rate * identity

    A_env = aggregate_env_generator(model)
    drift = M + A

    C = np.zeros((J + I, J + I))
    C[:J, :J] = drift
    C[:J, J:] = L
    C[J:, J:] = A_env.T

    C1 = np.zeros((2 * J, 2 * J))
    C1[:J, J:] = np.eye(J)
    C1[J:, J:] = drift

    Jp = J + I
    C2 = np.zeros((2 * Jp, 2 * Jp))
    C2[:Jp, Jp:] = np.eye(Jp)
    C2[Jp:, Jp:] = C

    _log.debug('assembled system with N=%d, I=%d, J=%d', N, I, J)
    matrices = [L, M, A, A_env, C, C1, C2]
    for matrix in matrices:
        matrix.setflags(write=False)

    return AssembledSystem(model, *matrices)


def moment_ode_rhs(sys: AssembledSystem, t: float, pi0: np.ndarray, Mbar: np.ndarray) -> np.ndarray:
    """The right-hand side ``L pi(t) + (M + A) Mbar`` of the mean equations,
    with ``pi(t) = exp(A_env.T t) pi0``."""
    pi_t = expm(sys.A_env.T, t) @ np.asarray(pi0, dtype=float)
    return sys.L @ pi_t + sys.drift @ np.asarray(Mbar, dtype=float)


def dump_matrices(sys: AssembledSystem, directory: Path) -> List[Path]:
    """Writes every assembled matrix to ``<directory>/<name>.csv``,
    row-major with 17 significant digits."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)

    paths = []
    for name, matrix in sys.matrices().items():
        path = directory / f'{name}.csv'
        with path.open('w', newline='') as fp:
            writer = csv.writer(fp)
            for row in np.atleast_2d(matrix):
                writer.writerow([format_float(value) for value in row])
        paths.append(path)

    return paths
