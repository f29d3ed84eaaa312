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

from typing import Optional, Sequence, List, Tuple, Dict, Any
from dataclasses import dataclass
from common.exceptions import UnstableModelError, NumericalError, ModelValidationError
from models.network import InitialCondition, is_irreducible, REDUCIBLE_ENVIRONMENT
from models.assembly import AssembledSystem
from numerics.linalg import expm, solve_linear, stationary_distribution
from analysis.stability import stability

import logging
import numpy as np

__all__ = (
    'TransientState',
    'env_distribution',
    'integrated_env_distribution',
    'transient_mean',
    'integrated_mean',
    'transient_state',
    'trajectory',
    'stationary_mean',
)

_log = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class TransientState:
    """First moments of the network at time t.

    Attributes
    ----------
    t: :class:`float`
        The time.
    env_dist: :class:`numpy.ndarray`
        The environment distribution pi(t).
    mean: :class:`numpy.ndarray`
        The J-vector Mbar(t), entry (i, n) = E[M_n(t) 1{X(t) = i}].
    integrated_mean: Optional[:class:`numpy.ndarray`]
        The J-vector of integrals of Mbar over [0, t], when requested.
    """
    t: float
    env_dist: np.ndarray
    mean: np.ndarray
    integrated_mean: Optional[np.ndarray] = None

    def to_dict(self, sys: AssembledSystem) -> Dict[str, Any]:
        labels = sys.model.state_labels()
        out: Dict[str, Any] = {
            't': self.t,
            'pi': {sys.model.env_label(i): float(p) for i, p in enumerate(self.env_dist)},
            'mean': dict(zip(labels, map(float, self.mean))),
        }
        if self.integrated_mean is not None:
            out['integrated_mean'] = dict(zip(labels, map(float, self.integrated_mean)))
        return out


def _check_horizon(T: float) -> float:
    T = float(T)
    if not T >= 0:
        raise NumericalError(f'time must be nonnegative, got {T!r}')
    return T


def _check_initial(sys: AssembledSystem, init: InitialCondition) -> None:
    if init.env_dist.shape != (sys.n_env,) or init.mean_vector.shape != (sys.n_states,):
        raise NumericalError(
            f'initial condition has shapes {init.env_dist.shape} and {init.mean_vector.shape}, '
            f'expected ({sys.n_env},) and ({sys.n_states},)'
        )


def env_distribution(sys: AssembledSystem, pi0: np.ndarray, t: float) -> np.ndarray:
    """The environment distribution ``pi(t) = exp(A_env.T t) pi(0)``."""
    return expm(sys.A_env.T, _check_horizon(t)) @ np.asarray(pi0, dtype=float)


def integrated_env_distribution(sys: AssembledSystem, pi0: np.ndarray, T: float) -> np.ndarray:
    """The integral of pi(t) over [0, T], read off the top-right block of
    ``exp([[0, I], [0, A_env.T]] T)``."""
    T = _check_horizon(T)
    I = sys.n_env
    block = np.zeros((2 * I, 2 * I))
    block[:I, I:] = np.eye(I)
    block[I:, I:] = sys.A_env.T
    return expm(block, T)[:I, I:] @ np.asarray(pi0, dtype=float)


def transient_mean(sys: AssembledSystem, init: InitialCondition, T: float) -> np.ndarray:
    """Mbar(T) from a single exponential of C.

    The top-left J x J block of exp(C T) is exp((M + A) T) and the
    top-right J x I block is the integral that carries the arrivals.
    """
    T = _check_horizon(T)
    _check_initial(sys, init)
    J = sys.n_states

    exp_c = expm(sys.C, T)
    return exp_c[:J, :J] @ init.mean_vector + exp_c[:J, J:] @ init.env_dist


def integrated_mean(sys: AssembledSystem, init: InitialCondition, T: float) -> np.ndarray:
    """The integral of Mbar(t) over [0, T] from the exponentials of C1 and C2."""
    T = _check_horizon(T)
    _check_initial(sys, init)
    J, I = sys.n_states, sys.n_env
    Jp = J + I

    exp_c1 = expm(sys.C1, T)
    exp_c2 = expm(sys.C2, T)
    return exp_c1[:J, J:] @ init.mean_vector + exp_c2[:J, 2 * Jp - I:] @ init.env_dist


def transient_state(
        sys: AssembledSystem,
        init: InitialCondition,
        T: float,
        *,
        integrated: bool = False,
    ) -> TransientState:
    T = _check_horizon(T)
    return TransientState(
        t=T,
        env_dist=env_distribution(sys, init.env_dist, T),
        mean=transient_mean(sys, init, T),
        integrated_mean=integrated_mean(sys, init, T) if integrated else None,
    )


def trajectory(
        sys: AssembledSystem,
        init: InitialCondition,
        times: Sequence[float],
        *,
        integrated: bool = False,
    ) -> List[TransientState]:
    """Transient states at each of the given times."""
    return [transient_state(sys, init, t, integrated=integrated) for t in times]


def stationary_mean(sys: AssembledSystem) -> Tuple[np.ndarray, np.ndarray]:
    """The stationary environment law pi and the stationary mean
    ``-(M + A)^{-1} L pi``.

    Raises :class:`UnstableModelError` when the spectral abscissa is not
    negative.
    """
    if not is_irreducible(sys.model):
        raise ModelValidationError([REDUCIBLE_ENVIRONMENT])

    verdict = stability(sys)
    if not verdict.stable:
        raise UnstableModelError(verdict.omega)

    pi = stationary_distribution(sys.A_env)
    mean = -solve_linear(sys.drift, sys.L @ pi)
    _log.debug('stationary mean computed with omega=%.6g', verdict.omega)
    return pi, mean
