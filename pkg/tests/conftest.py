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
from builders import StorageParams, build_retrial_network, build_storage_network, single_retrial_params
from models import NetworkModel, MultiplicativeTransition

import pytest
import numpy as np


@pytest.fixture
def mm_inf() -> Callable[..., NetworkModel]:
    """A single M/M/infinity queue in a one-state environment."""
    def factory(lam: float = 3.0, mu: float = 1.0) -> NetworkModel:
        return NetworkModel(
            n_queues=1,
            n_env=1,
            arrival_rates=[[lam]],
            departure_rates=[[[mu, 0.0]]],
        )
    return factory


@pytest.fixture
def doubling_queue() -> Callable[..., NetworkModel]:
    """One queue whose population doubles at rate ``alpha``."""
    def factory(alpha: float, mu: float = 1.0, lam: float = 1.0) -> NetworkModel:
        return NetworkModel(
            n_queues=1,
            n_env=1,
            arrival_rates=[[lam]],
            departure_rates=[[[mu, 0.0]]],
            transitions=[MultiplicativeTransition(0, 0, alpha, [[2]])],
        )
    return factory


@pytest.fixture
def retrial_model() -> Callable[..., NetworkModel]:
    def factory(
            lam: float = 100.0,
            kappa: float = 2.0,
            nu: float = 2.0,
            mu: float = 1.0,
            gamma_u: float = 0.1,
            gamma_d: float = 2.0,
        ) -> NetworkModel:
        return build_retrial_network(single_retrial_params(lam, kappa, nu, mu, gamma_u, gamma_d))
    return factory


@pytest.fixture
def storage_k2() -> NetworkModel:
    return build_storage_network(StorageParams(
        locations=2,
        arrival_rates=[1.0, 1.0, 1.0],
        up_rates=[0.3, 0.7],
        down_rates=[2.0, 5.0],
    ))


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20230401)
