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

from typing import Dict, Any
from dataclasses import dataclass, asdict
from common.exceptions import FormulaRegimeError, ModelValidationError

import math

__all__ = (
    'RetrialMeans',
    'retrial_closed_form',
    'retrial_loss_floor',
)


@dataclass(frozen=True)
class RetrialMeans:
    """Stationary means of the single station with a retrial pool.

    Attributes
    ----------
    station_up: :class:`float`
        Mean number of customers in service while the station is up.
    pool_up: :class:`float`
        Mean number of customers in the pool while the station is up.
    pool_down: :class:`float`
        Mean number of customers in the pool while the station is down.
    loss_ratio: :class:`float`
        Long-run fraction of customers that renege from the pool.
    """
    station_up: float
    pool_up: float
    pool_down: float
    loss_ratio: float

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def _check_positive(**params: float) -> None:
    bad = [f'{name} must be positive and finite, got {value!r}'
           for name, value in params.items()
           if not (math.isfinite(value) and value > 0)]
    if bad:
        raise ModelValidationError(bad)


def retrial_closed_form(
        lam: float,
        kappa: float,
        nu: float,
        mu: float,
        gamma_u: float,
        gamma_d: float,
    ) -> RetrialMeans:
    """Closed-form stationary means of the single retrial station.

    The station serves at rate ``mu`` per customer, fails at rate
    ``gamma_u`` and is repaired at rate ``gamma_d``. Customers that find
    the station down, or are in service when it fails, wait in the pool;
    from there they retry at rate ``kappa`` and renege at rate ``nu``.

    Raises :class:`FormulaRegimeError` when the auxiliary constant eta is
    not positive.
    """
    _check_positive(lam=lam, kappa=kappa, nu=nu, mu=mu, gamma_u=gamma_u, gamma_d=gamma_d)

    total = gamma_u + gamma_d
    eta = (kappa + nu + gamma_u) * (nu + gamma_d) / gamma_d - kappa * gamma_u / (mu + gamma_u) - gamma_u
    if eta <= 0:
        raise FormulaRegimeError(f'closed form does not apply: eta = {eta!r} is not positive')

    pool_up = (lam * gamma_u / (total * eta)) * ((mu + gamma_u + gamma_d) / (mu + gamma_u))
    station_up = (kappa * pool_up + lam * gamma_d / total) / (mu + gamma_u)
    pool_down = ((kappa + nu + gamma_u) / gamma_d) * pool_up
    loss_ratio = (nu / lam) * (pool_up + pool_down)

    return RetrialMeans(station_up, pool_up, pool_down, loss_ratio)


def retrial_loss_floor(kappa: float, nu: float, mu: float, gamma_u: float) -> float:
    """The loss ratio in the limit of instantaneous repairs.

    No repair rate can push the loss ratio below this value.
    """
    _check_positive(kappa=kappa, nu=nu, mu=mu, gamma_u=gamma_u)
    return nu * gamma_u / (kappa * mu + nu * mu + nu * gamma_u)
