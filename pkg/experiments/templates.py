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

from typing import Callable, Mapping, Optional, Tuple, Dict, Any
from dataclasses import dataclass, field
from common.exceptions import UsageError
from models.network import NetworkModel
from builders import (
    RetrialNetworkParams,
    ReroutingParams,
    StorageParams,
    build_retrial_network,
    build_rerouting_network,
    build_direct_only_network,
    build_storage_network,
    build_premium_storage,
    single_retrial_params,
    pool_queues,
    ring_routes,
    rerouting_usage_weights,
    storage_usage_weights,
    PREMIUM_USAGE_WEIGHTS,
)

import numpy as np

__all__ = (
    'Template',
    'TEMPLATES',
    'get_template',
)

Params = Dict[str, Any]


@dataclass(frozen=True)
class Template:
    """A named model family with default parameters.

    Attributes
    ----------
    name: :class:`str`
        The name used on the command line and in experiment specs.
    defaults: Mapping[:class:`str`, Any]
        Every accepted parameter with its default value.
    factory: Callable
        Builds the network model from a complete parameter mapping.
    counted: Callable
        The 0-based queues whose departures out of the network are losses.
    usage: Callable
        Per-queue usage weights, integrated over time as Z_s.
    """
    name: str
    defaults: Mapping[str, Any]
    factory: Callable[[Params], NetworkModel]
    counted: Callable[[Params], Tuple[int, ...]] = field(default=lambda params: ())
    usage: Optional[Callable[[Params], np.ndarray]] = None
    description: str = ''

    def resolve(self, overrides: Optional[Mapping[str, Any]] = None) -> Params:
        """The defaults updated with ``overrides``; unknown keys are rejected."""
        overrides = dict(overrides or {})
        unknown = sorted(set(overrides) - set(self.defaults))
        if unknown:
            raise UsageError(f'template {self.name!r} has no parameters {", ".join(unknown)}')
        params = dict(self.defaults)
        params.update(overrides)
        return params

    def build(self, params: Params) -> NetworkModel:
        return self.factory(params)

    def usage_weights(self, params: Params, model: NetworkModel) -> np.ndarray:
        if self.usage is None:
            return np.ones(model.n_queues)
        return np.asarray(self.usage(params), dtype=float)


def _retrial(params: Params) -> NetworkModel:
    return build_retrial_network(single_retrial_params(
        params['lam'], params['kappa'], params['nu'], params['mu'], params['gamma_u'], params['gamma_d'],
    ))


def _retrial_network_params(params: Params) -> RetrialNetworkParams:
    return RetrialNetworkParams(
        arrival_rates=params['arrival_rates'],
        routing_rates=params['routing_rates'],
        retrial_rates=params['retrial_rates'],
        renege_rates=params['renege_rates'],
        up_rates=params['up_rates'],
        down_rates=params['down_rates'],
    )


def _rerouting_params(params: Params) -> ReroutingParams:
    links = int(params['links'])
    return ReroutingParams(
        arrival_rates=np.full(links, params['lam']),
        service_rates=np.full(links, params['mu']),
        routes=ring_routes(links),
        up_rates=np.full(links, params['gamma_u']),
        down_rates=np.full(links, params['gamma_d']),
    )


def _storage_params(params: Params) -> StorageParams:
    locations = int(params['locations'])
    return StorageParams(
        locations=locations,
        arrival_rates=np.full(2 ** locations - 1, params['lam']),
        up_rates=np.full(locations, params['gamma_u']),
        down_rates=np.full(locations, params['gamma_d']),
    )


def _premium(params: Params) -> NetworkModel:
    return build_premium_storage(
        params['lam'], 1.0 - params['premium_fraction'], params['mu_copy'], params['gamma_u'], params['gamma_d'],
    )


TEMPLATES: Dict[str, Template] = {
    template.name: template
    for template in (
        Template(
            name='retrial',
            defaults={'lam': 100.0, 'kappa': 2.0, 'nu': 2.0, 'mu': 1.0, 'gamma_u': 0.1, 'gamma_d': 2.1496},
            factory=_retrial,
            counted=lambda params: (1,),
            description='one failing station with a retrial pool',
        ),
        Template(
            name='retrial-network',
            defaults={
                'arrival_rates': [1.0, 1.0],
                'routing_rates': [[0.5, 0.0, 0.5], [1.0, 0.0, 0.0]],
                'retrial_rates': [1.0, 1.0],
                'renege_rates': [0.1, 0.1],
                'up_rates': [0.1, 0.1],
                'down_rates': [1.0, 1.0],
            },
            factory=lambda params: build_retrial_network(_retrial_network_params(params)),
            counted=lambda params: tuple(pool_queues(_retrial_network_params(params))),
            description='failing stations with retrial pools and routing between stations',
        ),
        Template(
            name='rerouting',
            defaults={'links': 3, 'lam': 1.0, 'mu': 1.0, 'gamma_u': 0.1, 'gamma_d': 1.0},
            factory=lambda params: build_rerouting_network(_rerouting_params(params)),
            usage=lambda params: rerouting_usage_weights(_rerouting_params(params)),
            description='a ring of links with two-link detours',
        ),
        Template(
            name='direct-only',
            defaults={'links': 3, 'lam': 1.0, 'mu': 1.0, 'gamma_u': 0.1, 'gamma_d': 1.0},
            factory=lambda params: build_direct_only_network(_rerouting_params(params)),
            description='the ring of links without detours',
        ),
        Template(
            name='storage',
            defaults={'locations': 2, 'lam': 1.0, 'gamma_u': 0.1, 'gamma_d': 1.0},
            factory=lambda params: build_storage_network(_storage_params(params)),
            usage=lambda params: storage_usage_weights(_storage_params(params)),
            description='files replicated over every subset of failing locations',
        ),
        Template(
            name='premium-storage',
            defaults={'lam': 1e4, 'premium_fraction': 0.5, 'mu_copy': 24.0, 'gamma_u': 0.01, 'gamma_d': 2.0},
            factory=_premium,
            usage=lambda params: np.array(PREMIUM_USAGE_WEIGHTS),
            description='basic and premium files at two locations; premium files are copied',
        ),
    )
}


def get_template(name: str) -> Template:
    try:
        return TEMPLATES[name]
    except KeyError:
        raise UsageError(f'unknown template {name!r}; choose from {", ".join(sorted(TEMPLATES))}') from None
