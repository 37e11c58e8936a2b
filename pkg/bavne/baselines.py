# Copyright 2021 The bavne Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Comparison algorithms.

These are simplified stand-ins written from one-paragraph descriptions of
four published approaches, labelled ``-like`` in reports. Only directional
comparisons against the bandwidth-aware algorithm are meaningful.

* ``vne-pso``: candidates are the nodes within a hop radius of a boundary
  node, no bandwidth threshold, links routed on the first fewest-hop path
  found.
* ``mc-vnm``: greedy, no swarm. Links are mapped first, largest demand
  first, on the cheapest feasible path; their ends are pinned to the
  cheapest nodes that fit.
* ``lid-vne``: each virtual node picks a random candidate domain, then a
  random node there with enough CPU; links take the first path found.
* ``mp-vne``: swarm over unfiltered candidates minimizing a weighted sum
  of cost, inverse bottleneck bandwidth and delay.

All of them share the constraint check and atomic commit of
:mod:`bavne.embedding`, and the call signature of
:func:`bavne.embedding.embed_vnr`.
"""

import enum
import logging
import math

import numpy as np

from bavne import _graph
from bavne import embedding
from bavne import exceptions
from bavne import pso

_LOGGER = logging.getLogger(__name__)


class BaselineKind(enum.Enum):
    """The comparison algorithms, valued by their CLI name."""

    VNE_PSO = "vne-pso"
    MC_VNM = "mc-vnm"
    LID_VNE = "lid-vne"
    MP_VNE = "mp-vne"


BA_VNE = "ba-vne"
ALGORITHMS = (BA_VNE,) + tuple(kind.value for kind in BaselineKind)
"""Tuple[str]: Every algorithm name accepted by :func:`get_embedder`."""


class VnePsoStrategy(embedding.EmbeddingStrategy):
    """Hop-number candidate selection with the same swarm."""

    def __init__(self):
        super(VnePsoStrategy, self).__init__(
            BaselineKind.VNE_PSO.value,
            bandwidth_aware=False,
            routing=embedding.FIRST_FOUND,
        )

    def hop_limit(self, options):
        return options.vne_pso_hop_limit


def weighted_fitness(weights):
    """Builds the multi-objective fitness.

    Args:
        weights (Sequence[float]): Weights of the estimated cost, of the
            inverse of the smallest route bottleneck and of the summed route
            delay.

    Returns:
        Callable: ``fitness(position, gcn, vnr)``.
    """
    cost_weight, bandwidth_weight, delay_weight = weights

    def fitness(position, gcn, vnr):
        cost = pso.fitness(position, gcn, vnr)
        if math.isinf(cost):
            return cost
        placement = pso.as_assignment(vnr, position)
        bottleneck = math.inf
        delays = []
        for link in vnr.links:
            u, v = link.key
            route = gcn.estimate_route(placement[u], placement[v], link.bw_demand)
            bottleneck = min(bottleneck, route.bottleneck)
            delays.append(route.delay)
        inverse_bandwidth = 0.0 if math.isinf(bottleneck) else 1.0 / bottleneck
        return (
            cost_weight * cost
            + bandwidth_weight * inverse_bandwidth
            + delay_weight * math.fsum(delays)
        )

    return fitness


class MpVneStrategy(embedding.EmbeddingStrategy):
    """Weighted multi-objective swarm over unfiltered candidates."""

    def __init__(self):
        super(MpVneStrategy, self).__init__(
            BaselineKind.MP_VNE.value, bandwidth_aware=False, routing=embedding.WIDEST
        )

    def fitness(self, options):
        return weighted_fitness(options.mp_weights)


class LidVneStrategy(embedding.EmbeddingStrategy):
    """Random per-domain placement."""

    def __init__(self):
        super(LidVneStrategy, self).__init__(
            BaselineKind.LID_VNE.value,
            bandwidth_aware=False,
            routing=embedding.FIRST_FOUND,
        )

    def place(self, network, vnr, pso_params, options):
        rng = np.random.default_rng(pso_params.seed)
        assignment = {}
        used = set()
        for vnode in vnr.nodes:
            domains = vnode.candidate_domains
            domain = domains[int(rng.integers(len(domains)))]
            feasible = [
                node.id
                for node in network.domain_nodes(domain)
                if node.cpu_residual >= vnode.cpu_demand and node.id not in used
            ]
            if not feasible:
                raise exceptions.NoFeasibleCandidate(
                    vnode.id,
                    "virtual node {0} has no feasible node in domain {1}".format(
                        vnode.id, domain
                    ),
                )
            assignment[vnode.id] = feasible[int(rng.integers(len(feasible)))]
            used.add(assignment[vnode.id])
        return assignment, None


def _spare(link, pending):
    return link.bw_residual - pending.get(link.key, 0.0)


class McVnmStrategy(embedding.EmbeddingStrategy):
    """Greedy link-first mapping."""

    def __init__(self):
        super(McVnmStrategy, self).__init__(
            BaselineKind.MC_VNM.value, bandwidth_aware=False, routing=embedding.CHEAPEST
        )

    @staticmethod
    def _feasible(network, vnode, used):
        domains = set(vnode.candidate_domains)
        return sorted(
            (
                node
                for node in network.nodes
                if node.domain in domains
                and node.cpu_residual >= vnode.cpu_demand
                and node.id not in used
            ),
            key=lambda node: (node.cpu_unit_price, node.id),
        )

    def _map_link(self, network, vnr, vlink, placed, used, pending):
        """Maps one virtual link with at least one end not yet placed.

        Tries the source nodes cheapest first and keeps the first one from
        which some feasible node for the other end is reachable, choosing
        that node by link plus node cost.
        """
        first, second = vlink.key
        if second in placed:
            first, second = second, first
        if first in placed:
            sources = [network.node(placed[first])]
        else:
            sources = self._feasible(network, vnr.node(first), used)
        demand = vnr.node(second).cpu_demand

        for source in sources:
            targets = [
                node
                for node in self._feasible(network, vnr.node(second), used)
                if node.id != source.id
            ]
            if not targets:
                continue
            prices, paths = _graph.cheapest_paths_from(
                network.graph,
                source.id,
                weight=lambda u, v: network.link(u, v).bw_unit_price,
                admissible=lambda u, v: _spare(network.link(u, v), pending)
                >= vlink.bw_demand,
            )
            reachable = [node for node in targets if node.id in prices]
            if not reachable:
                continue
            target = min(
                reachable,
                key=lambda node: (
                    vlink.bw_demand * prices[node.id] + demand * node.cpu_unit_price,
                    node.id,
                ),
            )
            placed[first] = source.id
            placed[second] = target.id
            used.update((source.id, target.id))
            return embedding.SubstratePath.from_nodes(network, paths[target.id])
        raise exceptions.NoFeasiblePath(first, second, vlink.bw_demand)

    def map_request(self, network, vnr):
        """Greedily maps links, then pins any node left over.

        Returns:
            Tuple[Mapping[int, int], Mapping]: The placement and the paths.

        Raises:
            bavne.exceptions.EmbeddingError: If a link or node cannot be
                mapped.
        """
        placed = {}
        used = set()
        pending = {}
        link_assignment = {}
        for vlink in sorted(vnr.links, key=lambda link: (-link.bw_demand, link.key)):
            u, v = vlink.key
            if u in placed and v in placed:
                path = embedding.cheapest_feasible_path(
                    network, placed[u], placed[v], vlink.bw_demand, pending=pending
                )
            else:
                path = self._map_link(network, vnr, vlink, placed, used, pending)
            link_assignment[vlink.key] = path
            for key in path.links:
                pending[key] = pending.get(key, 0.0) + vlink.bw_demand
        for vnode in vnr.nodes:
            if vnode.id in placed:
                continue
            feasible = self._feasible(network, vnode, used)
            if not feasible:
                raise exceptions.NoFeasibleCandidate(vnode.id)
            placed[vnode.id] = feasible[0].id
            used.add(feasible[0].id)
        return placed, link_assignment

    def embed(self, network, vnr, pso_params=None, options=None):
        options = options or embedding.EmbeddingOptions()
        try:
            thresholds = embedding.domain_thresholds(network, options)
            assignment, link_assignment = self.map_request(network, vnr)
            selections = embedding.link_selections(
                network, link_assignment.values(), thresholds, options.threshold_basis
            )
            result = embedding.commit_embedding(
                network,
                vnr,
                assignment,
                link_assignment,
                self.name,
                selections=selections,
            )
        except embedding.REJECTIONS as caught_exc:
            _LOGGER.debug("%s rejected VNR %s: %s", self.name, vnr.id, caught_exc)
            return embedding.EmbeddingResult.rejected(vnr, self.name, caught_exc)
        return result


_STRATEGIES = {
    BA_VNE: embedding.BA_VNE,
    BaselineKind.VNE_PSO.value: VnePsoStrategy(),
    BaselineKind.MC_VNM.value: McVnmStrategy(),
    BaselineKind.LID_VNE.value: LidVneStrategy(),
    BaselineKind.MP_VNE.value: MpVneStrategy(),
}


def get_strategy(name):
    """Returns the :class:`~bavne.embedding.EmbeddingStrategy` named
    ``name``.

    Raises:
        bavne.exceptions.ConfigError: If the name is unknown.
    """
    if isinstance(name, BaselineKind):
        name = name.value
    try:
        return _STRATEGIES[name]
    except (KeyError, TypeError) as caught_exc:
        new_exc = exceptions.ConfigError(
            "Unknown algorithm {0!r}, expected one of {1}".format(
                name, ", ".join(ALGORITHMS)
            )
        )
        raise new_exc from caught_exc


def get_embedder(name):
    """Returns ``embed(network, vnr, pso_params=None, options=None)`` for the
    algorithm named ``name``.

    Raises:
        bavne.exceptions.ConfigError: If the name is unknown.
    """
    return get_strategy(name).embed


def _embed(kind, network, vnr, pso_params, options):
    return _STRATEGIES[kind.value].embed(network, vnr, pso_params, options)


def embed_vne_pso(network, vnr, pso_params=None, options=None):
    """Embeds ``vnr`` with the hop-based swarm baseline."""
    return _embed(BaselineKind.VNE_PSO, network, vnr, pso_params, options)


def embed_mc_vnm(network, vnr, pso_params=None, options=None):
    """Embeds ``vnr`` with the greedy link-first baseline. ``pso_params`` is
    ignored."""
    return _embed(BaselineKind.MC_VNM, network, vnr, pso_params, options)


def embed_lid_vne(network, vnr, pso_params=None, options=None, seed=None):
    """Embeds ``vnr`` with the random placement baseline.

    Args:
        network (bavne.topology.SubstrateNetwork): The substrate.
        vnr (bavne.topology.VirtualNetworkRequest): The request.
        pso_params (Optional[bavne.pso.PsoParams]): Only ``seed`` is used.
        options (Optional[bavne.embedding.EmbeddingOptions]): Shared knobs.
        seed (Optional[int]): Overrides ``pso_params.seed``.

    Returns:
        bavne.embedding.EmbeddingResult: The outcome.
    """
    pso_params = pso_params or pso.PsoParams()
    if seed is not None:
        pso_params = pso_params.replace(seed=seed)
    return _embed(BaselineKind.LID_VNE, network, vnr, pso_params, options)


def embed_mp_vne(network, vnr, pso_params=None, options=None, weights=None):
    """Embeds ``vnr`` with the weighted multi-objective baseline.

    ``weights`` overrides ``options.mp_weights``.
    """
    options = options or embedding.EmbeddingOptions()
    if weights is not None:
        data = options.to_dict()
        data["mp_weights"] = list(weights)
        options = embedding.EmbeddingOptions.from_dict(data)
    return _embed(BaselineKind.MP_VNE, network, vnr, pso_params, options)
