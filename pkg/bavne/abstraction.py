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

"""Local controller views and the global candidate network.

Each physical domain only uploads three kinds of information to the global
controller: its boundary nodes, its candidate nodes, and its interior links
collapsed into one synthetic node. This module computes those views and
stitches them, together with the inter-domain links, into the
:class:`GlobalCandidateNetwork` the pre-mapping runs on.

A link qualifies for selection when it still has bandwidth left and its
bandwidth is at least the domain's average link bandwidth::

    threshold = domain_average_bandwidth(
        [link.bw_residual for link in network.domain_links(domain)])

Candidate nodes are found breadth first from the boundary nodes, crossing
only qualifying links.
"""

import logging
import math

import cachetools
import networkx as nx

from bavne import _graph
from bavne import exceptions
from bavne import topology

_LOGGER = logging.getLogger(__name__)

RESIDUAL = "residual"
CAPACITY = "capacity"
THRESHOLD_BASES = (RESIDUAL, CAPACITY)

_ROUTE_CACHE_SIZE = 512


def aggregate_node_id(domain):
    """Returns the id of the synthetic node standing in for a domain's
    interior."""
    return "agg:{0}".format(domain)


def bandwidth_of(link, basis=RESIDUAL):
    """Returns the bandwidth of ``link`` that thresholds are measured in.

    Args:
        link (bavne.topology.SubstrateLink): The link.
        basis (str): :data:`RESIDUAL` or :data:`CAPACITY`.

    Returns:
        float: The bandwidth.
    """
    if basis == RESIDUAL:
        return link.bw_residual
    if basis == CAPACITY:
        return link.bw_capacity
    raise exceptions.ConfigError("Unknown threshold basis {0!r}".format(basis))


def domain_average_bandwidth(bandwidths, plus_one=False):
    """Computes a domain's average link bandwidth.

    Args:
        bandwidths (Iterable[float]): The bandwidth of every intra-domain
            link.
        plus_one (bool): Divide by ``count + 1`` instead of ``count``.

    Returns:
        float: The average, ``0.0`` for an empty domain.
    """
    values = list(bandwidths)
    if not values:
        return 0.0
    denominator = len(values) + 1 if plus_one else len(values)
    return math.fsum(values) / denominator


def domain_threshold(network, domain, plus_one=False, basis=RESIDUAL):
    """Returns the average bandwidth of one domain's intra-domain links."""
    return domain_average_bandwidth(
        (bandwidth_of(link, basis) for link in network.domain_links(domain)),
        plus_one=plus_one,
    )


def is_qualified(link, threshold, basis=RESIDUAL):
    """Whether a link may be selected: bandwidth left, and at least the
    threshold."""
    return link.bw_residual > 0 and bandwidth_of(link, basis) >= threshold


class BoundaryLink(object):
    """A candidate node's qualifying connection to one boundary node.

    Args:
        boundary (int): The boundary node id.
        bandwidth (float): Bottleneck residual bandwidth of the path.
        unit_price (float): Sum of the unit prices along the path.
        delay (float): Sum of the delays along the path.
    """

    def __init__(self, boundary, bandwidth, unit_price, delay):
        self.boundary = boundary
        self.bandwidth = bandwidth
        self.unit_price = unit_price
        self.delay = delay

    def to_dict(self):
        return {
            "boundary": self.boundary,
            "bandwidth": self.bandwidth,
            "unit_price": self.unit_price,
            "delay": self.delay,
        }


class CandidateNode(object):
    """A substrate node a virtual node may be placed on.

    Args:
        substrate_node_id (int): The substrate node.
        domain (int): Its domain.
        cpu_residual (float): CPU left at selection time.
        cpu_unit_price (float): CPU unit price.
        is_boundary (bool): Whether the node is a boundary node.
        hops (int): Breadth-first depth from the nearest boundary node.
        links_to_boundary (Sequence[BoundaryLink]): Qualifying connections
            to the domain's boundary nodes.
    """

    def __init__(
        self,
        substrate_node_id,
        domain,
        cpu_residual,
        cpu_unit_price,
        is_boundary=False,
        hops=0,
        links_to_boundary=(),
    ):
        self.substrate_node_id = substrate_node_id
        self.domain = domain
        self.cpu_residual = cpu_residual
        self.cpu_unit_price = cpu_unit_price
        self.is_boundary = is_boundary
        self.hops = hops
        self.links_to_boundary = list(links_to_boundary)

    @property
    def id(self):
        return self.substrate_node_id

    def to_dict(self):
        return {
            "substrate_node_id": self.substrate_node_id,
            "domain": self.domain,
            "cpu_residual": self.cpu_residual,
            "cpu_unit_price": self.cpu_unit_price,
            "is_boundary": self.is_boundary,
            "hops": self.hops,
            "links_to_boundary": [link.to_dict() for link in self.links_to_boundary],
        }

    def __repr__(self):
        return "CandidateNode({0!r}, domain={1!r}, hops={2!r})".format(
            self.substrate_node_id, self.domain, self.hops
        )


def _admissible(network, threshold, basis, bandwidth_aware):
    def admissible(u, v):
        link = network.link(u, v)
        if bandwidth_aware:
            return is_qualified(link, threshold, basis)
        return link.bw_residual > 0

    return admissible


def select_candidate_nodes(
    network,
    domain,
    plus_one=False,
    basis=RESIDUAL,
    bandwidth_aware=True,
    max_hops=None,
    threshold=None,
):
    """Selects the candidate nodes of one domain.

    Boundary nodes are always candidates. Other nodes are added hop by hop,
    breadth first from the boundary nodes, across links with residual
    bandwidth left that also pass the domain threshold.

    Args:
        network (bavne.topology.SubstrateNetwork): The substrate.
        domain (int): The domain.
        plus_one (bool): Threshold denominator variant, see
            :func:`domain_average_bandwidth`.
        basis (str): Measure thresholds on residual or capacity bandwidth.
        bandwidth_aware (bool): Apply the threshold. When false, any link
            with residual bandwidth can be crossed.
        max_hops (Optional[int]): Keep only candidates within this many hops
            of a boundary node.
        threshold (Optional[float]): Precomputed domain threshold.

    Returns:
        List[CandidateNode]: Candidates ordered by hops, then id.
    """
    if threshold is None:
        threshold = domain_threshold(network, domain, plus_one, basis)
    graph = network.domain_graph(domain)
    admissible = _admissible(network, threshold, basis, bandwidth_aware)
    boundary = [node.id for node in network.boundary_nodes(domain)]
    hops = _graph.multi_source_hops(graph, boundary, admissible)

    # Paths from every node to each boundary, reusing one BFS per boundary.
    to_boundary = {}
    for target in boundary:
        distances = _graph.hop_distances(graph, target, admissible)
        for source in distances:
            if source in boundary:
                continue
            path = _graph.best_path(
                graph,
                source,
                target,
                capacity=lambda u, v: network.link(u, v).bw_residual,
                price=lambda u, v: network.link(u, v).bw_unit_price,
                admissible=admissible,
                distances=distances,
            )
            links = [network.link(u, v) for u, v in zip(path, path[1:])]
            to_boundary.setdefault(source, []).append(
                BoundaryLink(
                    target,
                    min(link.bw_residual for link in links),
                    math.fsum(link.bw_unit_price for link in links),
                    math.fsum(link.delay for link in links),
                )
            )

    candidates = []
    for node_id in sorted(hops, key=lambda node_id: (hops[node_id], node_id)):
        if max_hops is not None and hops[node_id] > max_hops:
            continue
        node = network.node(node_id)
        candidates.append(
            CandidateNode(
                node.id,
                domain,
                node.cpu_residual,
                node.cpu_unit_price,
                is_boundary=node.is_boundary,
                hops=hops[node_id],
                links_to_boundary=to_boundary.get(node_id, ()),
            )
        )
    return candidates


class AggregatedLink(object):
    """The merged links between a boundary node and a domain's interior."""

    def __init__(self, boundary, bandwidth, unit_price, delay, members):
        self.boundary = boundary
        self.bandwidth = bandwidth
        self.unit_price = unit_price
        self.delay = delay
        self.members = members

    def to_dict(self):
        return {
            "boundary": self.boundary,
            "bandwidth": self.bandwidth,
            "unit_price": self.unit_price,
            "delay": self.delay,
            "members": self.members,
        }


class AggregatedDomainView(object):
    """What one local controller uploads to the global controller.

    Args:
        domain (int): The domain.
        threshold (float): The domain's average link bandwidth.
        boundary_nodes (Sequence[int]): The boundary node ids.
        aggregated_links (Sequence[AggregatedLink]): Boundary to interior
            links.
        boundary_links (Sequence[bavne.topology.SubstrateLink]): Intra-domain
            links joining two boundary nodes.
        candidate_nodes (Sequence[CandidateNode]): The candidates.
    """

    def __init__(
        self,
        domain,
        threshold,
        boundary_nodes,
        aggregated_links,
        boundary_links,
        candidate_nodes,
    ):
        self.domain = domain
        self.threshold = threshold
        self.boundary_nodes = list(boundary_nodes)
        self.aggregate_node = aggregate_node_id(domain)
        self.aggregated_links = list(aggregated_links)
        self.boundary_links = list(boundary_links)
        self.candidate_nodes = list(candidate_nodes)

    def to_dict(self):
        return {
            "domain": self.domain,
            "threshold": self.threshold,
            "boundary_nodes": list(self.boundary_nodes),
            "aggregate_node": self.aggregate_node,
            "aggregated_links": [link.to_dict() for link in self.aggregated_links],
            "boundary_links": [
                {
                    "u": link.key[0],
                    "v": link.key[1],
                    "bandwidth": link.bw_residual,
                    "unit_price": link.bw_unit_price,
                    "delay": link.delay,
                }
                for link in self.boundary_links
            ],
            "candidate_nodes": [node.to_dict() for node in self.candidate_nodes],
        }


def _weighted_mean(links, attribute, total):
    return (
        math.fsum(link.bw_residual * getattr(link, attribute) for link in links) / total
    )


def aggregate_domain(network, domain, candidates, threshold=0.0):
    """Collapses a domain's interior into one synthetic node.

    For every boundary node, its links into the interior that still have
    bandwidth are merged into one link to the synthetic node. The merged
    bandwidth is the sum of the members and the unit price and delay are
    their bandwidth-weighted means.

    Args:
        network (bavne.topology.SubstrateNetwork): The substrate.
        domain (int): The domain.
        candidates (Sequence[CandidateNode]): The domain's candidates.
        threshold (float): The domain threshold, carried for auditing.

    Returns:
        AggregatedDomainView: The view.
    """
    boundary = network.boundary_nodes(domain)
    boundary_ids = set(node.id for node in boundary)
    aggregated = []
    boundary_links = []

    for node in boundary:
        members = []
        for neighbor in network.neighbors(node.id):
            link = network.link(node.id, neighbor)
            if link.kind != topology.INTRA_DOMAIN:
                continue
            if neighbor in boundary_ids:
                if node.id < neighbor:
                    boundary_links.append(link)
            elif link.bw_residual > 0:
                members.append(link)
        if not members:
            continue
        total = math.fsum(link.bw_residual for link in members)
        aggregated.append(
            AggregatedLink(
                node.id,
                total,
                _weighted_mean(members, "bw_unit_price", total),
                _weighted_mean(members, "delay", total),
                len(members),
            )
        )

    return AggregatedDomainView(
        domain, threshold, sorted(boundary_ids), aggregated, boundary_links, candidates
    )


def build_domain_view(
    network, domain, plus_one=False, basis=RESIDUAL, bandwidth_aware=True, max_hops=None
):
    """Selects candidates and aggregates one domain in a single step."""
    threshold = domain_threshold(network, domain, plus_one, basis)
    candidates = select_candidate_nodes(
        network,
        domain,
        plus_one=plus_one,
        basis=basis,
        bandwidth_aware=bandwidth_aware,
        max_hops=max_hops,
        threshold=threshold,
    )
    return aggregate_domain(network, domain, candidates, threshold=threshold)


class RouteEstimate(object):
    """The cheapest route between two candidates in the global view.

    Args:
        unit_price (float): Sum of unit prices along the route.
        bottleneck (float): Smallest bandwidth along the route.
        delay (float): Sum of delays along the route.
    """

    def __init__(self, unit_price, bottleneck, delay):
        self.unit_price = unit_price
        self.bottleneck = bottleneck
        self.delay = delay


class GlobalCandidateNetwork(object):
    """The pseudo topology the global controller plans on.

    Nodes are boundary nodes, candidate nodes and one synthetic node per
    domain; edges are aggregated links, boundary-to-boundary links,
    candidate-to-boundary connections and inter-domain links. Every edge
    carries ``bw``, ``price`` and ``delay``.

    Args:
        views (Mapping[int, AggregatedDomainView]): One view per domain.
        inter_domain_links (Sequence[bavne.topology.SubstrateLink]): The
            inter-domain links.
    """

    def __init__(self, views, inter_domain_links):
        self.views = dict(views)
        self.inter_domain_links = list(inter_domain_links)
        self.graph = nx.Graph()
        self._candidates = {}
        self._routes = cachetools.LRUCache(maxsize=_ROUTE_CACHE_SIZE)

        for domain, view in sorted(self.views.items()):
            for boundary in view.boundary_nodes:
                self.graph.add_node(boundary, domain=domain)
            for link in view.aggregated_links:
                self._add_edge(
                    view.aggregate_node,
                    link.boundary,
                    link.bandwidth,
                    link.unit_price,
                    link.delay,
                )
            for link in view.boundary_links:
                self._add_link(link)
            for candidate in view.candidate_nodes:
                self._candidates[candidate.id] = candidate
                self.graph.add_node(candidate.id, domain=domain)
                for route in candidate.links_to_boundary:
                    self._add_edge(
                        candidate.id,
                        route.boundary,
                        route.bandwidth,
                        route.unit_price,
                        route.delay,
                    )
        for link in self.inter_domain_links:
            self._add_link(link)

    def _add_edge(self, u, v, bandwidth, price, delay):
        self.graph.add_edge(u, v, bw=bandwidth, price=price, delay=delay)

    def _add_link(self, link):
        u, v = link.key
        self._add_edge(u, v, link.bw_residual, link.bw_unit_price, link.delay)

    @property
    def domains(self):
        return sorted(self.views)

    def candidate(self, node_id):
        """Returns the :class:`CandidateNode` with the given substrate id."""
        return self._candidates[node_id]

    def candidates(self, domain=None):
        """Returns the candidates, optionally of one domain, ordered by id."""
        return [
            self._candidates[node_id]
            for node_id in sorted(self._candidates)
            if domain is None or self._candidates[node_id].domain == domain
        ]

    def feasible_candidates(self, vnode):
        """Returns the candidates in ``vnode``'s domains with enough CPU.

        Args:
            vnode (bavne.topology.VirtualNode): The virtual node.

        Returns:
            List[CandidateNode]: Candidates ordered by id.
        """
        domains = set(vnode.candidate_domains)
        return [
            candidate
            for candidate in self.candidates()
            if candidate.domain in domains
            and candidate.cpu_residual >= vnode.cpu_demand
        ]

    def estimate_route(self, source, target, demand):
        """Estimates the cheapest route able to carry ``demand``.

        Args:
            source (int): Candidate node id.
            target (int): Candidate node id.
            demand (float): The bandwidth to carry.

        Returns:
            Optional[RouteEstimate]: The estimate, or ``None`` if no route
                has enough bandwidth on every edge.
        """
        if source == target:
            return RouteEstimate(0.0, math.inf, 0.0)
        key = (source, demand)
        if key not in self._routes:
            self._routes[key] = _graph.cheapest_paths_from(
                self.graph,
                source,
                weight=lambda u, v: self.graph.edges[u, v]["price"],
                admissible=lambda u, v: self.graph.edges[u, v]["bw"] >= demand,
            )
        prices, paths = self._routes[key]
        if target not in paths:
            return None
        path = paths[target]
        edges = [self.graph.edges[u, v] for u, v in zip(path, path[1:])]
        return RouteEstimate(
            prices[target],
            min(edge["bw"] for edge in edges),
            math.fsum(edge["delay"] for edge in edges),
        )

    def to_dict(self):
        return {
            "views": [self.views[domain].to_dict() for domain in self.domains],
            "inter_domain_links": [
                {
                    "u": link.key[0],
                    "v": link.key[1],
                    "bandwidth": link.bw_residual,
                    "unit_price": link.bw_unit_price,
                    "delay": link.delay,
                }
                for link in self.inter_domain_links
            ],
        }


def build_global_candidate_network(views, inter_domain_links):
    """Stitches the domain views and inter-domain links together.

    Args:
        views (Union[Mapping[int, AggregatedDomainView],
            Sequence[AggregatedDomainView]]): One view per domain.
        inter_domain_links (Sequence[bavne.topology.SubstrateLink]): The
            inter-domain links.

    Returns:
        GlobalCandidateNetwork: The global view.

    Raises:
        bavne.exceptions.DisconnectedGlobalView: If some domain cannot be
            reached from the others over inter-domain links.
    """
    if not isinstance(views, dict):
        views = {view.domain: view for view in views}
    domain_of = {}
    for view in views.values():
        for node_id in view.boundary_nodes:
            domain_of[node_id] = view.domain

    reach = nx.Graph()
    reach.add_nodes_from(views)
    for link in inter_domain_links:
        u, v = link.key
        if u in domain_of and v in domain_of:
            reach.add_edge(domain_of[u], domain_of[v])
    if len(views) > 1:
        first = min(views)
        unreachable = set(views) - nx.node_connected_component(reach, first)
        if unreachable:
            raise exceptions.DisconnectedGlobalView(unreachable)
    return GlobalCandidateNetwork(views, inter_domain_links)


def build_global_view(
    network, plus_one=False, basis=RESIDUAL, bandwidth_aware=True, max_hops=None
):
    """Builds every domain view of ``network`` and the global view over them.

    Returns:
        GlobalCandidateNetwork: The global view.

    Raises:
        bavne.exceptions.DisconnectedGlobalView: If the domains are not
            connected by inter-domain links.
    """
    views = [
        build_domain_view(
            network,
            domain,
            plus_one=plus_one,
            basis=basis,
            bandwidth_aware=bandwidth_aware,
            max_hops=max_hops,
        )
        for domain in range(network.domains)
    ]
    _LOGGER.debug(
        "Domain thresholds: %s", [round(view.threshold, 3) for view in views]
    )
    return build_global_candidate_network(views, network.inter_domain_links())
