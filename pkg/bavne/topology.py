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

"""Substrate and virtual network models.

This module holds the multi-domain substrate network, the virtual network
requests (VNRs) that are embedded onto it, the random generators that build
both from a handful of parameters, and the resource ledger that
allocates and releases embeddings.

Generate a substrate and a request::

    from bavne import topology

    network = topology.generate_substrate(topology.GeneratorConfig(), seed=7)
    vnr = topology.generate_vnr(
        topology.VnrConfig(), seed=11, arrival_time=0.0,
        domain_count=network.domains)

The ledger is all-or-nothing: :meth:`SubstrateNetwork.allocate` either
holds every node and link resource of a result or raises
:class:`~bavne.exceptions.InsufficientResources` without touching anything.
Residuals are derived from the set of active holds with an exactly rounded
sum, so releasing everything returns every residual to its capacity bit for
bit, whatever the allocation order was.
"""

import hashlib
import itertools
import logging
import math

import networkx as nx
import numpy as np

from bavne import _helpers
from bavne import exceptions

_LOGGER = logging.getLogger(__name__)

INTRA_DOMAIN = "intra-domain"
INTER_DOMAIN = "inter-domain"

_DEFAULT_MAX_ATTEMPTS = 1000


def link_key(u, v):
    """Returns the canonical key of the undirected link between ``u`` and
    ``v``.

    Args:
        u (int): One endpoint.
        v (int): The other endpoint.

    Returns:
        Tuple[int, int]: The endpoints in ascending order.
    """
    return (u, v) if u <= v else (v, u)


def format_link(key):
    """Formats a link key as ``"u-v"``."""
    return "{0}-{1}".format(*key)


class _Ledger(object):
    """A capacity and the holds placed against it."""

    def __init__(self, capacity):
        self.capacity = float(capacity)
        self.residual = self.capacity
        self._holds = {}

    def hold(self, owner, amount):
        self._holds[owner] = amount
        self._settle()

    def drop(self, owner):
        del self._holds[owner]
        self._settle()

    def _settle(self):
        self.residual = self.capacity - math.fsum(self._holds.values())


class SubstrateNode(object):
    """A substrate node with a CPU ledger.

    Args:
        node_id (int): The node identifier, unique in the network.
        domain (int): The 0-based index of the physical domain.
        cpu_capacity (float): Compute units the node offers.
        cpu_unit_price (float): Price of one compute unit.
        is_boundary (bool): Whether the node terminates inter-domain links.

    Raises:
        bavne.exceptions.ConfigError: If the capacity is negative or the
            price is not positive.
    """

    def __init__(
        self, node_id, domain, cpu_capacity, cpu_unit_price, is_boundary=False
    ):
        if cpu_capacity < 0:
            raise exceptions.ConfigError(
                "Node {0} has negative capacity {1!r}".format(node_id, cpu_capacity)
            )
        if cpu_unit_price <= 0:
            raise exceptions.ConfigError(
                "Node {0} needs a positive unit price, got {1!r}".format(
                    node_id, cpu_unit_price
                )
            )
        self.id = node_id
        self.domain = domain
        self.is_boundary = bool(is_boundary)
        self.cpu_unit_price = cpu_unit_price
        self._cpu = _Ledger(cpu_capacity)

    @property
    def cpu_capacity(self):
        """float: The compute units the node was built with."""
        return self._cpu.capacity

    @property
    def cpu_residual(self):
        """float: The compute units not held by any embedding."""
        return self._cpu.residual

    def to_dict(self):
        return {
            "id": self.id,
            "domain": self.domain,
            "is_boundary": self.is_boundary,
            "cpu_capacity": self.cpu_capacity,
            "cpu_residual": self.cpu_residual,
            "cpu_unit_price": self.cpu_unit_price,
        }

    def __repr__(self):
        return "SubstrateNode(id={0!r}, domain={1!r}, boundary={2!r})".format(
            self.id, self.domain, self.is_boundary
        )


class SubstrateLink(object):
    """An undirected substrate link with a bandwidth ledger.

    Args:
        u (int): One endpoint.
        v (int): The other endpoint.
        bw_capacity (float): Bandwidth units the link offers.
        bw_unit_price (float): Price of one bandwidth unit.
        delay (float): Propagation delay.

    Raises:
        bavne.exceptions.ConfigError: If the endpoints coincide or the
            numbers are out of range.
    """

    def __init__(self, u, v, bw_capacity, bw_unit_price, delay):
        if u == v:
            raise exceptions.ConfigError("Self-loop on node {0}".format(u))
        if bw_capacity < 0 or bw_unit_price <= 0 or delay < 0:
            raise exceptions.ConfigError(
                "Link {0}-{1} has invalid bandwidth, price or delay".format(u, v)
            )
        self.key = link_key(u, v)
        self.bw_unit_price = bw_unit_price
        self.delay = delay
        self.kind = None
        """str: :data:`INTRA_DOMAIN` or :data:`INTER_DOMAIN`, set when the
        link joins a network."""
        self._bw = _Ledger(bw_capacity)

    @property
    def endpoints(self):
        """Tuple[int, int]: The endpoints in ascending order."""
        return self.key

    @property
    def bw_capacity(self):
        """float: The bandwidth units the link was built with."""
        return self._bw.capacity

    @property
    def bw_residual(self):
        """float: The bandwidth units not held by any embedding."""
        return self._bw.residual

    def other(self, node_id):
        """Returns the endpoint opposite to ``node_id``."""
        u, v = self.key
        return v if node_id == u else u

    def to_dict(self):
        return {
            "u": self.key[0],
            "v": self.key[1],
            "kind": self.kind,
            "bw_capacity": self.bw_capacity,
            "bw_residual": self.bw_residual,
            "bw_unit_price": self.bw_unit_price,
            "delay": self.delay,
        }

    def __repr__(self):
        return "SubstrateLink({0}, kind={1!r})".format(format_link(self.key), self.kind)


class SubstrateNetwork(object):
    """A multi-domain substrate network and its resource ledger.

    The topology lives in a :class:`networkx.Graph` whose nodes carry the
    :class:`SubstrateNode` under ``"node"`` and whose edges carry the
    :class:`SubstrateLink` under ``"link"``.

    Args:
        domains (int): The number of physical domains.
    """

    def __init__(self, domains):
        if domains < 1:
            raise exceptions.ConfigError("A network needs at least one domain.")
        self.domains = domains
        self.graph = nx.Graph()
        self._nodes = {}
        self._links = {}
        self._active = {}

    def add_node(self, node):
        """Adds a node.

        Args:
            node (SubstrateNode): The node.

        Raises:
            bavne.exceptions.ConfigError: If the id is taken or the domain
                index is out of range.
        """
        if node.id in self._nodes:
            raise exceptions.ConfigError("Duplicate node {0}".format(node.id))
        if not 0 <= node.domain < self.domains:
            raise exceptions.ConfigError(
                "Node {0} is in unknown domain {1}".format(node.id, node.domain)
            )
        self._nodes[node.id] = node
        self.graph.add_node(node.id, node=node)

    def add_link(self, link):
        """Adds a link and classifies it as intra- or inter-domain.

        Args:
            link (SubstrateLink): The link.

        Raises:
            bavne.exceptions.ConfigError: If an endpoint is unknown, the link
                already exists, or an inter-domain link does not join two
                boundary nodes.
        """
        u, v = link.key
        if u not in self._nodes or v not in self._nodes:
            raise exceptions.ConfigError(
                "Link {0} has an unknown endpoint".format(format_link(link.key))
            )
        if link.key in self._links:
            raise exceptions.ConfigError(
                "Duplicate link {0}".format(format_link(link.key))
            )
        node_u, node_v = self._nodes[u], self._nodes[v]
        if node_u.domain == node_v.domain:
            link.kind = INTRA_DOMAIN
        elif node_u.is_boundary and node_v.is_boundary:
            link.kind = INTER_DOMAIN
        else:
            raise exceptions.ConfigError(
                "Inter-domain link {0} must join two boundary nodes".format(
                    format_link(link.key)
                )
            )
        self._links[link.key] = link
        self.graph.add_edge(u, v, link=link)

    @property
    def nodes(self):
        """List[SubstrateNode]: All nodes ordered by id."""
        return [self._nodes[node_id] for node_id in sorted(self._nodes)]

    @property
    def links(self):
        """List[SubstrateLink]: All links ordered by key."""
        return [self._links[key] for key in sorted(self._links)]

    def node(self, node_id):
        """Returns the node with the given id.

        Raises:
            KeyError: If there is no such node.
        """
        return self._nodes[node_id]

    def link(self, u, v):
        """Returns the link between ``u`` and ``v`` in either orientation.

        Raises:
            KeyError: If the nodes are not adjacent.
        """
        return self._links[link_key(u, v)]

    def has_link(self, u, v):
        return link_key(u, v) in self._links

    def neighbors(self, node_id):
        """Returns the neighbors of a node in ascending id order."""
        return sorted(self.graph.neighbors(node_id))

    def domain_nodes(self, domain):
        """Returns the nodes of one domain ordered by id."""
        return [node for node in self.nodes if node.domain == domain]

    def boundary_nodes(self, domain):
        """Returns the boundary nodes of one domain ordered by id."""
        return [node for node in self.domain_nodes(domain) if node.is_boundary]

    def domain_links(self, domain):
        """Returns the intra-domain links of one domain ordered by key."""
        return [
            link
            for link in self.links
            if link.kind == INTRA_DOMAIN and self._nodes[link.key[0]].domain == domain
        ]

    def inter_domain_links(self):
        """Returns all inter-domain links ordered by key."""
        return [link for link in self.links if link.kind == INTER_DOMAIN]

    def domain_graph(self, domain):
        """Returns a read-only view of one domain's intra-domain subgraph."""
        return self.graph.subgraph(node.id for node in self.domain_nodes(domain))

    def is_allocated(self, vnr_id):
        return vnr_id in self._active

    @property
    def active_ids(self):
        """List: The VNR ids currently holding resources."""
        return sorted(self._active)

    def allocate(self, result):
        """Holds the resources of an embedding, all or nothing.

        Args:
            result (bavne.embedding.EmbeddingResult): The embedding. Its
                :meth:`resource_usage` gives the CPU per substrate node and
                the bandwidth per substrate link.

        Raises:
            bavne.exceptions.DuplicateAllocation: If the VNR id already holds
                resources.
            bavne.exceptions.InsufficientResources: If any element lacks the
                residual. Nothing is mutated in that case.
        """
        vnr_id = result.vnr_id
        if vnr_id in self._active:
            raise exceptions.DuplicateAllocation(
                "VNR {0} is already allocated".format(vnr_id)
            )
        node_usage, link_usage = result.resource_usage()

        for node_id in sorted(node_usage):
            node = self._nodes[node_id]
            if node.cpu_residual < node_usage[node_id]:
                raise exceptions.InsufficientResources(
                    "node {0}".format(node_id), node_usage[node_id], node.cpu_residual
                )
        for key in sorted(link_usage):
            link = self._links[key]
            if link.bw_residual < link_usage[key]:
                raise exceptions.InsufficientResources(
                    "link {0}".format(format_link(key)),
                    link_usage[key],
                    link.bw_residual,
                )

        for node_id, amount in node_usage.items():
            self._nodes[node_id]._cpu.hold(vnr_id, amount)
        for key, amount in link_usage.items():
            self._links[key]._bw.hold(vnr_id, amount)
        self._active[vnr_id] = (node_usage, link_usage)

    def release(self, result):
        """Drops every hold of an embedding.

        Args:
            result (Union[bavne.embedding.EmbeddingResult, Hashable]): The
                embedding, or its VNR id.

        Raises:
            bavne.exceptions.DoubleRelease: If nothing is allocated under the
                VNR id.
        """
        vnr_id = getattr(result, "vnr_id", result)
        try:
            node_usage, link_usage = self._active.pop(vnr_id)
        except KeyError as caught_exc:
            new_exc = exceptions.DoubleRelease(
                "VNR {0} holds no resources".format(vnr_id)
            )
            raise new_exc from caught_exc
        for node_id in node_usage:
            self._nodes[node_id]._cpu.drop(vnr_id)
        for key in link_usage:
            self._links[key]._bw.drop(vnr_id)

    def residual_state(self):
        """Returns the residual of every node and link.

        Returns:
            Tuple[Tuple, Tuple]: Node residuals by id and link residuals by
                key.
        """
        return (
            tuple((node.id, node.cpu_residual) for node in self.nodes),
            tuple((link.key, link.bw_residual) for link in self.links),
        )

    def ledger_digest(self):
        """Returns a SHA-256 digest of all residuals."""
        digest = hashlib.sha256()
        digest.update(repr(self.residual_state()).encode("utf-8"))
        return digest.hexdigest()

    def is_pristine(self):
        """Whether every residual equals its capacity exactly."""
        nodes_clear = all(node.cpu_residual == node.cpu_capacity for node in self.nodes)
        links_clear = all(link.bw_residual == link.bw_capacity for link in self.links)
        return nodes_clear and links_clear

    def summary(self):
        """Returns the counts printed by ``bavne generate``."""
        intra = [link.bw_capacity for link in self.links if link.kind == INTRA_DOMAIN]
        return {
            "domains": self.domains,
            "nodes": len(self._nodes),
            "links": len(self._links),
            "mean_bw": (math.fsum(intra) / len(intra)) if intra else 0.0,
        }

    def to_dict(self):
        return {
            "domains": self.domains,
            "nodes": [node.to_dict() for node in self.nodes],
            "links": [link.to_dict() for link in self.links],
        }

    @classmethod
    def from_dict(cls, data):
        """Builds a network from its serialized form.

        Residual fields are informational and ignored: the network starts
        with no active allocations.

        Args:
            data (Mapping[str, Any]): The output of :meth:`to_dict`.

        Returns:
            SubstrateNetwork: The network.

        Raises:
            bavne.exceptions.ConfigError: If the data is malformed.
        """
        try:
            network = cls(data["domains"])
            for item in data["nodes"]:
                network.add_node(
                    SubstrateNode(
                        item["id"],
                        item["domain"],
                        item["cpu_capacity"],
                        item["cpu_unit_price"],
                        is_boundary=item.get("is_boundary", False),
                    )
                )
            for item in data["links"]:
                network.add_link(
                    SubstrateLink(
                        item["u"],
                        item["v"],
                        item["bw_capacity"],
                        item["bw_unit_price"],
                        item["delay"],
                    )
                )
        except (KeyError, TypeError) as caught_exc:
            new_exc = exceptions.ConfigError(
                "Network data is missing fields: {0}".format(caught_exc)
            )
            raise new_exc from caught_exc
        return network


def allocate(network, result):
    """Holds the resources of ``result`` on ``network``.

    See :meth:`SubstrateNetwork.allocate`.
    """
    network.allocate(result)


def release(network, result):
    """Releases the resources of ``result`` on ``network``.

    See :meth:`SubstrateNetwork.release`.
    """
    network.release(result)


class VirtualNode(object):
    """A virtual node.

    Args:
        node_id (int): Identifier, unique in its request.
        cpu_demand (float): Requested compute units.
        candidate_domains (Iterable[int]): Domains the node may be placed in.
    """

    def __init__(self, node_id, cpu_demand, candidate_domains):
        if cpu_demand <= 0:
            raise exceptions.ConfigError(
                "Virtual node {0} needs a positive CPU demand".format(node_id)
            )
        self.id = node_id
        self.cpu_demand = cpu_demand
        self.candidate_domains = tuple(sorted(set(candidate_domains)))
        if not self.candidate_domains:
            raise exceptions.ConfigError(
                "Virtual node {0} has no candidate domain".format(node_id)
            )

    def to_dict(self):
        return {
            "id": self.id,
            "cpu_demand": self.cpu_demand,
            "candidate_domains": list(self.candidate_domains),
        }


class VirtualLink(object):
    """An undirected virtual link.

    Args:
        u (int): One virtual endpoint.
        v (int): The other virtual endpoint.
        bw_demand (float): Requested bandwidth units.
    """

    def __init__(self, u, v, bw_demand):
        if u == v:
            raise exceptions.ConfigError("Virtual self-loop on {0}".format(u))
        if bw_demand <= 0:
            raise exceptions.ConfigError(
                "Virtual link {0}-{1} needs a positive bandwidth demand".format(u, v)
            )
        self.key = link_key(u, v)
        self.bw_demand = bw_demand

    @property
    def endpoints(self):
        return self.key

    def to_dict(self):
        return {"u": self.key[0], "v": self.key[1], "bw_demand": self.bw_demand}


class VirtualNetworkRequest(object):
    """A virtual network request (VNR).

    Args:
        vnr_id (int): Identifier of the request.
        nodes (Sequence[VirtualNode]): The virtual nodes.
        links (Sequence[VirtualLink]): The virtual links.
        arrival_time (float): Simulation time of arrival.
        lifetime (float): How long an accepted embedding is held.

    Raises:
        bavne.exceptions.ConfigError: If the demand graph is empty or
            disconnected, a link names an unknown node, or the lifetime is
            not positive.
    """

    def __init__(self, vnr_id, nodes, links, arrival_time=0.0, lifetime=1.0):
        if lifetime <= 0:
            raise exceptions.ConfigError(
                "VNR {0} needs a positive lifetime".format(vnr_id)
            )
        self.id = vnr_id
        self.nodes = list(nodes)
        self.links = sorted(links, key=lambda link: link.key)
        self.arrival_time = arrival_time
        self.lifetime = lifetime
        self._by_id = {node.id: node for node in self.nodes}

        graph = nx.Graph()
        graph.add_nodes_from(self._by_id)
        for link in self.links:
            if link.key[0] not in self._by_id or link.key[1] not in self._by_id:
                raise exceptions.ConfigError(
                    "VNR {0} link {1} names an unknown node".format(
                        vnr_id, format_link(link.key)
                    )
                )
            graph.add_edge(*link.key)
        if not self.nodes or not nx.is_connected(graph):
            raise exceptions.ConfigError("VNR {0} is not connected".format(vnr_id))

    @property
    def departure_time(self):
        return self.arrival_time + self.lifetime

    def node(self, node_id):
        return self._by_id[node_id]

    def incident_links(self, node_id):
        """Returns the virtual links touching ``node_id``."""
        return [link for link in self.links if node_id in link.key]

    def subgraphs(self):
        """Decomposes the request into one subgraph per virtual node.

        Each subgraph is the node together with its incident links, which is
        the unit a local controller receives for its domain.

        Returns:
            Mapping[int, List[VirtualLink]]: Incident links by virtual node.
        """
        return {node.id: self.incident_links(node.id) for node in self.nodes}

    def to_dict(self):
        return {
            "id": self.id,
            "arrival_time": self.arrival_time,
            "lifetime": self.lifetime,
            "nodes": [node.to_dict() for node in self.nodes],
            "links": [link.to_dict() for link in self.links],
        }

    @classmethod
    def from_dict(cls, data):
        """Builds a request from the output of :meth:`to_dict`.

        Raises:
            bavne.exceptions.ConfigError: If the data is malformed.
        """
        try:
            return cls(
                data["id"],
                [
                    VirtualNode(
                        item["id"], item["cpu_demand"], item["candidate_domains"]
                    )
                    for item in data["nodes"]
                ],
                [
                    VirtualLink(item["u"], item["v"], item["bw_demand"])
                    for item in data.get("links", [])
                ],
                arrival_time=data.get("arrival_time", 0.0),
                lifetime=data.get("lifetime", 1.0),
            )
        except (KeyError, TypeError) as caught_exc:
            new_exc = exceptions.ConfigError(
                "VNR data is missing fields: {0}".format(caught_exc)
            )
            raise new_exc from caught_exc


def _check_price_range(value, name):
    low, high = _helpers.as_range(value, name)
    if low != int(low) or high != int(high):
        raise exceptions.ConfigError("{0} must hold whole price tiers".format(name))
    return int(low), int(high)


class GeneratorConfig(object):
    """Parameters of the random substrate generator.

    The defaults describe four domains of thirty nodes,
    two boundary nodes per domain, 50% link probability.

    Raises:
        bavne.exceptions.ConfigError: If a field is out of range.
    """

    FIELDS = (
        "domain_count",
        "nodes_per_domain",
        "boundary_per_domain",
        "link_probability",
        "cpu_range",
        "cpu_price_range",
        "bw_range",
        "link_price_range",
        "delay_range",
        "inter_bw_range",
        "inter_price_range",
        "inter_delay_range",
        "inter_link_probability",
        "max_attempts",
    )

    def __init__(
        self,
        domain_count=4,
        nodes_per_domain=30,
        boundary_per_domain=2,
        link_probability=0.5,
        cpu_range=(100, 300),
        cpu_price_range=(1, 10),
        bw_range=(1000, 3000),
        link_price_range=(1, 10),
        delay_range=(1, 10),
        inter_bw_range=(1000, 3000),
        inter_price_range=(5, 15),
        inter_delay_range=(10, 30),
        inter_link_probability=0.5,
        max_attempts=_DEFAULT_MAX_ATTEMPTS,
    ):
        self.domain_count = _helpers.as_count(domain_count, "domain_count")
        self.nodes_per_domain = _helpers.as_count(
            nodes_per_domain, "nodes_per_domain"
        )
        self.boundary_per_domain = _helpers.as_count(
            boundary_per_domain, "boundary_per_domain"
        )
        if self.boundary_per_domain > self.nodes_per_domain:
            raise exceptions.ConfigError(
                "boundary_per_domain exceeds nodes_per_domain: {0} > {1}".format(
                    self.boundary_per_domain, self.nodes_per_domain
                )
            )
        self.link_probability = _helpers.as_probability(
            link_probability, "link_probability"
        )
        self.cpu_range = _helpers.as_range(cpu_range, "cpu_range")
        self.cpu_price_range = _check_price_range(cpu_price_range, "cpu_price_range")
        self.bw_range = _helpers.as_range(bw_range, "bw_range")
        self.link_price_range = _check_price_range(link_price_range, "link_price_range")
        self.delay_range = _helpers.as_range(delay_range, "delay_range")
        self.inter_bw_range = _helpers.as_range(inter_bw_range, "inter_bw_range")
        self.inter_price_range = _check_price_range(
            inter_price_range, "inter_price_range"
        )
        self.inter_delay_range = _helpers.as_range(
            inter_delay_range, "inter_delay_range"
        )
        self.inter_link_probability = _helpers.as_probability(
            inter_link_probability, "inter_link_probability"
        )
        self.max_attempts = _helpers.as_count(max_attempts, "max_attempts")

    @classmethod
    def from_dict(cls, data):
        _helpers.check_keys(data, cls.FIELDS, "generator")
        return cls(**data)

    def to_dict(self):
        return {
            name: list(value) if isinstance(value, tuple) else value
            for name, value in ((name, getattr(self, name)) for name in self.FIELDS)
        }


class VnrConfig(object):
    """Parameters of the random VNR generator.

    Raises:
        bavne.exceptions.ConfigError: If a field is out of range.
    """

    FIELDS = (
        "node_count",
        "link_probability",
        "cpu_demand_range",
        "bw_demand_range",
        "candidate_domain_count",
        "mean_lifetime",
        "max_attempts",
    )

    def __init__(
        self,
        node_count=4,
        link_probability=0.5,
        cpu_demand_range=(1, 10),
        bw_demand_range=(1, 10),
        candidate_domain_count=2,
        mean_lifetime=500.0,
        max_attempts=_DEFAULT_MAX_ATTEMPTS,
    ):
        self.node_count = _helpers.as_count(node_count, "node_count")
        self.link_probability = _helpers.as_probability(
            link_probability, "link_probability"
        )
        self.cpu_demand_range = _helpers.as_range(cpu_demand_range, "cpu_demand_range")
        self.bw_demand_range = _helpers.as_range(bw_demand_range, "bw_demand_range")
        self.candidate_domain_count = _helpers.as_count(
            candidate_domain_count, "candidate_domain_count"
        )
        self.mean_lifetime = _helpers.as_number(
            mean_lifetime, "mean_lifetime", positive=True
        )
        self.max_attempts = _helpers.as_count(max_attempts, "max_attempts")

    @classmethod
    def from_dict(cls, data):
        _helpers.check_keys(data, cls.FIELDS, "vnr")
        return cls(**data)

    def to_dict(self):
        return {
            name: list(value) if isinstance(value, tuple) else value
            for name, value in ((name, getattr(self, name)) for name in self.FIELDS)
        }


def _random_connected_edges(rng, count, probability, max_attempts, what):
    """Draws G(count, probability) edge sets until one is connected.

    Raises:
        bavne.exceptions.TopologyGenerationError: If no connected draw
            happens within ``max_attempts``.
    """
    pairs = list(itertools.combinations(range(count), 2))
    for attempt in range(1, max_attempts + 1):
        draws = rng.random(len(pairs))
        edges = [pair for pair, draw in zip(pairs, draws) if draw < probability]
        graph = nx.Graph()
        graph.add_nodes_from(range(count))
        graph.add_edges_from(edges)
        if nx.is_connected(graph):
            if attempt > max(1, max_attempts // 10):
                _LOGGER.warning("%s needed %s attempts to connect", what, attempt)
            return edges
    raise exceptions.TopologyGenerationError(
        "{0} stayed disconnected".format(what), max_attempts
    )


def _uniform_price(rng, price_range):
    low, high = price_range
    return int(rng.integers(low, high + 1))


def _wire_domains(network, config, rng):
    """Adds the inter-domain links.

    Every pair of domains gets one link between randomly chosen boundary
    nodes; every other boundary pair of the two domains is linked with
    ``inter_link_probability``.
    """

    def add(u, v):
        network.add_link(
            SubstrateLink(
                u,
                v,
                float(rng.uniform(*config.inter_bw_range)),
                _uniform_price(rng, config.inter_price_range),
                float(rng.uniform(*config.inter_delay_range)),
            )
        )

    for first, second in itertools.combinations(range(network.domains), 2):
        left = [node.id for node in network.boundary_nodes(first)]
        right = [node.id for node in network.boundary_nodes(second)]
        add(left[int(rng.integers(len(left)))], right[int(rng.integers(len(right)))])
        for u, v in itertools.product(left, right):
            if network.has_link(u, v):
                continue
            if rng.random() < config.inter_link_probability:
                add(u, v)


def generate_substrate(config, seed):
    """Generates a random multi-domain substrate network.

    Each domain is a G(n, p) random graph, redrawn until connected. CPU
    capacities, bandwidths and delays are drawn from continuous uniform
    ranges, prices from whole-number uniform ranges.

    Args:
        config (GeneratorConfig): The generator parameters.
        seed (int): The random seed. Equal ``(config, seed)`` pairs give
            identical networks.

    Returns:
        SubstrateNetwork: The network, with every residual at capacity.

    Raises:
        bavne.exceptions.TopologyGenerationError: If a domain cannot be made
            connected within ``config.max_attempts`` draws.
    """
    rng = np.random.default_rng(seed)
    network = SubstrateNetwork(config.domain_count)
    offset = 0

    for domain in range(config.domain_count):
        size = config.nodes_per_domain
        edges = _random_connected_edges(
            rng,
            size,
            config.link_probability,
            config.max_attempts,
            "domain {0}".format(domain),
        )
        boundary = set(
            int(index)
            for index in rng.choice(
                size, size=config.boundary_per_domain, replace=False
            )
        )
        for index in range(size):
            network.add_node(
                SubstrateNode(
                    offset + index,
                    domain,
                    float(rng.uniform(*config.cpu_range)),
                    _uniform_price(rng, config.cpu_price_range),
                    is_boundary=index in boundary,
                )
            )
        for i, j in edges:
            network.add_link(
                SubstrateLink(
                    offset + i,
                    offset + j,
                    float(rng.uniform(*config.bw_range)),
                    _uniform_price(rng, config.link_price_range),
                    float(rng.uniform(*config.delay_range)),
                )
            )
        offset += size

    _wire_domains(network, config, rng)
    _LOGGER.debug("Generated substrate with seed %s: %s", seed, network.summary())
    return network


def generate_vnr(config, seed, arrival_time=0.0, domain_count=4, vnr_id=0):
    """Generates a random virtual network request.

    Args:
        config (VnrConfig): The generator parameters.
        seed (int): The random seed.
        arrival_time (float): The arrival time stamped on the request.
        domain_count (int): The number of substrate domains to draw
            candidate domains from.
        vnr_id (int): The request id.

    Returns:
        VirtualNetworkRequest: The request. Its lifetime is exponential with
            mean ``config.mean_lifetime``.

    Raises:
        bavne.exceptions.ConfigError: If more candidate domains are asked
            for than the substrate has.
        bavne.exceptions.TopologyGenerationError: If the demand graph cannot
            be made connected.
    """
    if config.candidate_domain_count > domain_count:
        raise exceptions.ConfigError(
            "candidate_domain_count {0} exceeds the {1} substrate domains".format(
                config.candidate_domain_count, domain_count
            )
        )
    rng = np.random.default_rng(seed)
    edges = _random_connected_edges(
        rng,
        config.node_count,
        config.link_probability,
        config.max_attempts,
        "VNR {0}".format(vnr_id),
    )
    nodes = []
    for index in range(config.node_count):
        cpu_demand = float(rng.uniform(*config.cpu_demand_range))
        domains = rng.choice(
            domain_count, size=config.candidate_domain_count, replace=False
        )
        nodes.append(VirtualNode(index, cpu_demand, (int(d) for d in domains)))
    links = [
        VirtualLink(i, j, float(rng.uniform(*config.bw_demand_range))) for i, j in edges
    ]
    lifetime = 0.0
    while lifetime <= 0.0:
        lifetime = float(rng.exponential(config.mean_lifetime))
    return VirtualNetworkRequest(vnr_id, nodes, links, arrival_time, lifetime)
