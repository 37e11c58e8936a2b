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

"""Embedding of virtual network requests.

The bandwidth-aware pipeline runs in four steps:

1. every domain selects candidate nodes over its qualifying links and
   uploads an aggregated view,
2. the global controller pre-maps the virtual nodes on the stitched view
   with :func:`bavne.pso.run_premapping`,
3. nodes are committed in decreasing CPU demand and virtual links are
   routed, largest demand first, on fewest-hop paths with the widest
   bottleneck, intra-domain links being restricted to qualifying links,
4. the result is checked against every constraint and allocated
   atomically on the substrate ledger.

Any failure turns into a rejected :class:`EmbeddingResult` and leaves the
ledger untouched. The comparison algorithms in :mod:`bavne.baselines` are
subclasses of :class:`EmbeddingStrategy` reusing the same commit path.
"""

import collections.abc
import logging
import math

from bavne import _graph
from bavne import _helpers
from bavne import abstraction
from bavne import exceptions
from bavne import metrics
from bavne import pso
from bavne import topology

_LOGGER = logging.getLogger(__name__)

WIDEST = "widest"
FIRST_FOUND = "first-found"
CHEAPEST = "cheapest"

REJECTIONS = (exceptions.EmbeddingError, exceptions.InsufficientResources)
"""Tuple[type]: Errors that turn into a rejected result."""


class SubstratePath(object):
    """A simple substrate path carrying one virtual link.

    Paths are undirected: a path equals its reverse.

    Args:
        nodes (Sequence[int]): The node sequence. A single node is the empty
            path of a virtual link whose ends share a substrate node.
        links (Sequence[bavne.topology.SubstrateLink]): The links between
            consecutive nodes.
    """

    def __init__(self, nodes, links):
        self.nodes = tuple(nodes)
        self.links = tuple(link.key for link in links)
        self.total_delay = math.fsum(link.delay for link in links)
        self.total_unit_price = math.fsum(link.bw_unit_price for link in links)
        self.bottleneck_bw = min((link.bw_residual for link in links), default=math.inf)

    @classmethod
    def from_nodes(cls, network, nodes):
        """Builds the path through ``nodes``.

        Raises:
            KeyError: If two consecutive nodes are not adjacent.
        """
        return cls(nodes, [network.link(u, v) for u, v in zip(nodes, nodes[1:])])

    @property
    def hops(self):
        return len(self.links)

    def reversed(self):
        path = SubstratePath((), ())
        path.nodes = self.nodes[::-1]
        path.links = self.links[::-1]
        path.total_delay = self.total_delay
        path.total_unit_price = self.total_unit_price
        path.bottleneck_bw = self.bottleneck_bw
        return path

    def _canonical(self):
        return min(self.nodes, self.nodes[::-1])

    def __eq__(self, other):
        if not isinstance(other, SubstratePath):
            return NotImplemented
        return self._canonical() == other._canonical()

    def __hash__(self):
        return hash(self._canonical())

    def __repr__(self):
        return "SubstratePath({0!r})".format(list(self.nodes))

    def to_dict(self):
        return {
            "nodes": list(self.nodes),
            "total_delay": self.total_delay,
            "total_unit_price": self.total_unit_price,
            "bottleneck_bw": None if not self.links else self.bottleneck_bw,
        }


class LinkSelection(object):
    """One intra-domain substrate link picked for a virtual link.

    Args:
        link (Tuple[int, int]): The substrate link key.
        domain (int): The link's domain.
        bandwidth (float): Its bandwidth when the VNR arrived, on the
            threshold basis.
        threshold (float): The domain threshold at that time.
    """

    def __init__(self, link, domain, bandwidth, threshold):
        self.link = link
        self.domain = domain
        self.bandwidth = bandwidth
        self.threshold = threshold

    @property
    def satisfied(self):
        """bool: Whether the link met the threshold."""
        return self.bandwidth >= self.threshold

    def to_dict(self):
        return {
            "link": list(self.link),
            "domain": self.domain,
            "bandwidth": self.bandwidth,
            "threshold": self.threshold,
        }


class Violation(object):
    """One broken constraint.

    Args:
        kind (str): ``"cpu"``, ``"bandwidth"``, ``"placement"``,
            ``"domain"`` or ``"path"``.
        element (str): The node, link or virtual element concerned.
        message (str): What is wrong.
    """

    def __init__(self, kind, element, message):
        self.kind = kind
        self.element = element
        self.message = message

    def __str__(self):
        return "{0}: {1}".format(self.element, self.message)

    def __repr__(self):
        return "Violation({0!r}, {1!r})".format(self.kind, self.element)


def _aggregate_usage(node_assignment, link_assignment, node_demands, link_demands):
    nodes = {}
    for vnode_id, node_id in node_assignment.items():
        nodes.setdefault(node_id, []).append(node_demands[vnode_id])
    links = {}
    for vlink_key, path in link_assignment.items():
        for key in path.links:
            links.setdefault(key, []).append(link_demands[vlink_key])
    return (
        {node_id: math.fsum(amounts) for node_id, amounts in nodes.items()},
        {key: math.fsum(amounts) for key, amounts in links.items()},
    )


class EmbeddingResult(object):
    """The outcome of embedding one VNR.

    Args:
        vnr_id (int): The request id.
        algorithm (str): Name of the algorithm that produced the result.
        accepted (bool): Whether the request was embedded.
        node_assignment (Mapping[int, int]): Virtual to substrate node.
        link_assignment (Mapping[Tuple[int, int], SubstratePath]): Virtual
            link key to substrate path.
        node_demands (Mapping[int, float]): CPU demand per virtual node.
        link_demands (Mapping[Tuple[int, int], float]): Bandwidth demand
            per virtual link.
        cost (float): Embedding cost.
        total_delay (float): Sum of the path delays.
        cause (str): ``"<ErrorClass>: <message>"`` for a rejection.
        selections (Sequence[LinkSelection]): Intra-domain links used.
        fitness_trace (Optional[List[float]]): Global best fitness per
            pre-mapping iteration.
    """

    def __init__(
        self,
        vnr_id,
        algorithm,
        accepted,
        node_assignment=None,
        link_assignment=None,
        node_demands=None,
        link_demands=None,
        cost=0.0,
        total_delay=0.0,
        cause=None,
        selections=(),
        fitness_trace=None,
    ):
        self.vnr_id = vnr_id
        self.algorithm = algorithm
        self.accepted = accepted
        self.node_assignment = dict(node_assignment or {})
        self.link_assignment = dict(link_assignment or {})
        self.node_demands = dict(node_demands or {})
        self.link_demands = dict(link_demands or {})
        self.cost = cost
        self.total_delay = total_delay
        self.cause = cause
        self.selections = list(selections)
        self.fitness_trace = fitness_trace

    @classmethod
    def rejected(cls, vnr, algorithm, caught_exc, fitness_trace=None):
        """Builds the result of a failed embedding."""
        return cls(
            vnr.id,
            algorithm,
            False,
            node_demands={vnode.id: vnode.cpu_demand for vnode in vnr.nodes},
            link_demands={link.key: link.bw_demand for link in vnr.links},
            cause="{0}: {1}".format(type(caught_exc).__name__, caught_exc),
            fitness_trace=fitness_trace,
        )

    def resource_usage(self):
        """Returns what the result holds on the ledger.

        Returns:
            Tuple[Mapping[int, float], Mapping[Tuple[int, int], float]]: CPU
                per substrate node and bandwidth per substrate link.
        """
        if not self.accepted:
            return {}, {}
        return _aggregate_usage(
            self.node_assignment,
            self.link_assignment,
            self.node_demands,
            self.link_demands,
        )

    @property
    def used_links(self):
        """FrozenSet[Tuple[int, int]]: Substrate links the result uses."""
        return frozenset(
            key for path in self.link_assignment.values() for key in path.links
        )

    def to_dict(self):
        return {
            "vnr_id": self.vnr_id,
            "algorithm": self.algorithm,
            "accepted": self.accepted,
            "cause": self.cause,
            "cost": self.cost,
            "total_delay": self.total_delay,
            "nodes": [
                {"virtual": vnode_id, "substrate": self.node_assignment[vnode_id]}
                for vnode_id in sorted(self.node_assignment)
            ],
            "links": [
                dict(self.link_assignment[key].to_dict(), u=key[0], v=key[1])
                for key in sorted(self.link_assignment)
            ],
        }


def check_constraints(assignment, link_assignment, network, vnr):
    """Checks a candidate embedding against every constraint.

    Covers CPU and bandwidth capacity, one substrate node per virtual node
    and no sharing, candidate domains, and path validity in either
    direction.

    Args:
        assignment (Mapping[int, int]): Virtual to substrate node.
        link_assignment (Mapping[Tuple[int, int], SubstratePath]): Virtual
            link key to substrate path.
        network (bavne.topology.SubstrateNetwork): The substrate.
        vnr (bavne.topology.VirtualNetworkRequest): The request.

    Returns:
        List[Violation]: Every violation found, empty when the embedding is
            valid.
    """
    violations = []
    owners = {}
    for vnode in vnr.nodes:
        element = "virtual node {0}".format(vnode.id)
        if vnode.id not in assignment:
            violations.append(Violation("placement", element, "is not placed"))
            continue
        node_id = assignment[vnode.id]
        try:
            node = network.node(node_id)
        except KeyError:
            violations.append(
                Violation(
                    "placement",
                    element,
                    "unknown substrate node {0}".format(node_id),
                )
            )
            continue
        if node_id in owners:
            violations.append(
                Violation(
                    "placement",
                    element,
                    "shares substrate node {0} with virtual node {1}".format(
                        node_id, owners[node_id]
                    ),
                )
            )
        owners.setdefault(node_id, vnode.id)
        if node.domain not in vnode.candidate_domains:
            violations.append(
                Violation(
                    "domain",
                    element,
                    "domain {0} is not among {1}".format(
                        node.domain, list(vnode.candidate_domains)
                    ),
                )
            )
        if node.cpu_residual < vnode.cpu_demand:
            violations.append(
                Violation(
                    "cpu",
                    "node {0}".format(node_id),
                    "needs {0!r} but has {1!r}".format(
                        vnode.cpu_demand, node.cpu_residual
                    ),
                )
            )

    routed = {}
    for link in vnr.links:
        element = "virtual link {0}".format(topology.format_link(link.key))
        path = link_assignment.get(link.key)
        if path is None:
            violations.append(Violation("path", element, "is not routed"))
            continue
        ends = (assignment.get(link.key[0]), assignment.get(link.key[1]))
        if (path.nodes[0], path.nodes[-1]) not in (ends, ends[::-1]):
            violations.append(Violation("path", element, "does not join its end nodes"))
            continue
        if len(set(path.nodes)) != len(path.nodes):
            violations.append(Violation("path", element, "revisits a node"))
            continue
        if not all(network.has_link(u, v) for u, v in zip(path.nodes, path.nodes[1:])):
            violations.append(Violation("path", element, "uses a missing link"))
            continue
        routed[link.key] = path

    _, link_usage = _aggregate_usage(
        {}, routed, {}, {link.key: link.bw_demand for link in vnr.links}
    )
    for key in sorted(link_usage):
        substrate_link = network.link(*key)
        if substrate_link.bw_residual < link_usage[key]:
            violations.append(
                Violation(
                    "bandwidth",
                    "link {0}".format(topology.format_link(key)),
                    "needs {0!r} but has {1!r}".format(
                        link_usage[key], substrate_link.bw_residual
                    ),
                )
            )
    return violations


def premap_cost(vnode, candidate):
    """Returns the pre-mapping cost of placing ``vnode`` on ``candidate``:
    CPU demand times CPU unit price."""
    return vnode.cpu_demand * candidate.cpu_unit_price


def domain_thresholds(network, options):
    """Returns the threshold of every domain under ``options``."""
    return {
        domain: abstraction.domain_threshold(
            network, domain, options.plus_one, options.threshold_basis
        )
        for domain in range(network.domains)
    }


def _search_space(network, bw_demand, domain, pending, admissible=None):
    pending = pending or {}
    graph = network.graph if domain is None else network.domain_graph(domain)

    def capacity(u, v):
        link = network.link(u, v)
        return link.bw_residual - pending.get(link.key, 0.0)

    def feasible(u, v):
        if capacity(u, v) < bw_demand:
            return False
        return admissible is None or admissible(network.link(u, v))

    return graph, capacity, feasible


def _qualifier(network, thresholds, basis):
    def admissible(link):
        if link.kind != topology.INTRA_DOMAIN:
            return True
        domain = network.node(link.key[0]).domain
        return abstraction.is_qualified(link, thresholds[domain], basis)

    return admissible


def max_bandwidth_path(
    network,
    src,
    dst,
    bw_demand,
    qualified_only=False,
    thresholds=None,
    basis=abstraction.RESIDUAL,
    domain=None,
    pending=None,
):
    """Finds the path a virtual link is embedded on.

    Among fewest-hop simple paths whose links all have ``bw_demand`` left,
    returns the one with the widest bottleneck, then the lowest sum of unit
    prices, then the smallest node sequence.

    Args:
        network (bavne.topology.SubstrateNetwork): The substrate.
        src (int): Source substrate node.
        dst (int): Destination substrate node.
        bw_demand (float): Bandwidth the path must carry.
        qualified_only (bool): Admit an intra-domain link only if it meets
            its domain threshold.
        thresholds (Optional[Mapping[int, float]]): Domain thresholds,
            computed from ``basis`` when omitted.
        basis (str): Threshold basis.
        domain (Optional[int]): Stay inside this domain.
        pending (Optional[Mapping[Tuple[int, int], float]]): Bandwidth
            already promised to earlier links of the same request.

    Returns:
        SubstratePath: The path; a single node when ``src == dst``.

    Raises:
        bavne.exceptions.NoFeasiblePath: If no path qualifies.
    """
    admissible = None
    if qualified_only:
        if thresholds is None:
            thresholds = {
                index: abstraction.domain_threshold(network, index, basis=basis)
                for index in range(network.domains)
            }
        admissible = _qualifier(network, thresholds, basis)
    graph, capacity, feasible = _search_space(
        network, bw_demand, domain, pending, admissible
    )
    nodes = _graph.best_path(
        graph,
        src,
        dst,
        capacity=capacity,
        price=lambda u, v: network.link(u, v).bw_unit_price,
        admissible=feasible,
    )
    if nodes is None:
        raise exceptions.NoFeasiblePath(src, dst, bw_demand)
    return SubstratePath.from_nodes(network, nodes)


def first_feasible_path(network, src, dst, bw_demand, domain=None, pending=None):
    """Returns the first fewest-hop path breadth-first search reaches.

    Raises:
        bavne.exceptions.NoFeasiblePath: If no path has enough bandwidth.
    """
    graph, _, feasible = _search_space(network, bw_demand, domain, pending)
    nodes = _graph.first_found_path(graph, src, dst, admissible=feasible)
    if nodes is None:
        raise exceptions.NoFeasiblePath(src, dst, bw_demand)
    return SubstratePath.from_nodes(network, nodes)


def cheapest_feasible_path(network, src, dst, bw_demand, domain=None, pending=None):
    """Returns the path with the lowest sum of unit prices.

    Raises:
        bavne.exceptions.NoFeasiblePath: If no path has enough bandwidth.
    """
    graph, _, feasible = _search_space(network, bw_demand, domain, pending)
    nodes = _graph.cheapest_path(
        graph,
        src,
        dst,
        weight=lambda u, v: network.link(u, v).bw_unit_price,
        admissible=feasible,
    )
    if nodes is None:
        raise exceptions.NoFeasiblePath(src, dst, bw_demand)
    return SubstratePath.from_nodes(network, nodes)


class EmbeddingOptions(object):
    """Knobs shared by every embedding algorithm.

    Args:
        plus_one (bool): Divide the domain bandwidth sum by ``count + 1``.
        threshold_basis (str): ``"residual"`` or ``"capacity"``.
        trace_fitness (bool): Keep the pre-mapping fitness trace on results.
        mp_weights (Sequence[float]): Cost, inverse bandwidth and delay
            weights of the multi-objective baseline.
        vne_pso_hop_limit (int): Hop radius of the hop-based baseline's
            candidates.

    Raises:
        bavne.exceptions.ConfigError: If a field is out of range.
    """

    FIELDS = (
        "plus_one",
        "threshold_basis",
        "trace_fitness",
        "mp_weights",
        "vne_pso_hop_limit",
    )

    def __init__(
        self,
        plus_one=False,
        threshold_basis=abstraction.RESIDUAL,
        trace_fitness=False,
        mp_weights=(1.0 / 3, 1.0 / 3, 1.0 / 3),
        vne_pso_hop_limit=1,
    ):
        if threshold_basis not in abstraction.THRESHOLD_BASES:
            raise exceptions.ConfigError(
                "threshold_basis must be one of {0}".format(abstraction.THRESHOLD_BASES)
            )
        if isinstance(mp_weights, str) or not isinstance(
            mp_weights, collections.abc.Sequence
        ):
            raise exceptions.ConfigError(
                "mp_weights must be three non-negative numbers"
            )
        weights = tuple(
            _helpers.as_number(weight, "mp_weights", minimum=0.0)
            for weight in mp_weights
        )
        if len(weights) != 3:
            raise exceptions.ConfigError(
                "mp_weights must be three non-negative numbers"
            )
        self.plus_one = _helpers.as_flag(plus_one, "plus_one")
        self.threshold_basis = threshold_basis
        self.trace_fitness = _helpers.as_flag(trace_fitness, "trace_fitness")
        self.mp_weights = weights
        self.vne_pso_hop_limit = _helpers.as_count(
            vne_pso_hop_limit, "vne_pso_hop_limit", minimum=0
        )

    @classmethod
    def from_dict(cls, data):
        _helpers.check_keys(data, cls.FIELDS, "embedding")
        return cls(**data)

    def to_dict(self):
        data = {name: getattr(self, name) for name in self.FIELDS}
        data["mp_weights"] = list(self.mp_weights)
        return data


def link_selections(network, paths, thresholds, basis):
    """Lists the intra-domain links used by ``paths``.

    Args:
        network (bavne.topology.SubstrateNetwork): The substrate, before
            the paths are allocated.
        paths (Iterable[SubstratePath]): The routed paths.
        thresholds (Mapping[int, float]): Domain thresholds.
        basis (str): Threshold basis.

    Returns:
        List[LinkSelection]: One record per use of an intra-domain link.
    """
    selections = []
    for path in paths:
        for key in path.links:
            link = network.link(*key)
            if link.kind != topology.INTRA_DOMAIN:
                continue
            domain = network.node(key[0]).domain
            selections.append(
                LinkSelection(
                    key,
                    domain,
                    abstraction.bandwidth_of(link, basis),
                    thresholds[domain],
                )
            )
    return selections


def commit_nodes(network, vnr, assignment):
    """Checks the placement node by node, largest CPU demand first.

    Raises:
        bavne.exceptions.InsufficientResources: At the first node whose
            residual CPU is too small.
    """
    order = sorted(vnr.nodes, key=lambda vnode: (-vnode.cpu_demand, vnode.id))
    for vnode in order:
        node = network.node(assignment[vnode.id])
        if node.cpu_residual < vnode.cpu_demand:
            raise exceptions.InsufficientResources(
                "node {0}".format(node.id), vnode.cpu_demand, node.cpu_residual
            )


def commit_embedding(
    network,
    vnr,
    assignment,
    link_assignment,
    algorithm,
    selections=(),
    fitness_trace=None,
):
    """Validates an embedding, prices it and allocates it.

    Args:
        network (bavne.topology.SubstrateNetwork): The substrate.
        vnr (bavne.topology.VirtualNetworkRequest): The request.
        assignment (Mapping[int, int]): Virtual to substrate node.
        link_assignment (Mapping[Tuple[int, int], SubstratePath]): Virtual
            link key to substrate path.
        algorithm (str): The algorithm name recorded on the result.
        selections (Sequence[LinkSelection]): Intra-domain link selections.
        fitness_trace (Optional[List[float]]): Pre-mapping trace.

    Returns:
        EmbeddingResult: The accepted result, allocated on ``network``.

    Raises:
        bavne.exceptions.ConstraintViolation: If any constraint is broken.
        bavne.exceptions.InsufficientResources: If the ledger refuses.
    """
    violations = check_constraints(assignment, link_assignment, network, vnr)
    if violations:
        raise exceptions.ConstraintViolation(violations)
    result = EmbeddingResult(
        vnr.id,
        algorithm,
        True,
        node_assignment=assignment,
        link_assignment=link_assignment,
        node_demands={vnode.id: vnode.cpu_demand for vnode in vnr.nodes},
        link_demands={link.key: link.bw_demand for link in vnr.links},
        selections=selections,
        fitness_trace=fitness_trace,
    )
    result.cost = metrics.embedding_cost(result, network)
    result.total_delay = math.fsum(
        path.total_delay for path in link_assignment.values()
    )
    network.allocate(result)
    return result


class EmbeddingStrategy(object):
    """An embedding algorithm built from the shared pipeline.

    Subclasses change how candidates are chosen, what the swarm minimizes
    and how links are routed, or override :meth:`place` and :meth:`embed`
    altogether.

    Args:
        name (str): The algorithm name recorded on results.
        bandwidth_aware (bool): Filter candidates and intra-domain links by
            the domain threshold.
        routing (str): :data:`WIDEST`, :data:`FIRST_FOUND` or
            :data:`CHEAPEST`.
    """

    def __init__(self, name, bandwidth_aware=True, routing=WIDEST):
        self.name = name
        self.bandwidth_aware = bandwidth_aware
        self.routing = routing

    def hop_limit(self, options):
        """Returns the candidate hop radius, ``None`` for unlimited."""
        return None

    def fitness(self, options):
        """Returns the function the swarm minimizes."""
        return pso.fitness

    def place(self, network, vnr, pso_params, options):
        """Pre-maps the virtual nodes.

        Returns:
            Tuple[Mapping[int, int], Optional[List[float]]]: The placement
                and the fitness trace.
        """
        gcn = abstraction.build_global_view(
            network,
            plus_one=options.plus_one,
            basis=options.threshold_basis,
            bandwidth_aware=self.bandwidth_aware,
            max_hops=self.hop_limit(options),
        )
        premapping = pso.run_premapping(gcn, vnr, pso_params, self.fitness(options))
        return premapping.assignment, premapping.trace

    def route(self, network, src, dst, bw_demand, thresholds, options, domain, pending):
        """Routes one virtual link."""
        if self.routing == FIRST_FOUND:
            return first_feasible_path(network, src, dst, bw_demand, domain, pending)
        if self.routing == CHEAPEST:
            return cheapest_feasible_path(network, src, dst, bw_demand, domain, pending)
        return max_bandwidth_path(
            network,
            src,
            dst,
            bw_demand,
            qualified_only=self.bandwidth_aware,
            thresholds=thresholds,
            basis=options.threshold_basis,
            domain=domain,
            pending=pending,
        )

    def route_links(self, network, vnr, assignment, thresholds, options):
        """Routes every virtual link, largest demand first.

        Links whose ends sit in one domain stay inside it. Bandwidth taken
        by earlier links of the request is deducted for later ones.

        Returns:
            Tuple[Mapping, List[LinkSelection]]: The paths and the
                intra-domain link selections.
        """
        link_assignment = {}
        pending = {}
        order = sorted(vnr.links, key=lambda link: (-link.bw_demand, link.key))
        for vlink in order:
            src = assignment[vlink.key[0]]
            dst = assignment[vlink.key[1]]
            src_domain = network.node(src).domain
            domain = src_domain if src_domain == network.node(dst).domain else None
            path = self.route(
                network, src, dst, vlink.bw_demand, thresholds, options, domain, pending
            )
            link_assignment[vlink.key] = path
            for key in path.links:
                pending[key] = pending.get(key, 0.0) + vlink.bw_demand
        selections = link_selections(
            network, link_assignment.values(), thresholds, options.threshold_basis
        )
        return link_assignment, selections

    def embed(self, network, vnr, pso_params=None, options=None):
        """Embeds ``vnr`` on ``network``.

        Args:
            network (bavne.topology.SubstrateNetwork): The substrate. An
                accepted result is allocated on it.
            vnr (bavne.topology.VirtualNetworkRequest): The request.
            pso_params (Optional[bavne.pso.PsoParams]): Swarm parameters.
            options (Optional[EmbeddingOptions]): Shared knobs.

        Returns:
            EmbeddingResult: Accepted and allocated, or rejected with the
                cause and nothing allocated.
        """
        pso_params = pso_params or pso.PsoParams()
        options = options or EmbeddingOptions()
        trace = None
        try:
            thresholds = domain_thresholds(network, options)
            assignment, trace = self.place(network, vnr, pso_params, options)
            if not options.trace_fitness:
                trace = None
            commit_nodes(network, vnr, assignment)
            link_assignment, selections = self.route_links(
                network, vnr, assignment, thresholds, options
            )
            result = commit_embedding(
                network,
                vnr,
                assignment,
                link_assignment,
                self.name,
                selections=selections,
                fitness_trace=trace,
            )
        except REJECTIONS as caught_exc:
            _LOGGER.debug("%s rejected VNR %s: %s", self.name, vnr.id, caught_exc)
            return EmbeddingResult.rejected(
                vnr, self.name, caught_exc, fitness_trace=trace
            )
        _LOGGER.debug("%s embedded VNR %s at cost %s", self.name, vnr.id, result.cost)
        return result


BA_VNE = EmbeddingStrategy("ba-vne")
"""EmbeddingStrategy: The bandwidth-aware algorithm."""


def embed_vnr(network, vnr, pso_params=None, options=None):
    """Embeds ``vnr`` with the bandwidth-aware algorithm.

    See :meth:`EmbeddingStrategy.embed`.
    """
    return BA_VNE.embed(network, vnr, pso_params, options)
