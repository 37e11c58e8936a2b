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

"""Path search primitives shared by the abstraction and embedding layers.

Every function takes the graph plus small callables that decide which edges
are usable and what they cost, so the same search runs over a domain's
qualified links, the whole substrate, or the global candidate network.
"""

import math

import networkx as nx


def _restricted(graph, admissible):
    if admissible is None:
        return graph
    return nx.subgraph_view(graph, filter_edge=lambda u, v: admissible(u, v))


def hop_distances(graph, target, admissible=None):
    """Returns the hop distance of every node that can reach ``target``.

    Args:
        graph (networkx.Graph): The graph.
        target (Hashable): The node distances are measured to.
        admissible (Optional[Callable[[Hashable, Hashable], bool]]): Edge
            filter. ``None`` admits every edge.

    Returns:
        Mapping[Hashable, int]: Hops to ``target``. Empty if ``target`` is
            not in the graph.
    """
    if target not in graph:
        return {}
    return nx.single_source_shortest_path_length(_restricted(graph, admissible), target)


def best_path(graph, source, target, capacity, price, admissible=None, distances=None):
    """Finds the best path under a lexicographic order.

    Paths are ranked by fewest hops, then widest bottleneck, then lowest sum
    of unit prices, then smallest node sequence.

    Args:
        graph (networkx.Graph): The graph.
        source (Hashable): Start node.
        target (Hashable): End node.
        capacity (Callable[[Hashable, Hashable], float]): Usable capacity of
            an edge.
        price (Callable[[Hashable, Hashable], float]): Unit price of an edge.
        admissible (Optional[Callable[[Hashable, Hashable], bool]]): Edge
            filter.
        distances (Optional[Mapping[Hashable, int]]): Precomputed
            :func:`hop_distances` to ``target`` under the same filter.

    Returns:
        Optional[List[Hashable]]: The node sequence, or ``None`` if
            ``target`` is unreachable.
    """
    if source == target:
        return [source] if source in graph else None
    if distances is None:
        distances = hop_distances(graph, target, admissible)
    if source not in distances:
        return None
    view = _restricted(graph, admissible)
    limit = distances[source]

    def successors(node):
        step = distances[node] - 1
        return sorted(
            other for other in view.neighbors(node) if distances.get(other) == step
        )

    layer = sorted(
        (node for node, hops in distances.items() if hops <= limit),
        key=lambda node: distances[node],
    )
    width = {target: math.inf}
    for node in layer[1:]:
        width[node] = max(
            (min(capacity(node, other), width[other]) for other in successors(node)),
            default=-math.inf,
        )
    bottleneck = width[source]

    cost = {target: 0.0}
    for node in layer[1:]:
        options = [
            price(node, other) + cost[other]
            for other in successors(node)
            if capacity(node, other) >= bottleneck and cost[other] < math.inf
        ]
        cost[node] = min(options, default=math.inf)

    path = [source]
    node = source
    while node != target:
        for other in successors(node):
            if (
                capacity(node, other) >= bottleneck
                and cost[other] < math.inf
                and price(node, other) + cost[other] == cost[node]
            ):
                node = other
                break
        path.append(node)
    return path


def first_found_path(graph, source, target, admissible=None):
    """Returns the first path a breadth-first search reaches.

    Neighbors are expanded in ascending order, so the result is a fewest-hop
    path that ignores capacity and price beyond the edge filter.

    Returns:
        Optional[List[Hashable]]: The node sequence, or ``None``.
    """
    if source not in graph or target not in graph:
        return None
    if source == target:
        return [source]
    parents = {}
    for parent, child in nx.bfs_edges(
        _restricted(graph, admissible), source, sort_neighbors=sorted
    ):
        parents[child] = parent
        if child == target:
            break
    if target not in parents:
        return None
    path = [target]
    while path[-1] != source:
        path.append(parents[path[-1]])
    path.reverse()
    return path


def _hidden_weight(weight, admissible):
    def edge_weight(u, v, data):
        if admissible is not None and not admissible(u, v):
            return None
        return weight(u, v)

    return edge_weight


def cheapest_path(graph, source, target, weight, admissible=None):
    """Returns the minimum-weight path.

    Args:
        graph (networkx.Graph): The graph.
        source (Hashable): Start node.
        target (Hashable): End node.
        weight (Callable[[Hashable, Hashable], float]): Edge weight.
        admissible (Optional[Callable[[Hashable, Hashable], bool]]): Edge
            filter. Inadmissible edges are hidden from the search.

    Returns:
        Optional[List[Hashable]]: The node sequence, or ``None``.
    """
    if source not in graph or target not in graph:
        return None
    try:
        return nx.dijkstra_path(
            graph, source, target, weight=_hidden_weight(weight, admissible)
        )
    except nx.NetworkXNoPath:
        return None


def cheapest_paths_from(graph, source, weight, admissible=None):
    """Returns minimum-weight paths from ``source`` to every reachable node.

    Returns:
        Tuple[Mapping[Hashable, float], Mapping[Hashable, List[Hashable]]]:
            Distances and paths keyed by destination.
    """
    if source not in graph:
        return {}, {}
    return nx.single_source_dijkstra(
        graph, source, weight=_hidden_weight(weight, admissible)
    )


def multi_source_hops(graph, sources, admissible=None):
    """Returns the hop distance of every node to its nearest source.

    Returns:
        Mapping[Hashable, int]: Hops for every node reachable from
            ``sources``.
    """
    sources = [source for source in sources if source in graph]
    if not sources:
        return {}
    return nx.multi_source_dijkstra_path_length(
        graph, sources, weight=_hidden_weight(lambda u, v: 1, admissible)
    )
