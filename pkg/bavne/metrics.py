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

"""Evaluation indices.

The five indices reported for every run are the acceptance rate, the
average embedding cost, the average embedding delay, the link utilization
and the average selected bandwidth. All of them are computed from a
:class:`MetricsAccumulator` fed by the simulation loop.

Ratios over empty samples have no value: :func:`acceptance_rate` and
:func:`link_utilization` return ``None`` and the averages raise
:class:`~bavne.exceptions.NoSamples`.
"""

import math

from bavne import exceptions

UNDEFINED = "undefined"
"""str: How a missing value is written to reports and CSV files."""


def node_cost(result, network):
    """Returns the CPU part of an embedding's cost."""
    return math.fsum(
        result.node_demands[vnode_id] * network.node(node_id).cpu_unit_price
        for vnode_id, node_id in sorted(result.node_assignment.items())
    )


def link_cost(result, network):
    """Returns the bandwidth part of an embedding's cost."""
    return math.fsum(
        result.link_demands[key] * path.total_unit_price
        for key, path in sorted(result.link_assignment.items())
    )


def embedding_cost(result, network):
    """Returns the cost of an embedding.

    Every virtual node costs its CPU demand times the unit price of its
    substrate node; every virtual link costs its bandwidth demand times the
    sum of the unit prices along its path.

    Args:
        result (bavne.embedding.EmbeddingResult): The embedding.
        network (bavne.topology.SubstrateNetwork): The substrate holding the
            prices.

    Returns:
        float: The cost.
    """
    return node_cost(result, network) + link_cost(result, network)


class MetricsAccumulator(object):
    """Running counters of one simulation.

    Args:
        total_substrate_links (int): Size of the substrate link universe.
    """

    def __init__(self, total_substrate_links):
        self.total_substrate_links = total_substrate_links
        self.accepted_count = 0
        self.total_count = 0
        self.cost_samples = []
        self.delay_samples = []
        self.selected_bandwidth_samples = {}
        self.threshold_checks = 0
        self.threshold_failures = []
        self.utilization_samples = []
        self.arrivals = []
        self._link_users = {}

    @property
    def mapped_link_ids(self):
        """FrozenSet[Tuple[int, int]]: Links used by an active embedding."""
        return frozenset(self._link_users)

    def record_arrival(self, result, time):
        """Counts an arrival and, if accepted, its samples.

        Args:
            result (bavne.embedding.EmbeddingResult): The embedding outcome.
            time (float): The arrival time.
        """
        self.total_count += 1
        self.arrivals.append((time, result.accepted))
        if not result.accepted:
            return
        self.accepted_count += 1
        self.cost_samples.append(result.cost)
        self.delay_samples.append(result.total_delay)
        for key in result.used_links:
            self._link_users.setdefault(key, set()).add(result.vnr_id)
        for selection in result.selections:
            self.selected_bandwidth_samples.setdefault(selection.domain, []).append(
                selection.bandwidth
            )
            self.threshold_checks += 1
            if not selection.satisfied:
                self.threshold_failures.append(selection)

    def record_departure(self, result):
        """Stops counting the links of a released embedding."""
        for key in result.used_links:
            users = self._link_users.get(key)
            if users is None:
                continue
            users.discard(result.vnr_id)
            if not users:
                del self._link_users[key]

    def sample_utilization(self, time):
        """Appends the current link utilization to the time series."""
        self.utilization_samples.append((time, link_utilization(self) or 0.0))


def acceptance_rate(acc):
    """Returns accepted over arrived VNRs, ``None`` before any arrival."""
    if acc.total_count == 0:
        return None
    return acc.accepted_count / acc.total_count


def link_utilization(acc):
    """Returns the share of substrate links used by an active embedding.

    A link used by several embeddings counts once. Returns ``None`` for a
    substrate without links.
    """
    if acc.total_substrate_links == 0:
        return None
    return len(acc.mapped_link_ids) / acc.total_substrate_links


def _mean(samples, what):
    if not samples:
        raise exceptions.NoSamples("No samples for {0}".format(what))
    return math.fsum(samples) / len(samples)


def average_cost(acc):
    """Returns the mean cost of the accepted embeddings.

    Raises:
        bavne.exceptions.NoSamples: If nothing was accepted.
    """
    return _mean(acc.cost_samples, "average cost")


def average_embedding_delay(acc):
    """Returns the mean, over accepted VNRs, of their summed path delays.

    Raises:
        bavne.exceptions.NoSamples: If nothing was accepted.
    """
    return _mean(acc.delay_samples, "average embedding delay")


def average_selected_bandwidth(acc, domain=None):
    """Returns the mean bandwidth of the intra-domain links selected.

    Args:
        acc (MetricsAccumulator): The counters.
        domain (Optional[int]): Restrict to one domain.

    Raises:
        bavne.exceptions.NoSamples: If no link was selected.
    """
    if domain is None:
        samples = [
            sample
            for domain_samples in acc.selected_bandwidth_samples.values()
            for sample in domain_samples
        ]
        return _mean(samples, "selected bandwidth")
    return _mean(
        acc.selected_bandwidth_samples.get(domain, []),
        "selected bandwidth in domain {0}".format(domain),
    )


def average_utilization(acc):
    """Returns the mean of the utilization samples, ``0.0`` without any."""
    if not acc.utilization_samples:
        return 0.0
    return math.fsum(value for _, value in acc.utilization_samples) / len(
        acc.utilization_samples
    )


def windowed_acceptance(acc, window, horizon):
    """Splits the acceptance rate into consecutive time windows.

    Args:
        acc (MetricsAccumulator): The counters.
        window (float): Window length.
        horizon (float): End of the arrival period.

    Returns:
        List[Tuple[float, Optional[float]]]: Window start and acceptance
            rate in that window, ``None`` for a window without arrivals.
    """
    if window <= 0 or horizon <= 0:
        return []
    count = int(math.ceil(horizon / window))
    arrived = [0] * count
    accepted = [0] * count
    for time, ok in acc.arrivals:
        index = min(int(time // window), count - 1)
        arrived[index] += 1
        accepted[index] += int(ok)
    return [
        (index * window, accepted[index] / arrived[index] if arrived[index] else None)
        for index in range(count)
    ]


def or_undefined(function, *args):
    """Returns ``function(*args)``, or :data:`UNDEFINED` when it has no
    value."""
    try:
        value = function(*args)
    except exceptions.NoSamples:
        return UNDEFINED
    return UNDEFINED if value is None else value
