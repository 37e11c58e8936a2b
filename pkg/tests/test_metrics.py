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


import mock
import pytest

from bavne import embedding
from bavne import exceptions
from bavne import metrics


def _result(vnr_id, accepted=True, cost=0.0, delay=0.0, links=(), selections=()):
    return mock.Mock(
        vnr_id=vnr_id,
        accepted=accepted,
        cost=cost,
        total_delay=delay,
        used_links=frozenset(links),
        selections=list(selections),
    )


def _selection(domain, bandwidth, threshold=0.0):
    return embedding.LinkSelection((0, 1), domain, bandwidth, threshold)


class TestEmbeddingCost(object):
    def test_example(self):
        network = mock.Mock()
        network.node.return_value = mock.Mock(cpu_unit_price=2)
        result = mock.Mock(
            node_assignment={0: 10},
            node_demands={0: 5},
            link_assignment={(0, 1): mock.Mock(total_unit_price=4)},
            link_demands={(0, 1): 3},
        )

        assert metrics.node_cost(result, network) == 10
        assert metrics.link_cost(result, network) == 12
        assert metrics.embedding_cost(result, network) == 22

    def test_node_only(self):
        network = mock.Mock()
        network.node.return_value = mock.Mock(cpu_unit_price=1)
        result = mock.Mock(
            node_assignment={0: 4}, node_demands={0: 1}, link_assignment={}
        )

        assert metrics.embedding_cost(result, network) == 1

    def test_sums_over_elements(self, scene):
        result = embedding.EmbeddingResult(
            0,
            "test",
            True,
            node_assignment={0: 1, 1: 5, 2: 6},
            link_assignment={
                (0, 1): embedding.SubstratePath.from_nodes(scene, (1, 5)),
                (1, 2): embedding.SubstratePath.from_nodes(scene, (5, 6)),
            },
            node_demands={0: 1, 1: 2, 2: 3},
            link_demands={(0, 1): 4, (1, 2): 5},
        )

        assert metrics.node_cost(result, scene) == 1 * 3 + 2 * 3 + 3 * 2
        assert metrics.link_cost(result, scene) == 4 * 5 + 5 * 2
        assert metrics.embedding_cost(result, scene) == 45


class TestMetricsAccumulator(object):
    def test_acceptance_rate(self):
        acc = metrics.MetricsAccumulator(10)
        for vnr_id, accepted in enumerate([True, False, True, True, False]):
            acc.record_arrival(_result(vnr_id, accepted), float(vnr_id))

        assert metrics.acceptance_rate(acc) == 0.6
        assert acc.total_count == 5
        assert acc.accepted_count == 3

    def test_acceptance_rate_without_arrivals(self):
        assert metrics.acceptance_rate(metrics.MetricsAccumulator(10)) is None

    def test_link_utilization(self):
        acc = metrics.MetricsAccumulator(40)
        acc.record_arrival(_result(0, links=[(0, 1), (1, 2), (2, 3)]), 0.0)
        acc.record_arrival(_result(1, links=[(2, 3), (3, 4)]), 1.0)

        assert metrics.link_utilization(acc) == 0.1

    def test_link_utilization_after_departure(self):
        acc = metrics.MetricsAccumulator(40)
        first = _result(0, links=[(0, 1), (1, 2)])
        second = _result(1, links=[(1, 2)])
        acc.record_arrival(first, 0.0)
        acc.record_arrival(second, 1.0)

        acc.record_departure(first)
        assert acc.mapped_link_ids == frozenset([(1, 2)])

        acc.record_departure(second)
        assert metrics.link_utilization(acc) == 0.0

    def test_link_utilization_without_links(self):
        assert metrics.link_utilization(metrics.MetricsAccumulator(0)) is None

    def test_rejections_add_no_samples(self):
        acc = metrics.MetricsAccumulator(10)
        acc.record_arrival(_result(0, accepted=False, cost=5.0, links=[(0, 1)]), 0.0)

        assert acc.cost_samples == []
        assert acc.mapped_link_ids == frozenset()
        with pytest.raises(exceptions.NoSamples):
            metrics.average_cost(acc)

    def test_averages(self):
        acc = metrics.MetricsAccumulator(10)
        acc.record_arrival(_result(0, cost=10.0, delay=7.0), 0.0)
        acc.record_arrival(_result(1, cost=20.0, delay=0.0), 1.0)

        assert metrics.average_cost(acc) == 15.0
        assert metrics.average_embedding_delay(acc) == 3.5

    def test_average_selected_bandwidth(self):
        acc = metrics.MetricsAccumulator(10)
        acc.record_arrival(
            _result(0, selections=[_selection(0, 10.0), _selection(0, 10.0)]), 0.0
        )
        acc.record_arrival(_result(1, selections=[_selection(1, 4.0)]), 1.0)

        assert metrics.average_selected_bandwidth(acc, domain=0) == 10.0
        assert metrics.average_selected_bandwidth(acc) == 8.0
        with pytest.raises(exceptions.NoSamples):
            metrics.average_selected_bandwidth(acc, domain=3)

    def test_threshold_audit(self):
        acc = metrics.MetricsAccumulator(10)
        acc.record_arrival(
            _result(0, selections=[_selection(0, 10.0, 9.0), _selection(0, 7.0, 9.0)]),
            0.0,
        )

        assert acc.threshold_checks == 2
        assert [s.bandwidth for s in acc.threshold_failures] == [7.0]

    def test_streaming_matches_batch(self):
        outcomes = [True, True, False, True, False, False, True]
        acc = metrics.MetricsAccumulator(10)
        for vnr_id, accepted in enumerate(outcomes):
            acc.record_arrival(_result(vnr_id, accepted), float(vnr_id))

        assert metrics.acceptance_rate(acc) == sum(outcomes) / len(outcomes)

    def test_utilization_series(self):
        acc = metrics.MetricsAccumulator(4)
        acc.sample_utilization(0.0)
        acc.record_arrival(_result(0, links=[(0, 1), (1, 2)]), 1.0)
        acc.sample_utilization(1.0)

        assert acc.utilization_samples == [(0.0, 0.0), (1.0, 0.5)]
        assert metrics.average_utilization(acc) == 0.25
        assert metrics.average_utilization(metrics.MetricsAccumulator(4)) == 0.0


def test_windowed_acceptance():
    acc = metrics.MetricsAccumulator(10)
    for vnr_id, (time, accepted) in enumerate(
        [(0.5, True), (1.0, False), (2.5, True), (2.9, True)]
    ):
        acc.record_arrival(_result(vnr_id, accepted), time)

    windows = metrics.windowed_acceptance(acc, window=1.0, horizon=4.0)

    assert windows == [(0.0, 1.0), (1.0, 0.0), (2.0, 1.0), (3.0, None)]
    assert metrics.windowed_acceptance(acc, window=1.0, horizon=0.0) == []


def test_or_undefined():
    acc = metrics.MetricsAccumulator(10)

    assert metrics.or_undefined(metrics.average_cost, acc) == metrics.UNDEFINED
    assert metrics.or_undefined(metrics.acceptance_rate, acc) == "undefined"
    assert metrics.or_undefined(lambda: 0.0) == 0.0
