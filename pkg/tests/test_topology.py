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


import math

import mock
import networkx as nx
import numpy as np
import pytest

from bavne import exceptions
from bavne import topology
from tests.conftest import make_vnr


def _usage(vnr_id, nodes=None, links=None):
    result = mock.Mock(vnr_id=vnr_id, spec=["vnr_id", "resource_usage"])
    result.resource_usage.return_value = (dict(nodes or {}), dict(links or {}))
    return result


def assert_uniform_mean(values, low, high):
    """Checks a continuous U[low, high] sample mean to three standard errors."""
    values = np.asarray(values, dtype=float)
    error = (high - low) / math.sqrt(12) / math.sqrt(values.size)
    assert abs(values.mean() - (low + high) / 2.0) < 3 * error


def assert_tier_mean(values, low, high):
    """Checks a discrete uniform sample over low..high to three standard errors."""
    values = np.asarray(values, dtype=float)
    count = high - low + 1
    error = math.sqrt((count * count - 1) / 12.0) / math.sqrt(values.size)
    assert abs(values.mean() - (low + high) / 2.0) < 3 * error


@pytest.fixture
def line(build_network):
    return build_network(
        [(0, 0, 100, 1, True), (1, 0, 100, 2, False), (2, 0, 100, 3, False)],
        [(0, 1, 50, 1), (1, 2, 30, 1)],
    )


def test_link_key_is_symmetric():
    assert topology.link_key(3, 1) == topology.link_key(1, 3) == (1, 3)
    assert topology.format_link((1, 3)) == "1-3"


class TestSubstrateNetwork(object):
    def test_scene(self, scene):
        assert [node.id for node in scene.boundary_nodes(0)] == [1]
        assert [link.key for link in scene.domain_links(1)] == [(5, 6), (5, 7), (6, 7)]
        assert [link.key for link in scene.inter_domain_links()] == [(1, 5)]
        assert scene.link(5, 1).kind == topology.INTER_DOMAIN
        assert scene.link(3, 2).kind == topology.INTRA_DOMAIN
        assert scene.neighbors(1) == [2, 3, 5]
        assert scene.is_pristine()

    def test_inter_domain_link_needs_boundary_nodes(self, build_network):
        network = build_network([(0, 0, 1, 1, True), (1, 1, 1, 1, False)], [])

        with pytest.raises(exceptions.ConfigError):
            network.add_link(topology.SubstrateLink(0, 1, 10, 1, 1))

    def test_rejects_duplicates(self, line):
        with pytest.raises(exceptions.ConfigError):
            line.add_node(topology.SubstrateNode(0, 0, 1, 1))
        with pytest.raises(exceptions.ConfigError):
            line.add_link(topology.SubstrateLink(1, 0, 1, 1, 1))

    @pytest.mark.parametrize(
        "args",
        [(0, 0, -1, 1), (0, 0, 1, 0)],
    )
    def test_invalid_node(self, args):
        with pytest.raises(exceptions.ConfigError):
            topology.SubstrateNode(*args)

    @pytest.mark.parametrize(
        "args",
        [(0, 0, 1, 1, 1), (0, 1, -1, 1, 1), (0, 1, 1, 0, 1), (0, 1, 1, 1, -1)],
    )
    def test_invalid_link(self, args):
        with pytest.raises(exceptions.ConfigError):
            topology.SubstrateLink(*args)

    def test_allocate_node(self, line):
        line.allocate(_usage(1, nodes={0: 10}))

        assert line.node(0).cpu_residual == 90
        assert line.is_allocated(1)
        assert line.active_ids == [1]

    def test_allocate_path(self, line):
        line.allocate(_usage(1, links={(0, 1): 30, (1, 2): 30}))

        assert line.link(0, 1).bw_residual == 20
        assert line.link(1, 2).bw_residual == 0

    def test_allocate_insufficient_is_atomic(self, line):
        before = line.ledger_digest()

        with pytest.raises(exceptions.InsufficientResources) as excinfo:
            line.allocate(_usage(1, nodes={0: 10}, links={(0, 1): 31, (1, 2): 31}))

        assert excinfo.value.required == 31
        assert excinfo.value.available == 30
        assert line.ledger_digest() == before
        assert not line.is_allocated(1)

    def test_allocate_duplicate(self, line):
        line.allocate(_usage(1, nodes={0: 10}))

        with pytest.raises(exceptions.DuplicateAllocation):
            line.allocate(_usage(1, nodes={1: 10}))

    def test_release_restores_residuals(self, line):
        before = line.residual_state()
        result = _usage(1, nodes={0: 10.3, 2: 0.7}, links={(1, 2): 29.99})

        line.allocate(result)
        line.release(result)

        assert line.residual_state() == before
        assert line.is_pristine()

    def test_release_by_id(self, line):
        line.allocate(_usage(4, nodes={0: 10}))

        topology.release(line, 4)

        assert line.node(0).cpu_residual == 100

    def test_double_release(self, line):
        result = _usage(1, nodes={0: 10})
        topology.allocate(line, result)
        topology.release(line, result)

        with pytest.raises(exceptions.DoubleRelease):
            line.release(result)

    @pytest.mark.parametrize("seed", range(10))
    def test_interleaved_allocations_conserve_resources(self, line, seed):
        rng = np.random.default_rng(seed)
        before = line.residual_state()
        results = [
            _usage(
                vnr_id,
                nodes={int(rng.integers(3)): float(rng.uniform(0.1, 9))},
                links={
                    (0, 1): float(rng.uniform(0.1, 4)),
                    (1, 2): float(rng.uniform(0.1, 2)),
                },
            )
            for vnr_id in range(10)
        ]
        for result in results:
            line.allocate(result)
        for index in rng.permutation(len(results)):
            line.release(results[int(index)])

        assert line.residual_state() == before

    def test_summary(self, scene):
        assert scene.summary() == {
            "domains": 2,
            "nodes": 6,
            "links": 7,
            "mean_bw": 9.0,
        }

    def test_dict_form(self, scene):
        restored = topology.SubstrateNetwork.from_dict(scene.to_dict())

        assert restored.to_dict() == scene.to_dict()

    def test_from_dict_missing_fields(self):
        with pytest.raises(exceptions.ConfigError):
            topology.SubstrateNetwork.from_dict({"domains": 1, "nodes": [{"id": 0}]})


class TestVirtualNetworkRequest(object):
    def test_subgraphs(self):
        vnr = make_vnr(
            [(0, 1, [0]), (1, 1, [0]), (2, 1, [0])], [(0, 1, 5), (2, 1, 3)]
        )

        subgraphs = vnr.subgraphs()

        assert [link.key for link in subgraphs[0]] == [(0, 1)]
        assert [link.key for link in subgraphs[1]] == [(0, 1), (1, 2)]
        assert [link.key for link in subgraphs[2]] == [(1, 2)]

    def test_disconnected(self):
        with pytest.raises(exceptions.ConfigError):
            make_vnr([(0, 1, [0]), (1, 1, [0])])

    def test_unknown_endpoint(self):
        with pytest.raises(exceptions.ConfigError):
            make_vnr([(0, 1, [0])], [(0, 5, 1)])

    def test_invalid_demands(self):
        with pytest.raises(exceptions.ConfigError):
            topology.VirtualNode(0, 0, [0])
        with pytest.raises(exceptions.ConfigError):
            topology.VirtualNode(0, 1, [])
        with pytest.raises(exceptions.ConfigError):
            topology.VirtualLink(0, 1, 0)

    def test_departure_time(self):
        vnr = make_vnr([(0, 1, [0])], arrival_time=2.5, lifetime=4.0)

        assert vnr.departure_time == 6.5

    def test_dict_form(self):
        vnr = make_vnr([(0, 1.5, [1, 0]), (1, 2, [1])], [(1, 0, 4.5)], vnr_id=3)

        restored = topology.VirtualNetworkRequest.from_dict(vnr.to_dict())

        assert restored.to_dict() == vnr.to_dict()
        assert restored.node(0).candidate_domains == (0, 1)


class TestGeneratorConfig(object):
    def test_defaults(self):
        config = topology.GeneratorConfig()

        assert config.domain_count == 4
        assert config.nodes_per_domain == 30
        assert config.boundary_per_domain == 2
        assert config.cpu_range == (100.0, 300.0)
        assert config.bw_range == (1000.0, 3000.0)

    def test_from_dict(self):
        config = topology.GeneratorConfig.from_dict({"domain_count": 2})

        assert config.domain_count == 2
        assert topology.GeneratorConfig.from_dict(config.to_dict()).to_dict() == (
            config.to_dict()
        )

    @pytest.mark.parametrize(
        "data",
        [
            {"colour": "red"},
            {"link_probability": 1.5},
            {"domain_count": 0},
            {"nodes_per_domain": 2.5},
            {"cpu_price_range": [1.5, 3]},
            {"bw_range": [3000, 1000]},
            {"domain_count": "4"},
            {"link_probability": "high"},
            {"link_probability": True},
            {"nodes_per_domain": 3, "boundary_per_domain": 4},
        ],
    )
    def test_invalid(self, data):
        with pytest.raises(exceptions.ConfigError):
            topology.GeneratorConfig.from_dict(data)


class TestGenerateSubstrate(object):
    def test_default_size(self):
        network = topology.generate_substrate(topology.GeneratorConfig(), seed=0)

        assert network.domains == 4
        assert len(network.nodes) == 120
        assert sum(len(network.boundary_nodes(d)) for d in range(4)) == 8

    def test_domains_are_connected(self):
        network = topology.generate_substrate(topology.GeneratorConfig(), seed=1)

        for domain in range(network.domains):
            assert nx.is_connected(network.domain_graph(domain))
            assert len(network.boundary_nodes(domain)) == 2

    def test_every_domain_pair_is_linked(self):
        network = topology.generate_substrate(topology.GeneratorConfig(), seed=2)
        pairs = set()

        for link in network.inter_domain_links():
            u, v = (network.node(node_id) for node_id in link.key)
            assert u.is_boundary and v.is_boundary
            assert u.domain != v.domain
            pairs.add(frozenset((u.domain, v.domain)))

        assert len(pairs) == 6

    def test_deterministic(self):
        config = topology.GeneratorConfig(domain_count=2, nodes_per_domain=8)

        first = topology.generate_substrate(config, seed=11).to_dict()
        second = topology.generate_substrate(config, seed=11).to_dict()
        other = topology.generate_substrate(config, seed=12).to_dict()

        assert first == second
        assert first != other

    def test_single_node(self):
        config = topology.GeneratorConfig(
            domain_count=1, nodes_per_domain=1, boundary_per_domain=1
        )

        network = topology.generate_substrate(config, seed=0)

        assert len(network.nodes) == 1
        assert network.links == []
        assert network.nodes[0].is_boundary

    def test_gives_up(self):
        config = topology.GeneratorConfig(
            domain_count=1, nodes_per_domain=3, link_probability=0.0, max_attempts=5
        )

        with pytest.raises(exceptions.TopologyGenerationError) as excinfo:
            topology.generate_substrate(config, seed=0)

        assert excinfo.value.attempts == 5

    def test_distributions(self):
        config = topology.GeneratorConfig()
        networks = [topology.generate_substrate(config, seed) for seed in range(5)]
        nodes = [node for network in networks for node in network.nodes]
        intra = [
            link
            for network in networks
            for link in network.links
            if link.kind == topology.INTRA_DOMAIN
        ]

        assert_uniform_mean([node.cpu_capacity for node in nodes], 100, 300)
        assert_uniform_mean([link.bw_capacity for link in intra], 1000, 3000)
        assert_uniform_mean([link.delay for link in intra], 1, 10)
        assert_tier_mean([node.cpu_unit_price for node in nodes], 1, 10)
        assert_tier_mean([link.bw_unit_price for link in intra], 1, 10)
        assert min(node.cpu_capacity for node in nodes) >= 100
        assert max(node.cpu_capacity for node in nodes) <= 300
        assert all(1 <= node.cpu_unit_price <= 10 for node in nodes)
        assert all(isinstance(link.bw_unit_price, int) for link in intra)

    def test_domain_mean_bandwidth(self):
        config = topology.GeneratorConfig()
        means = []
        for seed in range(30):
            network = topology.generate_substrate(config, seed)
            for domain in range(network.domains):
                links = network.domain_links(domain)
                means.append(sum(link.bw_capacity for link in links) / len(links))

        assert 1900 <= np.mean(means) <= 2100

    def test_inter_domain_distributions(self):
        config = topology.GeneratorConfig()
        inter = [
            link
            for seed in range(20)
            for link in topology.generate_substrate(config, seed).inter_domain_links()
        ]

        assert_uniform_mean([link.bw_capacity for link in inter], 1000, 3000)
        assert_uniform_mean([link.delay for link in inter], 10, 30)
        assert_tier_mean([link.bw_unit_price for link in inter], 5, 15)
        assert all(5 <= link.bw_unit_price <= 15 for link in inter)


class TestGenerateVnr(object):
    def test_shape(self):
        config = topology.VnrConfig(node_count=6)

        vnr = topology.generate_vnr(config, seed=3, arrival_time=1.5, vnr_id=9)

        assert vnr.id == 9
        assert vnr.arrival_time == 1.5
        assert vnr.lifetime > 0
        assert len(vnr.nodes) == 6
        for vnode in vnr.nodes:
            assert 1 <= vnode.cpu_demand <= 10
            assert len(vnode.candidate_domains) == 2
            assert all(0 <= domain < 4 for domain in vnode.candidate_domains)
        for link in vnr.links:
            assert 1 <= link.bw_demand <= 10

    def test_single_node(self):
        vnr = topology.generate_vnr(topology.VnrConfig(node_count=1), seed=0)

        assert len(vnr.nodes) == 1
        assert vnr.links == []

    def test_deterministic(self):
        config = topology.VnrConfig()

        first = topology.generate_vnr(config, seed=5).to_dict()

        assert topology.generate_vnr(config, seed=5).to_dict() == first

    def test_too_many_candidate_domains(self):
        config = topology.VnrConfig(candidate_domain_count=3)

        with pytest.raises(exceptions.ConfigError):
            topology.generate_vnr(config, seed=0, domain_count=2)

    def test_mean_lifetime(self):
        config = topology.VnrConfig(node_count=1, mean_lifetime=500.0)

        lifetimes = np.array(
            [topology.generate_vnr(config, seed).lifetime for seed in range(400)]
        )

        # Exponential: standard deviation equals the mean.
        assert abs(lifetimes.mean() - 500.0) < 3 * 500.0 / math.sqrt(lifetimes.size)

    def test_demand_distributions(self):
        config = topology.VnrConfig()
        vnrs = [topology.generate_vnr(config, seed) for seed in range(300)]

        assert_uniform_mean(
            [vnode.cpu_demand for vnr in vnrs for vnode in vnr.nodes], 1, 10
        )
        assert_uniform_mean(
            [vlink.bw_demand for vnr in vnrs for vlink in vnr.links], 1, 10
        )

    @pytest.mark.parametrize(
        "data",
        [
            {"node_count": "4"},
            {"mean_lifetime": "long"},
            {"mean_lifetime": 0},
            {"link_probability": -0.1},
            {"cpu_demand_range": "wide"},
            {"colour": "red"},
        ],
    )
    def test_invalid_config(self, data):
        with pytest.raises(exceptions.ConfigError):
            topology.VnrConfig.from_dict(data)
