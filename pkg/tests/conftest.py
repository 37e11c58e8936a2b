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


import json
import os

import pytest

from bavne import topology


def pytest_configure():
    """Load the shared scene fixtures."""
    pytest.data_dir = os.path.join(os.path.dirname(__file__), "data")

    with open(os.path.join(pytest.data_dir, "two_domain_scene.json"), "r") as fh:
        pytest.two_domain_scene = json.load(fh)

    pytest.toy_config_file = os.path.join(pytest.data_dir, "toy_config.json")


@pytest.fixture
def build_network():
    """Builds a substrate from plain tuples.

    Nodes are ``(id, domain, cpu, price, is_boundary)`` and links are
    ``(u, v, bw, price, delay)``; delay defaults to 1.
    """

    def _build_network(nodes, links, domains=None):
        if domains is None:
            domains = max(node[1] for node in nodes) + 1
        network = topology.SubstrateNetwork(domains)
        for node_id, domain, cpu, price, is_boundary in nodes:
            network.add_node(
                topology.SubstrateNode(
                    node_id, domain, cpu, price, is_boundary=is_boundary
                )
            )
        for link in links:
            u, v, bw, price = link[:4]
            delay = link[4] if len(link) > 4 else 1
            network.add_link(topology.SubstrateLink(u, v, bw, price, delay))
        return network

    return _build_network


@pytest.fixture
def scene():
    """Two domains joined by one inter-domain link.

    Domain 0 holds boundary node 1 and interior nodes 2 and 3, linked
    1-2 (bw 10), 2-3 (bw 10) and 1-3 (bw 7), so the domain threshold is 9
    and 1-3 does not qualify. Domain 1 mirrors it with nodes 5, 6 and 7.
    The inter-domain link 1-5 carries 20.
    """
    return topology.SubstrateNetwork.from_dict(pytest.two_domain_scene)


@pytest.fixture
def toy_network():
    config = topology.GeneratorConfig(
        domain_count=2, nodes_per_domain=5, boundary_per_domain=2
    )
    return topology.generate_substrate(config, seed=7)


def make_vnr(nodes, links=(), vnr_id=0, arrival_time=0.0, lifetime=10.0):
    """Builds a request from ``(id, cpu, domains)`` and ``(u, v, bw)``
    tuples."""
    return topology.VirtualNetworkRequest(
        vnr_id,
        [topology.VirtualNode(*node) for node in nodes],
        [topology.VirtualLink(*link) for link in links],
        arrival_time=arrival_time,
        lifetime=lifetime,
    )


@pytest.fixture
def vnr_factory():
    return make_vnr
