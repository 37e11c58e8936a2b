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

"""Discrete particle swarm pre-mapping.

A particle's position assigns every virtual node one candidate node. Its
velocity holds, per virtual node, the probability of adopting the personal
best entry and the probability of adopting the global best entry. Each
update accumulates ``c1 * r1`` and ``c2 * r2`` where the best differs from
the current entry and clips to ``[0, 1]``; positions then adopt best
entries with those probabilities, mutate with ``mutation_rate`` and are
repaired back to a one-to-one placement.

Every particle owns a random stream spawned from ``PsoParams.seed``, so a
run is reproducible whatever order particles are evaluated in.
"""

import logging
import math

import cachetools
import networkx as nx
import numpy as np

from bavne import _helpers
from bavne import exceptions

_LOGGER = logging.getLogger(__name__)

_FITNESS_CACHE_SIZE = 4096


class PsoParams(object):
    """Swarm parameters.

    Args:
        swarm_size (int): Number of particles.
        max_iterations (int): Number of swarm iterations.
        c1 (float): Cognitive learning factor.
        c2 (float): Social learning factor.
        mutation_rate (float): Per-entry probability of a uniform
            reassignment after each position update.
        seed (int): Root of the particle random streams.
        max_repair_attempts (int): Resamples allowed per entry when
            repairing a collision.

    Raises:
        bavne.exceptions.ConfigError: If a field is out of range.
    """

    FIELDS = (
        "swarm_size",
        "max_iterations",
        "c1",
        "c2",
        "mutation_rate",
        "seed",
        "max_repair_attempts",
    )

    def __init__(
        self,
        swarm_size=20,
        max_iterations=50,
        c1=1.5,
        c2=1.5,
        mutation_rate=0.05,
        seed=0,
        max_repair_attempts=20,
    ):
        self.swarm_size = _helpers.as_count(swarm_size, "swarm_size")
        self.max_iterations = _helpers.as_count(
            max_iterations, "max_iterations", minimum=0
        )
        self.c1 = _helpers.as_number(c1, "c1", minimum=0.0)
        self.c2 = _helpers.as_number(c2, "c2", minimum=0.0)
        self.mutation_rate = _helpers.as_probability(mutation_rate, "mutation_rate")
        self.seed = _helpers.as_count(seed, "seed", minimum=0)
        self.max_repair_attempts = _helpers.as_count(
            max_repair_attempts, "max_repair_attempts", minimum=0
        )

    @classmethod
    def from_dict(cls, data):
        _helpers.check_keys(data, cls.FIELDS, "pso")
        return cls(**data)

    def to_dict(self):
        return {name: getattr(self, name) for name in self.FIELDS}

    def replace(self, **changes):
        """Returns a copy with some fields changed."""
        data = self.to_dict()
        data.update(changes)
        return PsoParams(**data)


def as_assignment(vnr, position):
    """Returns a position as a virtual to candidate node map."""
    if isinstance(position, dict):
        return position
    return {vnode.id: choice for vnode, choice in zip(vnr.nodes, position)}


def fitness(position, gcn, vnr):
    """Estimates the cost of a placement on the global candidate network.

    The node term prices each virtual node's CPU demand at its candidate's
    unit price. Each virtual link adds its bandwidth demand times the unit
    price of the cheapest route in ``gcn`` that can carry it.

    Args:
        position (Union[Sequence[int], Mapping[int, int]]): Candidate ids in
            ``vnr.nodes`` order, or a virtual to candidate map.
        gcn (bavne.abstraction.GlobalCandidateNetwork): The global view.
        vnr (bavne.topology.VirtualNetworkRequest): The request.

    Returns:
        float: The estimated cost, ``math.inf`` if some virtual link cannot
            be routed.
    """
    placement = as_assignment(vnr, position)
    terms = [
        vnode.cpu_demand * gcn.candidate(placement[vnode.id]).cpu_unit_price
        for vnode in vnr.nodes
    ]
    for link in vnr.links:
        u, v = link.key
        route = gcn.estimate_route(placement[u], placement[v], link.bw_demand)
        if route is None:
            return math.inf
        terms.append(link.bw_demand * route.unit_price)
    return math.fsum(terms)


class Particle(object):
    """One particle of the swarm.

    Args:
        choices (Sequence[Tuple[int]]): Feasible candidate ids per virtual
            node.
        position (Tuple[int]): The current placement.
        velocity (numpy.ndarray): ``(nodes, 2)`` adoption probabilities,
            personal best column first.
        rng (numpy.random.Generator): The particle's random stream.
    """

    def __init__(self, choices, position, velocity, rng):
        self.choices = choices
        self.position = position
        self.velocity = velocity
        self.rng = rng
        self.fitness = math.inf
        self.best_position = position
        self.best_fitness = math.inf


class Swarm(object):
    """The particles and the global best they have found.

    Args:
        gcn (bavne.abstraction.GlobalCandidateNetwork): The global view.
        vnr (bavne.topology.VirtualNetworkRequest): The request.
        fitness_fn (Callable): ``fitness_fn(position, gcn, vnr)``.
    """

    def __init__(self, gcn, vnr, fitness_fn=fitness):
        self.gcn = gcn
        self.vnr = vnr
        self.particles = []
        self.best_position = None
        self.best_fitness = math.inf
        self.iteration = 0
        self.trace = []
        self._fitness_fn = fitness_fn
        self._cache = cachetools.LRUCache(maxsize=_FITNESS_CACHE_SIZE)

    def evaluate(self, position):
        """Returns the fitness of a position, memoized."""
        try:
            return self._cache[position]
        except KeyError:
            value = self._fitness_fn(position, self.gcn, self.vnr)
            self._cache[position] = value
            return value

    def offer(self, particle):
        """Moves the global best to the particle's best if strictly better."""
        if self.best_position is None or particle.best_fitness < self.best_fitness:
            self.best_position = particle.best_position
            self.best_fitness = particle.best_fitness


def _repair(position, choices, rng, max_attempts):
    """Resamples colliding entries. Returns ``None`` when a collision
    survives ``max_attempts`` resamples."""
    repaired = []
    used = set()
    for index, choice in enumerate(position):
        options = choices[index]
        attempts = 0
        while choice in used:
            if attempts == max_attempts:
                return None
            choice = options[int(rng.integers(len(options)))]
            attempts += 1
        repaired.append(choice)
        used.add(choice)
    return tuple(repaired)


def _anchor_position(vnr, choices):
    """Returns one one-to-one placement found by bipartite matching.

    Raises:
        bavne.exceptions.NoFeasibleCandidate: If no one-to-one placement
            exists.
    """
    graph = nx.Graph()
    top = [("v", vnode.id) for vnode in vnr.nodes]
    graph.add_nodes_from(top)
    for vnode, options in zip(vnr.nodes, choices):
        graph.add_edges_from((("v", vnode.id), ("s", option)) for option in options)
    matching = nx.bipartite.maximum_matching(graph, top_nodes=top)
    for vnode in vnr.nodes:
        if ("v", vnode.id) not in matching:
            raise exceptions.NoFeasibleCandidate(
                vnode.id,
                "virtual node {0} cannot get a substrate node of its own".format(
                    vnode.id
                ),
            )
    return tuple(matching[("v", vnode.id)][1] for vnode in vnr.nodes)


def init_swarm(gcn, vnr, params, fitness_fn=fitness):
    """Creates the initial swarm.

    Positions are drawn uniformly from each virtual node's CPU-feasible
    candidates in its candidate domains, then repaired to be one-to-one.
    A particle whose repair fails starts from a placement found by bipartite
    matching.

    Args:
        gcn (bavne.abstraction.GlobalCandidateNetwork): The global view.
        vnr (bavne.topology.VirtualNetworkRequest): The request.
        params (PsoParams): Swarm parameters.
        fitness_fn (Callable): The fitness to minimize.

    Returns:
        Swarm: The swarm with fitness, personal and global bests set.

    Raises:
        bavne.exceptions.NoFeasibleCandidate: If a virtual node has no
            feasible candidate, or no one-to-one placement exists.
    """
    choices = []
    for vnode in vnr.nodes:
        options = tuple(candidate.id for candidate in gcn.feasible_candidates(vnode))
        if not options:
            raise exceptions.NoFeasibleCandidate(vnode.id)
        choices.append(options)
    choices = tuple(choices)
    anchor = _anchor_position(vnr, choices)

    swarm = Swarm(gcn, vnr, fitness_fn)
    for stream in np.random.SeedSequence(params.seed).spawn(params.swarm_size):
        rng = np.random.default_rng(stream)
        drawn = tuple(options[int(rng.integers(len(options)))] for options in choices)
        position = _repair(drawn, choices, rng, params.max_repair_attempts)
        if position is None:
            position = anchor
        particle = Particle(choices, position, rng.random((len(choices), 2)), rng)
        particle.fitness = swarm.evaluate(position)
        particle.best_fitness = particle.fitness
        swarm.particles.append(particle)
        swarm.offer(particle)
    swarm.trace.append(swarm.best_fitness)
    return swarm


def _differs(best, current):
    return np.array([a != b for a, b in zip(best, current)], dtype=float)


def update_velocity(particle, global_best, params, rng=None):
    """Accumulates the velocity toward the personal and global bests.

    Args:
        particle (Particle): The particle, updated in place.
        global_best (Tuple[int]): The swarm's best position.
        params (PsoParams): Supplies ``c1`` and ``c2``.
        rng (Optional[numpy.random.Generator]): Draws ``r1`` and ``r2``.
            Defaults to the particle's stream.

    Returns:
        numpy.ndarray: The new velocity.
    """
    rng = particle.rng if rng is None else rng
    r1 = rng.random()
    r2 = rng.random()
    toward_personal = _differs(particle.best_position, particle.position)
    toward_global = _differs(global_best, particle.position)
    velocity = np.array(particle.velocity, dtype=float)
    velocity[:, 0] += params.c1 * r1 * toward_personal
    velocity[:, 1] += params.c2 * r2 * toward_global
    particle.velocity = np.clip(velocity, 0.0, 1.0)
    return particle.velocity


def update_position(particle, global_best, params, rng=None):
    """Moves a particle.

    Each entry adopts the personal best entry with the first velocity
    column's probability, then the global best entry with the second
    column's probability, then is resampled uniformly with
    ``mutation_rate``. Collisions are repaired; if repair fails the particle
    keeps its previous position.

    Args:
        particle (Particle): The particle, updated in place.
        global_best (Tuple[int]): The swarm's best position.
        params (PsoParams): Supplies ``mutation_rate`` and
            ``max_repair_attempts``.
        rng (Optional[numpy.random.Generator]): Defaults to the particle's
            stream.

    Returns:
        Tuple[int]: The new position.
    """
    rng = particle.rng if rng is None else rng
    proposal = list(particle.position)
    for index, options in enumerate(particle.choices):
        personal_draw, global_draw, mutation_draw = rng.random(3)
        if personal_draw < particle.velocity[index, 0]:
            proposal[index] = particle.best_position[index]
        if global_draw < particle.velocity[index, 1]:
            proposal[index] = global_best[index]
        if mutation_draw < params.mutation_rate:
            proposal[index] = options[int(rng.integers(len(options)))]
    position = _repair(proposal, particle.choices, rng, params.max_repair_attempts)
    if position is None:
        _LOGGER.debug("Repair exhausted, particle keeps %s", particle.position)
        position = particle.position
    particle.position = position
    return position


class PremappingResult(object):
    """The outcome of :func:`run_premapping`.

    Attributes:
        assignment (Mapping[int, int]): Virtual node id to substrate node id.
        fitness (float): The fitness of the assignment.
        trace (List[float]): Global best fitness after initialization and
            after every iteration.
    """

    def __init__(self, assignment, fitness, trace):
        self.assignment = assignment
        self.fitness = fitness
        self.trace = trace


def run_premapping(gcn, vnr, params, fitness_fn=fitness):
    """Runs the swarm and returns the best placement found.

    Each iteration visits the particles in order: update the position,
    update the velocity, evaluate, refresh the personal best on strict
    improvement, then refresh the global best from the personal best.

    Args:
        gcn (bavne.abstraction.GlobalCandidateNetwork): The global view.
        vnr (bavne.topology.VirtualNetworkRequest): The request.
        params (PsoParams): Swarm parameters.
        fitness_fn (Callable): The fitness to minimize.

    Returns:
        PremappingResult: The global best.

    Raises:
        bavne.exceptions.NoFeasibleCandidate: See :func:`init_swarm`.
        bavne.exceptions.PremappingFailed: If no particle found a placement
            with a finite fitness.
    """
    swarm = init_swarm(gcn, vnr, params, fitness_fn)
    for _ in range(params.max_iterations):
        for particle in swarm.particles:
            update_position(particle, swarm.best_position, params)
            update_velocity(particle, swarm.best_position, params)
            particle.fitness = swarm.evaluate(particle.position)
            if particle.fitness < particle.best_fitness:
                particle.best_position = particle.position
                particle.best_fitness = particle.fitness
            swarm.offer(particle)
        swarm.iteration += 1
        swarm.trace.append(swarm.best_fitness)

    if math.isinf(swarm.best_fitness):
        raise exceptions.PremappingFailed(
            "no placement of VNR {0} has a routable estimate".format(vnr.id)
        )
    _LOGGER.debug(
        "VNR %s premapped with fitness %s after %s iterations",
        vnr.id,
        swarm.best_fitness,
        swarm.iteration,
    )
    return PremappingResult(
        as_assignment(vnr, swarm.best_position), swarm.best_fitness, swarm.trace
    )
