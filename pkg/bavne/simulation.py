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

"""Discrete-event simulation of VNR arrivals and departures.

VNRs arrive as a Poisson process until the horizon. Each arrival is
embedded with the configured algorithm; an accepted VNR schedules its
departure after its lifetime, which releases its resources. The event queue
is drained completely, so every run ends with an empty ledger.

All randomness derives from ``SimulationConfig.seed`` through independent
streams: the substrate, the arrival times, each VNR and each VNR's swarm.
Two algorithms run with the same seed therefore see the same substrate and
the same requests at the same times.
"""

import collections.abc
import concurrent.futures
import heapq
import json
import logging
import math
import numbers
import os

import numpy as np

from bavne import _helpers
from bavne import baselines
from bavne import embedding
from bavne import environment_vars
from bavne import exceptions
from bavne import metrics
from bavne import pso
from bavne import topology

_LOGGER = logging.getLogger(__name__)

# SimulationConfig arguments shadow these module names.
_PsoParams = pso.PsoParams
_EmbeddingOptions = embedding.EmbeddingOptions

STREAM_SUBSTRATE = 0
STREAM_ARRIVALS = 1
STREAM_VNR = 2
STREAM_PSO = 3

ARRIVAL = "arrival"
DEPARTURE = "departure"

INDICES = (
    "acceptance_rate",
    "average_cost",
    "average_delay",
    "link_utilization",
    "average_selected_bandwidth",
)
"""Tuple[str]: The five indices of every report, in output order."""


def _as_list(value, name):
    if isinstance(value, (str, dict)) or not isinstance(
        value, collections.abc.Iterable
    ):
        raise exceptions.ConfigError(
            "{0} must be a list, got {1!r}".format(name, value)
        )
    return list(value)


class SweepConfig(object):
    """A parameter grid run for several algorithms and seeds.

    Args:
        parameter (str): Dotted path of the swept field, e.g.
            ``"vnr.node_count"``.
        values (Sequence): The grid values.
        algorithms (Sequence[str]): Algorithm names.
        seeds (Sequence[int]): Root seeds; every algorithm runs every seed.

    Raises:
        bavne.exceptions.ConfigError: If the grid is empty or an algorithm
            is unknown.
    """

    FIELDS = ("parameter", "values", "algorithms", "seeds")

    def __init__(
        self,
        parameter="vnr.node_count",
        values=(2, 4, 6, 8, 10, 12),
        algorithms=baselines.ALGORITHMS,
        seeds=tuple(range(10)),
    ):
        if not isinstance(parameter, str):
            raise exceptions.ConfigError(
                "parameter must be a dotted field path, got {0!r}".format(parameter)
            )
        self.parameter = parameter
        self.values = _as_list(values, "values")
        self.algorithms = _as_list(algorithms, "algorithms")
        self.seeds = [
            _helpers.as_count(seed, "seeds", minimum=0)
            for seed in _as_list(seeds, "seeds")
        ]
        if not self.values or not self.algorithms or not self.seeds:
            raise exceptions.ConfigError("A sweep needs values, algorithms and seeds.")
        for name in self.algorithms:
            baselines.get_strategy(name)

    @classmethod
    def from_dict(cls, data):
        _helpers.check_keys(data, cls.FIELDS, "sweep")
        return cls(**data)

    def to_dict(self):
        return {
            "parameter": self.parameter,
            "values": list(self.values),
            "algorithms": list(self.algorithms),
            "seeds": list(self.seeds),
        }


class SimulationConfig(object):
    """Everything one simulation run depends on.

    Args:
        generator (Optional[bavne.topology.GeneratorConfig]): Substrate
            parameters.
        vnr (Optional[bavne.topology.VnrConfig]): Request parameters.
        pso (Optional[bavne.pso.PsoParams]): Swarm parameters.
        embedding (Optional[bavne.embedding.EmbeddingOptions]): Shared
            embedding knobs.
        arrival_rate (float): Mean arrivals per time unit.
        horizon (float): End of the arrival period.
        algorithm (str): Algorithm name.
        seed (int): Root seed.
        window (float): Window of the windowed acceptance series.
        sweep (Optional[SweepConfig]): Grid for ``bavne sweep``.
        max_workers (int): Processes used by :func:`sweep`.

    Raises:
        bavne.exceptions.ConfigError: If a field is out of range.
    """

    FIELDS = (
        "generator",
        "vnr",
        "pso",
        "embedding",
        "arrival_rate",
        "horizon",
        "algorithm",
        "seed",
        "window",
        "sweep",
        "max_workers",
    )

    def __init__(
        self,
        generator=None,
        vnr=None,
        pso=None,
        embedding=None,
        arrival_rate=0.04,
        horizon=10000.0,
        algorithm=baselines.BA_VNE,
        seed=0,
        window=1000.0,
        sweep=None,
        max_workers=1,
    ):
        arrival_rate = _helpers.as_number(arrival_rate, "arrival_rate", positive=True)
        horizon = _helpers.as_number(horizon, "horizon", positive=True)
        window = _helpers.as_number(window, "window", positive=True)
        seed = _helpers.as_count(seed, "seed", minimum=0)
        max_workers = _helpers.as_count(max_workers, "max_workers")
        baselines.get_strategy(algorithm)
        self.generator = generator or topology.GeneratorConfig()
        self.vnr = vnr or topology.VnrConfig()
        self.pso = pso or _PsoParams()
        self.embedding = embedding or _EmbeddingOptions()
        if self.vnr.candidate_domain_count > self.generator.domain_count:
            raise exceptions.ConfigError(
                "vnr.candidate_domain_count exceeds generator.domain_count."
            )
        self.arrival_rate = arrival_rate
        self.horizon = horizon
        self.algorithm = algorithm
        self.seed = seed
        self.window = window
        self.sweep = sweep
        self.max_workers = max_workers

    @classmethod
    def from_dict(cls, data):
        """Builds a configuration from its JSON form.

        Raises:
            bavne.exceptions.ConfigError: If a section is malformed or has
                unknown fields.
        """
        _helpers.check_keys(data, cls.FIELDS, "config")
        data = dict(data)
        sections = {
            "generator": topology.GeneratorConfig,
            "vnr": topology.VnrConfig,
            "pso": _PsoParams,
            "embedding": _EmbeddingOptions,
            "sweep": SweepConfig,
        }
        try:
            for name, section in sections.items():
                if data.get(name) is not None:
                    data[name] = section.from_dict(data[name])
            return cls(**data)
        except exceptions.ConfigError:
            raise
        except (TypeError, ValueError) as caught_exc:
            new_exc = exceptions.ConfigError("Invalid config: {0}".format(caught_exc))
            raise new_exc from caught_exc

    def to_dict(self):
        return {
            "generator": self.generator.to_dict(),
            "vnr": self.vnr.to_dict(),
            "pso": self.pso.to_dict(),
            "embedding": self.embedding.to_dict(),
            "arrival_rate": self.arrival_rate,
            "horizon": self.horizon,
            "algorithm": self.algorithm,
            "seed": self.seed,
            "window": self.window,
            "sweep": self.sweep.to_dict() if self.sweep else None,
            "max_workers": self.max_workers,
        }

    def with_override(self, path, value):
        """Returns a copy with the field at dotted ``path`` set to ``value``.

        Raises:
            bavne.exceptions.ConfigError: If the path does not name a field.
        """
        data = self.to_dict()
        parts = path.split(".")
        target = data
        for part in parts[:-1]:
            if not isinstance(target.get(part), dict):
                raise exceptions.ConfigError("Unknown config path {0!r}".format(path))
            target = target[part]
        if parts[-1] not in target:
            raise exceptions.ConfigError("Unknown config path {0!r}".format(path))
        target[parts[-1]] = value
        return SimulationConfig.from_dict(data)


def load_config(filename=None):
    """Loads a :class:`SimulationConfig` from a JSON file.

    Args:
        filename (Optional[str]): The file. Defaults to the file named by the
            ``BAVNE_CONFIG`` environment variable, and to the built-in
            defaults when that is unset too.

    Returns:
        SimulationConfig: The configuration.

    Raises:
        bavne.exceptions.ConfigError: If the file cannot be read or parsed.
    """
    filename = filename or os.environ.get(environment_vars.CONFIG)
    if not filename:
        return SimulationConfig()
    try:
        with open(filename, "r", encoding="utf-8") as config_file:
            data = json.load(config_file)
    except (OSError, ValueError) as caught_exc:
        new_exc = exceptions.ConfigError(
            "Cannot load config {0}: {1}".format(filename, caught_exc)
        )
        raise new_exc from caught_exc
    return SimulationConfig.from_dict(data)


class Event(object):
    """A simulation event.

    Events order by time, departures before arrivals at equal times, then by
    VNR id.

    Args:
        time (float): When the event happens.
        kind (str): :data:`ARRIVAL` or :data:`DEPARTURE`.
        vnr_id (int): The request concerned.
        vnr (Optional[bavne.topology.VirtualNetworkRequest]): The request,
            for arrivals.
    """

    def __init__(self, time, kind, vnr_id, vnr=None):
        self.time = time
        self.kind = kind
        self.vnr_id = vnr_id
        self.vnr = vnr

    @property
    def sort_key(self):
        return (self.time, 0 if self.kind == DEPARTURE else 1, self.vnr_id)

    def __lt__(self, other):
        return self.sort_key < other.sort_key

    def __repr__(self):
        return "Event({0!r}, {1!r}, {2!r})".format(self.time, self.kind, self.vnr_id)


def schedule_arrivals(config, seed, horizon=None):
    """Draws the arrivals of one run.

    Inter-arrival times are exponential with mean ``1 / arrival_rate``.
    Every arrival carries a freshly generated VNR with an exponential
    lifetime.

    Args:
        config (SimulationConfig): The configuration.
        seed (int): The root seed.
        horizon (Optional[float]): Overrides ``config.horizon``.

    Returns:
        List[Event]: Arrival events in time order, all before the horizon.
    """
    horizon = config.horizon if horizon is None else horizon
    rng = np.random.default_rng(_helpers.derive_seed(seed, STREAM_ARRIVALS))
    events = []
    time = 0.0
    while horizon > 0:
        time += float(rng.exponential(1.0 / config.arrival_rate))
        if time >= horizon:
            break
        vnr_id = len(events)
        vnr = topology.generate_vnr(
            config.vnr,
            _helpers.derive_seed(seed, STREAM_VNR, vnr_id),
            arrival_time=time,
            domain_count=config.generator.domain_count,
            vnr_id=vnr_id,
        )
        events.append(Event(time, ARRIVAL, vnr_id, vnr))
    return events


def _finite_or_none(values):
    return [value if math.isfinite(value) else None for value in values]


class SimulationReport(object):
    """The outcome of one run, a thin wrapper around its JSON form.

    Args:
        data (Mapping[str, Any]): The report document.
    """

    REQUIRED = ("algorithm", "seed", "indices")

    def __init__(self, data):
        self.data = data

    @property
    def algorithm(self):
        return self.data["algorithm"]

    @property
    def seed(self):
        return self.data["seed"]

    @property
    def indices(self):
        """Mapping[str, Union[float, str]]: The five indices."""
        return self.data["indices"]

    @property
    def audits(self):
        return self.data["audits"]

    def index(self, name):
        """Returns one index as a float, ``None`` when undefined."""
        value = self.indices[name]
        return None if value == metrics.UNDEFINED else value

    def to_dict(self):
        return self.data

    def to_json(self):
        return _helpers.to_json(self.data)

    @classmethod
    def from_dict(cls, data):
        """Wraps a report document.

        Raises:
            bavne.exceptions.ReportFormatError: If required fields are
                missing or an index is not a number.
        """
        if not isinstance(data, dict) or any(key not in data for key in cls.REQUIRED):
            raise exceptions.ReportFormatError("Not a simulation report")
        if not isinstance(data["indices"], dict) or any(
            name not in data["indices"] for name in INDICES
        ):
            raise exceptions.ReportFormatError("Report lacks some indices")
        for name in INDICES:
            value = data["indices"][name]
            if value == metrics.UNDEFINED:
                continue
            if not isinstance(value, numbers.Real) or isinstance(value, bool):
                raise exceptions.ReportFormatError(
                    "Index {0} must be a number or {1!r}, got {2!r}".format(
                        name, metrics.UNDEFINED, value
                    )
                )
        return cls(data)


def load_report(filename):
    """Reads a report written by ``bavne run``.

    Raises:
        bavne.exceptions.ReportFormatError: If the file is unreadable or not
            a report.
    """
    try:
        with open(filename, "r", encoding="utf-8") as report_file:
            data = json.load(report_file)
    except (OSError, ValueError) as caught_exc:
        new_exc = exceptions.ReportFormatError(
            "Cannot read report {0}: {1}".format(filename, caught_exc)
        )
        raise new_exc from caught_exc
    return SimulationReport.from_dict(data)


def run(config, network=None):
    """Runs one simulation.

    Args:
        config (SimulationConfig): The configuration.
        network (Optional[bavne.topology.SubstrateNetwork]): Use this
            substrate instead of generating one. It must have no active
            allocations.

    Returns:
        SimulationReport: The report.

    Raises:
        bavne.exceptions.ConfigError: If the configuration is invalid.
        bavne.exceptions.TopologyGenerationError: If generation fails.
    """
    if network is None:
        network = topology.generate_substrate(
            config.generator, _helpers.derive_seed(config.seed, STREAM_SUBSTRATE)
        )
    embed = baselines.get_embedder(config.algorithm)
    initial_digest = network.ledger_digest()
    initial_thresholds = embedding.domain_thresholds(network, config.embedding)
    acc = metrics.MetricsAccumulator(len(network.links))

    _LOGGER.info(
        "Running %s with seed %s until %s",
        config.algorithm,
        config.seed,
        config.horizon,
    )
    queue = schedule_arrivals(config, config.seed)
    heapq.heapify(queue)
    active = {}
    log = []
    traces = {}
    rejections = 0
    ledger_changed = 0
    horizon_utilization = None

    while queue:
        event = heapq.heappop(queue)
        if horizon_utilization is None and event.time > config.horizon:
            horizon_utilization = metrics.link_utilization(acc) or 0.0

        if event.kind == DEPARTURE:
            result = active.pop(event.vnr_id)
            network.release(result)
            acc.record_departure(result)
            log.append({"time": event.time, "event": DEPARTURE, "vnr_id": event.vnr_id})
            continue

        digest = network.ledger_digest()
        params = config.pso.replace(
            seed=_helpers.derive_seed(
                config.seed, STREAM_PSO, config.pso.seed, event.vnr_id
            )
        )
        result = embed(network, event.vnr, params, config.embedding)
        if result.accepted:
            active[event.vnr_id] = result
            heapq.heappush(
                queue, Event(event.vnr.departure_time, DEPARTURE, event.vnr_id)
            )
        else:
            rejections += 1
            if network.ledger_digest() != digest:
                ledger_changed += 1
        acc.record_arrival(result, event.time)
        acc.sample_utilization(event.time)
        if result.fitness_trace is not None:
            traces[str(event.vnr_id)] = _finite_or_none(result.fitness_trace)
        log.append(
            {
                "time": event.time,
                "event": ARRIVAL,
                "vnr_id": event.vnr_id,
                "accepted": result.accepted,
                "cause": result.cause,
                "cost": result.cost,
                "delay": result.total_delay,
            }
        )

    if horizon_utilization is None:
        horizon_utilization = metrics.link_utilization(acc) or 0.0
    final_digest = network.ledger_digest()

    report = {
        "algorithm": config.algorithm,
        "seed": config.seed,
        "horizon": config.horizon,
        "config": config.to_dict(),
        "substrate": network.summary(),
        "counts": {
            "arrived": acc.total_count,
            "accepted": acc.accepted_count,
            "rejected": rejections,
        },
        "indices": {
            "acceptance_rate": metrics.or_undefined(metrics.acceptance_rate, acc),
            "average_cost": metrics.or_undefined(metrics.average_cost, acc),
            "average_delay": metrics.or_undefined(metrics.average_embedding_delay, acc),
            "link_utilization": metrics.average_utilization(acc),
            "average_selected_bandwidth": metrics.or_undefined(
                metrics.average_selected_bandwidth, acc
            ),
        },
        "link_utilization_at_horizon": horizon_utilization,
        "domains": [
            {
                "domain": domain,
                "mean_bandwidth": _domain_mean_capacity(network, domain),
                "initial_threshold": initial_thresholds[domain],
                "average_selected_bandwidth": metrics.or_undefined(
                    metrics.average_selected_bandwidth, acc, domain
                ),
                "selections": len(acc.selected_bandwidth_samples.get(domain, [])),
            }
            for domain in range(network.domains)
        ],
        "audits": {
            "threshold": {
                "selections": acc.threshold_checks,
                "violations": len(acc.threshold_failures),
            },
            "atomic_rejection": {
                "rejections": rejections,
                "ledger_changed": ledger_changed,
            },
            "conservation": {
                "passed": network.is_pristine() and final_digest == initial_digest,
                "initial_digest": initial_digest,
                "final_digest": final_digest,
            },
        },
        "windowed_acceptance": [
            {
                "start": start,
                "acceptance_rate": metrics.UNDEFINED if rate is None else rate,
            }
            for start, rate in metrics.windowed_acceptance(
                acc, config.window, config.horizon
            )
        ],
        "utilization_series": [
            {"time": time, "link_utilization": value}
            for time, value in acc.utilization_samples
        ],
        "events": log,
        "fitness_traces": traces,
    }
    _LOGGER.info(
        "%s with seed %s accepted %s of %s VNRs",
        config.algorithm,
        config.seed,
        acc.accepted_count,
        acc.total_count,
    )
    return SimulationReport(report)


def _domain_mean_capacity(network, domain):
    bandwidths = [link.bw_capacity for link in network.domain_links(domain)]
    if not bandwidths:
        return 0.0
    return math.fsum(bandwidths) / len(bandwidths)


def _sweep_point(job):
    config_data, parameter, value, algorithm, seed = job
    config = SimulationConfig.from_dict(config_data)
    config = config.with_override(parameter, value)
    config = config.with_override("algorithm", algorithm)
    config = config.with_override("seed", seed)
    return run(config).to_dict()


def sweep(config, max_workers=None):
    """Runs every grid point for every algorithm and seed.

    The substrate and the requests depend only on the grid point and the
    seed, so algorithms are compared on identical instances.

    Args:
        config (SimulationConfig): The configuration; ``config.sweep`` holds
            the grid.
        max_workers (Optional[int]): Worker processes. Defaults to
            ``BAVNE_SWEEP_WORKERS``, then ``config.max_workers``.

    Returns:
        Mapping[Tuple[Any, str, int], SimulationReport]: Reports keyed by
            grid value, algorithm and seed, in grid order.

    Raises:
        bavne.exceptions.ConfigError: If there is no grid.
    """
    grid = config.sweep
    if grid is None:
        raise exceptions.ConfigError("The config has no sweep section.")
    if max_workers is None:
        try:
            max_workers = int(
                os.environ.get(environment_vars.SWEEP_WORKERS, config.max_workers)
            )
        except ValueError as caught_exc:
            new_exc = exceptions.ConfigError(
                "{0} must be an integer".format(environment_vars.SWEEP_WORKERS)
            )
            raise new_exc from caught_exc
    base = config.to_dict()
    base["sweep"] = None
    keys = [
        (value, algorithm, seed)
        for value in grid.values
        for algorithm in grid.algorithms
        for seed in grid.seeds
    ]
    jobs = [(base, grid.parameter) + key for key in keys]
    _LOGGER.info("Sweeping %s over %s runs", grid.parameter, len(jobs))

    if max_workers > 1:
        pool = concurrent.futures.ProcessPoolExecutor(max_workers=max_workers)
        with pool as executor:
            documents = list(executor.map(_sweep_point, jobs))
    else:
        documents = [_sweep_point(job) for job in jobs]
    return {key: SimulationReport(data) for key, data in zip(keys, documents)}


EXPERIMENTS = (
    ("exp1_avg_bandwidth.csv", "average_selected_bandwidth", None),
    (
        "exp2_bandwidth_vs_mpvne.csv",
        "average_selected_bandwidth",
        (baselines.BA_VNE, baselines.BaselineKind.MP_VNE.value),
    ),
    ("exp3_cost.csv", "average_cost", None),
    ("exp4_acceptance.csv", "acceptance_rate", None),
    ("exp5_delay.csv", "average_delay", None),
    ("exp6_utilization.csv", "link_utilization", None),
)
"""Tuple: File name, index and algorithm filter of every experiment CSV."""

CSV_HEADER = ("grid_value", "algorithm", "seed", "value")


def experiment_rows(reports, index, algorithms=None):
    """Extracts one index from sweep reports as CSV rows.

    Args:
        reports (Mapping[Tuple[Any, str, int], SimulationReport]): The
            output of :func:`sweep`.
        index (str): One of :data:`INDICES`.
        algorithms (Optional[Sequence[str]]): Keep only these algorithms.

    Returns:
        List[Tuple]: ``(grid_value, algorithm, seed, value)`` rows.
    """
    return [
        (value, algorithm, seed, report.indices[index])
        for (value, algorithm, seed), report in reports.items()
        if algorithms is None or algorithm in algorithms
    ]
