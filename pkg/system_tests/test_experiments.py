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

from bavne import baselines
from bavne import cli
from bavne import simulation
from system_tests.conftest import assert_audits_pass


def _arrivals(report):
    return [
        (event["time"], event["vnr_id"])
        for event in report.data["events"]
        if event["event"] == simulation.ARRIVAL
    ]


@pytest.mark.parametrize("algorithm", baselines.ALGORITHMS)
def test_default_substrate(short_config, algorithm):
    report = simulation.run(short_config.with_override("algorithm", algorithm))

    assert report.data["substrate"]["nodes"] == 120
    assert report.data["counts"]["arrived"] > 0
    assert_audits_pass(report)


def test_algorithms_see_the_same_requests(short_config):
    reports = [
        simulation.run(short_config.with_override("algorithm", algorithm))
        for algorithm in baselines.ALGORITHMS
    ]

    expected = _arrivals(reports[0])
    for report in reports[1:]:
        assert _arrivals(report) == expected
        assert report.data["substrate"] == reports[0].data["substrate"]


@pytest.mark.parametrize(
    "path, value",
    [("embedding.plus_one", True), ("embedding.threshold_basis", "capacity")],
)
def test_threshold_variants(short_config, path, value):
    report = simulation.run(short_config.with_override(path, value))

    assert report.audits["threshold"]["selections"] > 0
    assert_audits_pass(report)


def test_sweep_is_independent_of_workers(toy_config_file):
    config = simulation.load_config(toy_config_file)

    serial = simulation.sweep(config, max_workers=1)
    parallel = simulation.sweep(config, max_workers=2)

    assert list(serial) == list(parallel)
    for key, report in serial.items():
        assert report.to_json() == parallel[key].to_json()
        assert_audits_pass(report)


def test_command_line_round_trip(toy_config_file, tmpdir, capsys):
    reports = []
    for algorithm in ("ba-vne", "mc-vnm"):
        out = str(tmpdir.mkdir(algorithm))
        status = cli.main(
            [
                "run",
                "--config",
                toy_config_file,
                "--algorithm",
                algorithm,
                "--out",
                out,
            ]
        )
        assert status == cli.EXIT_OK
        reports.append(os.path.join(out, cli.REPORT_FILE))
    capsys.readouterr()

    assert cli.main(["compare"] + reports) == cli.EXIT_OK

    lines = capsys.readouterr().out.splitlines()
    assert lines[0].split() == ["index", "ba-vne#4", "mc-vnm#4"]
    assert [line.split()[0] for line in lines[1:]] == list(simulation.INDICES)
    with open(reports[0]) as fh:
        assert json.load(fh)["audits"]["conservation"]["passed"]


@pytest.mark.parametrize("seed", range(5))
def test_ledger_and_threshold_audits(short_config, seed):
    report = simulation.run(short_config.with_override("seed", seed))

    assert report.audits["threshold"]["selections"] > 0
    assert_audits_pass(report)


def test_repeated_runs_are_identical(short_config):
    documents = {simulation.run(short_config).to_json() for _ in range(3)}

    assert len(documents) == 1


def test_global_best_never_worsens(short_config):
    config = short_config.with_override("embedding.trace_fitness", True)

    traces = simulation.run(config).data["fitness_traces"]

    assert traces
    for trace in traces.values():
        finite = [value for value in trace if value is not None]
        assert trace[len(trace) - len(finite) :] == finite
        assert all(later <= earlier for earlier, later in zip(finite, finite[1:]))
