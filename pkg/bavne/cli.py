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

"""Command line interface.

Usage::

    bavne generate --config toy.json --out out/
    bavne run --config toy.json --algorithm mc-vnm --out out/
    bavne sweep --config toy.json --out out/
    bavne compare out/ba-vne.json out/lid-vne.json

Exit status is 0 on success, 2 for usage and configuration errors and 3 for
failures while generating or simulating. Errors are written to standard
error as one JSON object.
"""

import argparse
import csv
import io
import json
import logging
import os
import sys

from bavne import _helpers
from bavne import abstraction
from bavne import baselines
from bavne import environment_vars
from bavne import exceptions
from bavne import metrics
from bavne import simulation
from bavne import topology
from bavne import version

_LOGGER = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_FAILURE = 3

SUBSTRATE_FILE = "substrate.json"
REPORT_FILE = "report.json"
METRICS_FILE = "metrics.csv"
FITNESS_TRACE_FILE = "fitness_trace.csv"

METRICS_HEADER = ("algorithm", "seed", "metric", "value")
FITNESS_TRACE_HEADER = ("vnr_id", "iteration", "best_fitness")

_HIGHER_IS_BETTER = frozenset(("acceptance_rate", "average_selected_bandwidth"))


def _csv_text(header, rows):
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def _write(directory, name, text):
    os.makedirs(directory, exist_ok=True)
    filename = os.path.join(directory, name)
    _helpers.atomic_write(filename, text)
    _LOGGER.info("Wrote %s", filename)
    return filename


def _load_config(args):
    """Loads the config file and applies the command line overrides."""
    config = simulation.load_config(args.config)
    overrides = [
        ("seed", getattr(args, "seed", None)),
        ("algorithm", getattr(args, "algorithm", None)),
        ("embedding.threshold_basis", getattr(args, "qualified_links", None)),
    ]
    if getattr(args, "plus_one_denominator", False):
        overrides.append(("embedding.plus_one", True))
    if getattr(args, "trace_fitness", False):
        overrides.append(("embedding.trace_fitness", True))
    for path, value in overrides:
        if value is not None:
            config = config.with_override(path, value)
    return config


def cmd_generate(args):
    """Writes the substrate of the configured seed and prints its summary."""
    config = _load_config(args)
    network = topology.generate_substrate(
        config.generator,
        _helpers.derive_seed(config.seed, simulation.STREAM_SUBSTRATE),
    )
    _write(args.out, SUBSTRATE_FILE, _helpers.to_json(network.to_dict()))
    summary = network.summary()
    print(
        "domains={domains} nodes={nodes} links={links} mean_bw={mean_bw:.1f}".format(
            **summary
        )
    )
    return EXIT_OK


def metric_rows(report):
    """Returns the ``algorithm,seed,metric,value`` rows of a report."""
    rows = [
        (report.algorithm, report.seed, name, report.indices[name])
        for name in simulation.INDICES
    ]
    rows.append(
        (
            report.algorithm,
            report.seed,
            "link_utilization_at_horizon",
            report.data["link_utilization_at_horizon"],
        )
    )
    return rows


def fitness_trace_rows(report):
    """Returns the ``vnr_id,iteration,best_fitness`` rows of a report."""
    traces = report.data.get("fitness_traces", {})
    return [
        (vnr_id, iteration, metrics.UNDEFINED if value is None else value)
        for vnr_id in sorted(traces, key=int)
        for iteration, value in enumerate(traces[vnr_id])
    ]


def cmd_run(args):
    """Runs one simulation and writes its report."""
    config = _load_config(args)
    report = simulation.run(config)
    if args.format == "csv":
        text = _csv_text(METRICS_HEADER, metric_rows(report))
        filename = _write(args.out, METRICS_FILE, text)
    else:
        filename = _write(args.out, REPORT_FILE, report.to_json())
    if config.embedding.trace_fitness:
        _write(
            args.out,
            FITNESS_TRACE_FILE,
            _csv_text(FITNESS_TRACE_HEADER, fitness_trace_rows(report)),
        )
    print(filename)
    return EXIT_OK


def cmd_sweep(args):
    """Runs the configured grid and writes one CSV per experiment."""
    config = _load_config(args)
    if config.sweep is None:
        config = config.with_override("sweep", simulation.SweepConfig().to_dict())
    reports = simulation.sweep(config, max_workers=args.workers)
    for name, index, algorithms in simulation.EXPERIMENTS:
        rows = simulation.experiment_rows(reports, index, algorithms)
        print(_write(args.out, name, _csv_text(simulation.CSV_HEADER, rows)))
    if args.format == "json":
        directory = os.path.join(args.out, "reports")
        for (value, algorithm, seed), report in reports.items():
            _write(
                directory,
                "{0}_{1}_{2}.json".format(value, algorithm, seed),
                report.to_json(),
            )
    return EXIT_OK


def _marks(name, values):
    """Returns ``"*"`` for the best values, ``"="`` on an all-way tie."""
    defined = [value for value in values if value is not None]
    if len(defined) < 2:
        return [""] * len(values)
    best = max(defined) if name in _HIGHER_IS_BETTER else min(defined)
    winners = [value == best for value in values]
    if sum(winners) == len(defined):
        return ["=" if value is not None else "" for value in values]
    return ["*" if winner else "" for winner in winners]


def compare_table(reports):
    """Formats the indices of several reports side by side.

    Args:
        reports (Sequence[bavne.simulation.SimulationReport]): The reports.

    Returns:
        str: The aligned table. ``*`` marks the best value of a row, ``=``
            a row where all reports tie.
    """
    headers = ["index"] + [
        "{0}#{1}".format(report.algorithm, report.seed) for report in reports
    ]
    rows = []
    for name in simulation.INDICES:
        values = [report.index(name) for report in reports]
        cells = [name]
        for value, mark in zip(values, _marks(name, values)):
            text = metrics.UNDEFINED if value is None else "{0:.4f}".format(value)
            cells.append(text + mark)
        rows.append(cells)
    table = [headers] + rows
    widths = [max(len(cell) for cell in column) for column in zip(*table)]
    lines = [
        "  ".join(cell.ljust(width) for cell, width in zip(row, widths)).rstrip()
        for row in table
    ]
    return "\n".join(lines) + "\n"


def cmd_compare(args):
    """Prints the indices of two or more reports with win marks."""
    if len(args.reports) < 2:
        raise exceptions.ConfigError("compare needs at least two reports.")
    reports = [simulation.load_report(filename) for filename in args.reports]
    sys.stdout.write(compare_table(reports))
    return EXIT_OK


def _add_config_flags(parser, algorithm=True, seed=True):
    parser.add_argument(
        "--config",
        help="JSON config file (default: ${0}, then built-in defaults)".format(
            environment_vars.CONFIG
        ),
    )
    if seed:
        parser.add_argument("--seed", type=int, help="Override the root seed.")
    parser.add_argument("--out", default=".", help="Output directory.")
    if algorithm:
        parser.add_argument(
            "--algorithm", choices=baselines.ALGORITHMS, help="Embedding algorithm."
        )
    parser.add_argument(
        "--plus-one-denominator",
        action="store_true",
        help="Divide the domain bandwidth sum by count + 1.",
    )
    parser.add_argument(
        "--qualified-links",
        choices=abstraction.THRESHOLD_BASES,
        help="Measure link thresholds on residual or capacity bandwidth.",
    )
    parser.add_argument(
        "--trace-fitness",
        action="store_true",
        help="Record the pre-mapping fitness trace of every VNR.",
    )


def build_parser():
    """Returns the argument parser of the ``bavne`` command."""
    parser = argparse.ArgumentParser(
        prog="bavne", description="Bandwidth-aware multi-domain VNE simulator."
    )
    parser.add_argument(
        "--version", action="version", version="%(prog)s " + version.__version__
    )
    parser.add_argument(
        "-v", "--verbose", action="count", default=0, help="More logging, repeatable."
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    generate = subparsers.add_parser("generate", help="Generate a substrate network.")
    _add_config_flags(generate, algorithm=False)
    generate.set_defaults(handler=cmd_generate)

    run = subparsers.add_parser("run", help="Run one simulation.")
    _add_config_flags(run)
    run.add_argument("--format", choices=("json", "csv"), default="json")
    run.set_defaults(handler=cmd_run)

    sweep = subparsers.add_parser("sweep", help="Run an experiment grid.")
    # Grid runs take their seeds from the sweep section.
    _add_config_flags(sweep, algorithm=False, seed=False)
    sweep.add_argument(
        "--format",
        choices=("json", "csv"),
        default="csv",
        help="json also writes every run report.",
    )
    sweep.add_argument("--workers", type=int, help="Worker processes.")
    sweep.set_defaults(handler=cmd_sweep)

    compare = subparsers.add_parser("compare", help="Compare report files.")
    compare.add_argument("reports", nargs="+", help="Report JSON files.")
    compare.set_defaults(handler=cmd_compare)
    return parser


def _configure_logging(verbosity):
    if verbosity >= 2:
        level = logging.DEBUG
    elif verbosity == 1:
        level = logging.INFO
    else:
        level = os.environ.get(environment_vars.LOG_LEVEL, "WARNING").upper()
        if not isinstance(logging.getLevelName(level), int):
            level = logging.WARNING
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


def _report_error(caught_exc):
    sys.stderr.write(
        json.dumps({"error": type(caught_exc).__name__, "message": str(caught_exc)})
        + "\n"
    )


def main(argv=None):
    """Runs the ``bavne`` command.

    Args:
        argv (Optional[Sequence[str]]): Arguments, defaulting to
            ``sys.argv[1:]``.

    Returns:
        int: The exit status.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as caught_exc:
        return caught_exc.code
    _configure_logging(args.verbose)

    try:
        return args.handler(args)
    except (exceptions.ConfigError, exceptions.ReportFormatError) as caught_exc:
        _report_error(caught_exc)
        return EXIT_USAGE
    except (exceptions.VneError, OSError) as caught_exc:
        _LOGGER.debug("Command failed", exc_info=True)
        _report_error(caught_exc)
        return EXIT_FAILURE
    except Exception as caught_exc:
        _LOGGER.debug("Unexpected error", exc_info=True)
        _report_error(caught_exc)
        return EXIT_FAILURE
