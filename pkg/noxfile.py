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

import pathlib

import nox

CURRENT_DIRECTORY = pathlib.Path(__file__).parent.absolute()

TEST_DEPENDENCIES = ["mock", "pytest", "pytest-cov"]

BLACK_VERSION = "black==22.3.0"
BLACK_PATHS = ["bavne", "tests", "system_tests", "noxfile.py", "setup.py"]


@nox.session(python="3.8")
def lint(session):
    session.install("flake8", "flake8-import-order", "docutils", BLACK_VERSION)
    session.install("-e", ".")
    session.run("black", "--check", *BLACK_PATHS)
    session.run(
        "flake8",
        "--import-order-style=google",
        "--application-import-names=bavne,tests,system_tests",
        "bavne",
        "tests",
        "system_tests",
    )
    session.run(
        "python", "setup.py", "check", "--metadata", "--restructuredtext", "--strict"
    )


@nox.session(python="3.8")
def blacken(session):
    """Run black.
    Format code to uniform standard.
    """
    session.install(BLACK_VERSION)
    session.run("black", *BLACK_PATHS)


@nox.session(python=["3.7", "3.8", "3.9", "3.10", "3.11"])
def unit(session):
    constraints_path = str(
        CURRENT_DIRECTORY / "testing" / f"constraints-{session.python}.txt"
    )
    add_constraints = ["-c", constraints_path]
    session.install(*(TEST_DEPENDENCIES + add_constraints))
    session.install("-e", ".", *add_constraints)
    session.run(
        "pytest",
        f"--junitxml=unit_{session.python}_sponge_log.xml",
        "--cov=bavne",
        "--cov=tests",
        "--cov-report=term-missing",
        "tests",
    )


@nox.session(python="3.8")
def cover(session):
    session.install(*TEST_DEPENDENCIES)
    session.install("-e", ".")
    session.run(
        "pytest", "--cov=bavne", "--cov=tests", "--cov-report=term-missing", "tests"
    )
    session.run("coverage", "report", "--show-missing", "--fail-under=90")


@nox.session(python="3.8")
def system(session):
    """Run the long simulations on the default substrate."""
    session.install(*TEST_DEPENDENCIES)
    session.install("-e", ".")
    session.run("pytest", "system_tests", *session.posargs)
