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


import os

import pytest

from bavne import baselines
from bavne import simulation


HERE = os.path.dirname(__file__)
TOY_CONFIG_FILE = os.path.join(HERE, "..", "tests", "data", "toy_config.json")
SHORT_HORIZON = 1500.0


@pytest.fixture
def toy_config_file():
    """The full path to the small two-domain config."""
    yield TOY_CONFIG_FILE


@pytest.fixture
def short_config():
    """The default substrate with a horizon short enough for a test run."""
    yield simulation.SimulationConfig(horizon=SHORT_HORIZON, window=500.0)


def assert_audits_pass(report):
    """Checks the ledger audits, and the threshold audit for BA-VNE."""
    audits = report.audits
    if report.algorithm == baselines.BA_VNE:
        assert audits["threshold"]["violations"] == 0
    assert audits["atomic_rejection"]["ledger_changed"] == 0
    assert audits["conservation"]["passed"]
