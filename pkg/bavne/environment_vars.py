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

"""Environment variables used by :mod:`bavne`."""


CONFIG = "BAVNE_CONFIG"
"""Environment variable defining the location of the simulation config file.

Used by the command line when ``--config`` is not given.
"""

LOG_LEVEL = "BAVNE_LOG_LEVEL"
"""Environment variable defining the logging level of the command line.

Accepts the standard :mod:`logging` level names. ``--verbose`` takes
precedence."""

SWEEP_WORKERS = "BAVNE_SWEEP_WORKERS"
"""Environment variable defining how many worker processes a sweep may use
when the config does not set ``max_workers``."""
