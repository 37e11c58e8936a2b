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

"""Exceptions used in the bavne package."""


class VneError(Exception):
    """Base class for all bavne errors."""


class ConfigError(VneError, ValueError):
    """Used to indicate that a configuration is invalid or unreadable."""


class TopologyGenerationError(VneError):
    """Used to indicate that a random topology could not be made connected
    within the allowed number of attempts."""

    def __init__(self, message, attempts):
        super(TopologyGenerationError, self).__init__(
            "{0} (gave up after {1} attempts)".format(message, attempts)
        )
        self.attempts = attempts


class LedgerError(VneError):
    """Base class for resource ledger errors."""


class InsufficientResources(LedgerError):
    """Used to indicate that an allocation does not fit the residual
    resources. Nothing is mutated when this is raised."""

    def __init__(self, element, required, available):
        super(InsufficientResources, self).__init__(
            "{0} needs {1!r} but only {2!r} is left".format(
                element, required, available
            )
        )
        self.element = element
        self.required = required
        self.available = available


class DoubleRelease(LedgerError):
    """Used to indicate the release of a result that is not allocated."""


class DuplicateAllocation(LedgerError):
    """Used to indicate that a VNR id is already holding resources."""


class EmbeddingError(VneError):
    """Base class for the reasons a VNR gets rejected."""


class NoFeasibleCandidate(EmbeddingError):
    """Used to indicate that a virtual node has no substrate node it can be
    placed on."""

    def __init__(self, vnode_id, message=None):
        super(NoFeasibleCandidate, self).__init__(
            message or "virtual node {0} has no feasible candidate".format(vnode_id)
        )
        self.vnode_id = vnode_id


class PremappingFailed(EmbeddingError):
    """Used to indicate that the swarm found no assignment with a finite
    fitness."""


class NoFeasiblePath(EmbeddingError):
    """Used to indicate that no substrate path can carry a virtual link."""

    def __init__(self, source, target, bw_demand):
        super(NoFeasiblePath, self).__init__(
            "no path from {0} to {1} carries {2!r}".format(source, target, bw_demand)
        )
        self.source = source
        self.target = target
        self.bw_demand = bw_demand


class DisconnectedGlobalView(EmbeddingError):
    """Used to indicate that some domain cannot be reached in the global
    candidate network."""

    def __init__(self, unreachable):
        super(DisconnectedGlobalView, self).__init__(
            "domains {0} are unreachable".format(sorted(unreachable))
        )
        self.unreachable = frozenset(unreachable)


class ConstraintViolation(EmbeddingError):
    """Used to indicate that a candidate embedding breaks the capacity,
    placement or path constraints."""

    def __init__(self, violations):
        super(ConstraintViolation, self).__init__(
            "; ".join(str(violation) for violation in violations)
        )
        self.violations = list(violations)


class NoSamples(VneError):
    """Used to indicate that a metric was requested over an empty sample."""


class ReportFormatError(VneError, ValueError):
    """Used to indicate that a simulation report file is malformed."""
