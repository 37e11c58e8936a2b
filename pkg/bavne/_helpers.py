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

"""Helper functions for commonly used utilities."""

import json
import numbers
import os
import tempfile

import numpy as np

from bavne import exceptions


def derive_seed(seed, *keys):
    """Derives an independent 32-bit seed from a root seed and a key path.

    Streams derived from distinct key paths do not overlap.

    Args:
        seed (int): The root seed.
        keys (int): Stream identifiers, e.g. ``(STREAM_VNR, vnr_id)``.

    Returns:
        int: The derived seed.
    """
    sequence = np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in keys))
    return int(sequence.generate_state(1)[0])


def to_json(data):
    """Serializes ``data`` to canonical JSON text.

    Keys are sorted and floats use their shortest round-trip repr, so equal
    inputs always give byte-identical output.

    Args:
        data (Mapping): JSON-compatible data.

    Returns:
        str: The JSON document, newline terminated.
    """
    return json.dumps(data, sort_keys=True, indent=2, allow_nan=False) + "\n"


def atomic_write(filename, text):
    """Writes ``text`` to ``filename`` through a temporary file and a rename.

    Readers never observe a partially written file.

    Args:
        filename (str): The destination path.
        text (str): The content.
    """
    directory = os.path.dirname(os.path.abspath(filename))
    handle, tmp_name = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".part")
    try:
        with os.fdopen(handle, "w", encoding="utf-8", newline="") as tmp_file:
            tmp_file.write(text)
        os.replace(tmp_name, filename)
    except BaseException:
        if os.path.exists(tmp_name):
            os.remove(tmp_name)
        raise


def check_keys(data, allowed, where):
    """Rejects unknown keys in a configuration mapping.

    Args:
        data (Mapping[str, Any]): The mapping to check.
        allowed (Iterable[str]): The accepted keys.
        where (str): Name of the section, used in the error message.

    Raises:
        bavne.exceptions.ConfigError: If ``data`` is not a mapping or
            contains unknown keys.
    """
    if not isinstance(data, dict):
        raise exceptions.ConfigError(
            "{0} must be a JSON object, got {1!r}".format(where, type(data).__name__)
        )
    unknown = set(data).difference(allowed)
    if unknown:
        raise exceptions.ConfigError(
            "{0} has unknown fields {1}.".format(where, ", ".join(sorted(unknown)))
        )


def as_range(value, name, positive=True):
    """Validates a closed ``[low, high]`` interval.

    Args:
        value (Sequence[float]): The two interval ends.
        name (str): Field name, used in the error message.
        positive (bool): Whether ``low`` must be strictly positive.

    Returns:
        Tuple[float, float]: The validated interval.

    Raises:
        bavne.exceptions.ConfigError: If the interval is malformed.
    """
    try:
        low, high = value
        low, high = float(low), float(high)
    except (TypeError, ValueError) as caught_exc:
        new_exc = exceptions.ConfigError(
            "{0} must be a [low, high] pair, got {1!r}".format(name, value)
        )
        raise new_exc from caught_exc
    if low > high or (positive and low <= 0):
        raise exceptions.ConfigError(
            "{0} is not a valid range: {1!r}".format(name, value)
        )
    return low, high


def as_count(value, name, minimum=1):
    """Validates a whole number no smaller than ``minimum``.

    Raises:
        bavne.exceptions.ConfigError: If ``value`` is not an integer, is a
            bool or is too small.
    """
    if (
        not isinstance(value, numbers.Integral)
        or isinstance(value, bool)
        or value < minimum
    ):
        raise exceptions.ConfigError(
            "{0} must be an integer >= {1}, got {2!r}".format(name, minimum, value)
        )
    return int(value)


def as_number(value, name, minimum=None, positive=False):
    """Validates a real number.

    Args:
        value (Any): The value to check.
        name (str): Field name, used in the error message.
        minimum (Optional[float]): Smallest accepted value.
        positive (bool): Whether the value must be strictly positive.

    Returns:
        float: The value.

    Raises:
        bavne.exceptions.ConfigError: If ``value`` is not a number or is out
            of range.
    """
    if not isinstance(value, numbers.Real) or isinstance(value, bool):
        raise exceptions.ConfigError(
            "{0} must be a number, got {1!r}".format(name, value)
        )
    if (minimum is not None and value < minimum) or (positive and value <= 0):
        raise exceptions.ConfigError("{0} is out of range: {1!r}".format(name, value))
    return float(value)


def as_probability(value, name):
    """Validates a probability in ``[0, 1]``."""
    value = as_number(value, name, minimum=0.0)
    if value > 1.0:
        raise exceptions.ConfigError(
            "{0} must lie in [0, 1], got {1!r}".format(name, value)
        )
    return value


def as_flag(value, name):
    if not isinstance(value, bool):
        raise exceptions.ConfigError(
            "{0} must be true or false, got {1!r}".format(name, value)
        )
    return value
