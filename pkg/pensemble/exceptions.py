# Copyright (c) 2026 pensemble-stream contributors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""
Exceptions raised by pensemble.

`ConfigError` and `DataError` subclass `ValueError` so callers that catch
`ValueError` keep working.  The CLI maps `ConfigError` to exit code 1 and
`DataError` to exit code 2.
"""
from __future__ import absolute_import, division, print_function

__metaclass__ = type  # pylint: disable=invalid-name


class ConfigError(ValueError):
    """
    Invalid configuration: bad key, out-of-range value, unknown stream kind
    or malformed sweep grid.
    """


class DataError(ValueError):
    """
    Base class for problems with the data a run consumes or produces.
    """


class DataParseError(DataError):
    """
    A CSV cell, column or label could not be parsed.  The message names the
    offending line.
    """


class StreamExhaustedError(DataError):
    """
    A finite stream ran out of samples in the middle of a time stamp.
    """


class ModelFileError(DataError):
    """
    A model file is unreadable, truncated or written by another format version.
    """


class UntrainedModelError(RuntimeError):
    """
    Inference was requested from an empty rule base or an empty ensemble.
    """


class InsufficientDataError(ValueError):
    """
    A statistic was requested before enough samples were observed.
    """
