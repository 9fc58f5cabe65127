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
# pylint: disable=line-too-long
"""
Logging setup for pensemble scripts and library users.
"""

from __future__ import absolute_import, division, print_function

__metaclass__ = type  # pylint: disable=invalid-name

import inspect
import json
import logging
from logging.config import dictConfig
from os import environ
from pathlib import Path
from typing import Any, Union

ENV_LOGGING_CONFIG = "PENSEMBLE_LOGGING_CONFIG"


class Log:
    """
    # Summary

    Configure (or silence) the logging tree used by `pensemble`.

    Every class in the package logs to a child of the `pensemble` logger,
    named after itself, e.g. `pensemble.RuleBase`.  Nothing is emitted
    until a `dictConfig` JSON file is supplied, either through the
    `PENSEMBLE_LOGGING_CONFIG` environment variable or the `config`
    property.

    ## Raises

    -   `ValueError` from `commit()` when the config file is missing,
        is not JSON, declares no handlers, or is refused by `dictConfig`.
    -   `TypeError` when `develop` is set to a non-boolean.

    ## Usage

    ```python
    from pensemble.log import Log
    log = Log()
    log.config = "logging_config.json"  # optional, overrides the environment
    log.commit()
    ```
    """

    def __init__(self) -> None:
        self.class_name = self.__class__.__name__
        self._config: str = environ.get(ENV_LOGGING_CONFIG, "")
        self._develop: bool = False
        logging.raiseExceptions = False

    def silence(self) -> None:
        """
        Strip every handler from the root logger and leave a NullHandler
        in their place.
        """
        root = logging.getLogger()
        for handler in list(root.handlers):
            root.removeHandler(handler)
        root.addHandler(logging.NullHandler())
        root.propagate = False

    def _read_config(self) -> dict[str, Any]:
        method_name = inspect.stack()[0][3]
        path = Path(self.config).expanduser()
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as error:
            msg = f"{self.class_name}.{method_name}: "
            msg += f"error reading logging config {path}: {error}"
            raise ValueError(msg) from error
        try:
            loaded = json.loads(text)
        except json.JSONDecodeError as error:
            msg = f"{self.class_name}.{method_name}: "
            msg += f"error parsing logging config {path}: {error}"
            raise ValueError(msg) from error
        if not isinstance(loaded, dict):
            msg = f"{self.class_name}.{method_name}: "
            msg += f"error parsing logging config {path}: "
            msg += f"top level is {type(loaded).__name__}, not an object."
            raise ValueError(msg)
        return loaded

    def validate_logging_config(self, logging_config: dict) -> None:
        """
        Raise `ValueError` unless `logging_config` declares a handler.
        """
        method_name = inspect.stack()[0][3]
        if not logging_config.get("handlers"):
            msg = f"{self.class_name}.{method_name}: "
            msg += f"No handlers found in {self.config or 'logging config'}."
            raise ValueError(msg)

    def configure(self) -> None:
        """
        Load the file named by `config` and hand it to `dictConfig`.
        """
        method_name = inspect.stack()[0][3]
        logging_config = self._read_config()
        self.validate_logging_config(logging_config)
        try:
            dictConfig(logging_config)
        except (RuntimeError, TypeError, ValueError) as error:
            msg = f"{self.class_name}.{method_name}: "
            msg += f"dictConfig refused {self.config}: {error}"
            raise ValueError(msg) from error

    def commit(self) -> None:
        """
        Silence logging when `config` is blank, otherwise configure it.
        """
        if self.config.strip():
            self.configure()
        else:
            self.silence()

    @property
    def config(self) -> str:
        """
        Path of the `dictConfig` JSON file; "" leaves logging silent.
        """
        return self._config

    @config.setter
    def config(self, value: Union[str, Path]) -> None:
        self._config = str(value)

    @property
    def develop(self) -> bool:
        """
        When True, errors inside logging handlers propagate.  Default False.
        """
        return self._develop

    @develop.setter
    def develop(self, value: bool) -> None:
        method_name = inspect.stack()[0][3]
        if not isinstance(value, bool):
            msg = f"{self.class_name}.{method_name}: "
            msg += f"develop must be bool, not {type(value).__name__}."
            raise TypeError(msg)
        self._develop = value
        logging.raiseExceptions = value
