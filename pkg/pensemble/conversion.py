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
Typing of `key=value` text given on the command line or in sweep grids.
"""
from __future__ import absolute_import, division, print_function

__metaclass__ = type  # pylint: disable=invalid-name

import inspect
import re
from typing import Any

TRUE_WORDS = frozenset({"true", "yes", "on"})
FALSE_WORDS = frozenset({"false", "no", "off"})
NONE_WORDS = frozenset({"", "none", "null"})


class ConversionUtils:
    """
    # Summary

    Turn free text into the Python value it spells.  Each `make_*`
    method returns its input untouched when the text does not spell
    that type, so they can be chained.

    ## Usage

    ```python
    key, value = ConversionUtils().parse_assignment("alpha_d=0.003")
    ```
    """

    def __init__(self) -> None:
        self.class_name = self.__class__.__name__
        self.re_key = re.compile(r"^[A-Za-z_]\w*$", re.ASCII)

    @staticmethod
    def make_boolean(value: Any) -> Any:
        word = str(value).strip().lower()
        if word in TRUE_WORDS:
            return True
        if word in FALSE_WORDS:
            return False
        return value

    @staticmethod
    def make_int(value: Any) -> Any:
        # bool is an int subclass; leave it alone
        if isinstance(value, bool):
            return value
        try:
            return int(value)
        except (ValueError, TypeError):
            return value

    @staticmethod
    def make_float(value: Any) -> Any:
        if isinstance(value, bool):
            return value
        try:
            return float(value)
        except (ValueError, TypeError):
            return value

    @staticmethod
    def make_none(value: Any) -> Any:
        return None if str(value).strip().lower() in NONE_WORDS else value

    def make_value(self, value: Any) -> Any:
        """
        # Summary

        Try None, bool, int and float in that order on text input; any
        other input is returned as is.

        ## Examples

        - `"null"` -> None
        - `"No"` -> False
        - `"5"` -> 5
        - `"1e5"` -> 100000.0
        - `"high"` -> "high"
        """
        if not isinstance(value, str):
            return value
        if self.make_none(value) is None:
            return None
        for convert, kind in ((self.make_boolean, bool), (self.make_int, int), (self.make_float, float)):
            converted = convert(value)
            if isinstance(converted, kind):
                return converted
        return value

    def parse_assignment(self, text: str) -> tuple[str, Any]:
        """
        # Summary

        Split `key=value` at the first `=` and type the value with
        `make_value`.

        ## Raises

        -   `ValueError` when `=` is missing or the key is not an identifier.
        """
        method_name = inspect.stack()[0][3]
        key, separator, value = text.partition("=")
        if not separator:
            msg = f"{self.class_name}.{method_name}: "
            msg += f"Expected key=value, got '{text}'."
            raise ValueError(msg)
        key = key.strip()
        if self.re_key.match(key) is None:
            msg = f"{self.class_name}.{method_name}: "
            msg += f"Invalid key '{key}' in '{text}'. "
            msg += "Use letters, digits and underscores, not starting with a digit."
            raise ValueError(msg)
        return key, self.make_value(value.strip())
