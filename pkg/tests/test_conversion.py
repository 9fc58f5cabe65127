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
Tests for ConversionUtils.
"""
import pytest

from pensemble.conversion import ConversionUtils


class TestMakeValue:
    """Text becomes None, bool, int or float, most specific first."""

    @pytest.mark.parametrize(
        "text, expected",
        [
            ("none", None),
            ("null", None),
            ("true", True),
            ("No", False),
            ("5", 5),
            ("0.02", 0.02),
            ("1e5", 100000.0),
            ("high", "high"),
        ],
    )
    def test_conversion(self, text, expected):
        value = ConversionUtils().make_value(text)
        assert value == expected
        assert type(value) is type(expected)

    def test_non_text_passes_through(self):
        assert ConversionUtils().make_value(3.5) == 3.5

    def test_make_int_keeps_booleans(self):
        assert ConversionUtils.make_int(True) is True


class TestParseAssignment:
    """key=value text is split and typed."""

    def test_assignment(self):
        assert ConversionUtils().parse_assignment("alpha_d=0.003") == ("alpha_d", 0.003)

    def test_spaces_around_key(self):
        assert ConversionUtils().parse_assignment(" b =2") == ("b", 2)

    def test_missing_equals(self):
        with pytest.raises(ValueError, match="Expected key=value"):
            ConversionUtils().parse_assignment("alpha_d")

    def test_invalid_key(self):
        with pytest.raises(ValueError, match="Invalid key"):
            ConversionUtils().parse_assignment("alpha-d=1")
