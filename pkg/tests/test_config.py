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
Tests for EnsembleConfig validation, aliases and dict round trips.
"""
import math

import pytest

from pensemble.config import ALIASES, EnsembleConfig
from pensemble.exceptions import ConfigError


class TestDefaults:
    """Defaults match the documented operating point."""

    def test_defaults(self, config):
        assert config.decreasing_factor == 0.1
        assert config.prune_threshold == 0.01
        assert config.warning_alpha == 0.005
        assert config.drift_alpha == 0.001
        assert config.generalization_eta == 0.05
        assert config.neighborhood_q == 1.0
        assert config.gofs_learning_rate == 0.2
        assert config.gofs_regularizer == 0.01
        assert config.feature_budget is None
        assert config.gen_prune_direction == "high"
        assert config.gen_prune_warmup == 5

    def test_every_key_has_a_property(self, config):
        for key in EnsembleConfig.keys():
            getattr(config, key)

    def test_aliases_point_at_keys(self):
        assert set(ALIASES.values()) <= set(EnsembleConfig.keys())


class TestSetters:
    """Property setters check type and range."""

    @pytest.mark.parametrize("value", [0.0, 1.0, -0.5])
    def test_decreasing_factor_open_interval(self, config, value):
        with pytest.raises(ValueError):
            config.decreasing_factor = value

    def test_bool_is_not_a_number(self, config):
        with pytest.raises(TypeError):
            config.drift_alpha = True

    def test_nan_rejected(self, config):
        with pytest.raises(ValueError):
            config.neighborhood_q = math.nan

    def test_alpha_one_allowed(self, config):
        config.drift_alpha = 1.0
        assert config.drift_alpha == 1.0

    def test_feature_budget(self, config):
        config.feature_budget = 3
        assert config.feature_budget == 3
        config.feature_budget = None
        assert config.feature_budget is None
        with pytest.raises(ValueError):
            config.feature_budget = 0
        with pytest.raises(TypeError):
            config.feature_budget = 2.5

    def test_gen_prune_direction(self, config):
        config.gen_prune_direction = "low"
        assert config.gen_prune_direction == "low"
        with pytest.raises(ValueError):
            config.gen_prune_direction = "sideways"


class TestSetValue:
    """set_value() accepts canonical keys and aliases, and raises ConfigError."""

    def test_alias(self, config):
        config.set_value("theta", 0.02)
        assert config.prune_threshold == 0.02

    def test_alias_is_case_insensitive(self, config):
        config.set_value("ALPHA_D", 0.003)
        assert config.drift_alpha == 0.003

    def test_canonical_key(self, config):
        config.set_value("neighborhood_q", 2)
        assert config.neighborhood_q == 2.0

    def test_unknown_key(self, config):
        with pytest.raises(ConfigError, match="Unknown configuration key"):
            config.set_value("learning_speed", 0.5)

    def test_invalid_value(self, config):
        with pytest.raises(ConfigError, match="Invalid value for decreasing_factor"):
            config.set_value("p", 1.5)

    def test_config_error_is_a_value_error(self, config):
        with pytest.raises(ValueError):
            config.set_value("p", "fast")


class TestDictForm:
    """to_dict() / from_dict() / copy() preserve every value."""

    def test_round_trip(self, config):
        config.set_value("b", 2)
        config.set_value("chi", 0.05)
        assert EnsembleConfig.from_dict(config.to_dict()) == config

    def test_missing_keys_keep_defaults(self):
        config = EnsembleConfig.from_dict({"p": 0.3})
        assert config.decreasing_factor == 0.3
        assert config.prune_threshold == 0.01

    def test_unknown_key(self):
        with pytest.raises(ConfigError):
            EnsembleConfig.from_dict({"bogus": 1})

    def test_copy_is_independent(self, config):
        other = config.copy()
        other.drift_alpha = 0.01
        assert config.drift_alpha == 0.001
        assert other != config
