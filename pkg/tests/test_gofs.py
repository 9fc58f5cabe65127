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
Tests for the online feature selector: contributions, the crisp mask,
projection, truncation and the per-sample update.
"""
import numpy as np
import pytest

from conftest import constant_rule
from pensemble.gofs import FeatureMask, GofsState, apply_mask, feature_contributions, pooled_rules
from pensemble.pclass import FuzzyRule, RuleBase


def rule_base_of(rules) -> RuleBase:
    rule_base = RuleBase(rules[0].dimension, rules[0].consequent.shape[1])
    rule_base.rules = list(rules)
    return rule_base


def zero_rule(n_features: int, n_classes: int = 2) -> FuzzyRule:
    return FuzzyRule(
        center=np.zeros(n_features),
        inv_cov=np.eye(n_features),
        consequent=np.zeros((n_features + 1, n_classes)),
        rls_cov=np.eye(n_features + 1),
    )


class TestFeatureMask:
    """Crisp top-B selection."""

    def test_initial(self):
        assert FeatureMask.initial(5, 2).selected == (0, 1)
        assert FeatureMask.initial(3, None).selected == (0, 1, 2)
        assert FeatureMask.initial(3, 10).size == 3

    def test_top_ties_go_to_the_lower_index(self):
        kappa = np.array([0.2, 0.3, 0.3, 0.2])
        assert FeatureMask.top(kappa, 1).selected == (1,)
        assert FeatureMask.top(kappa, 3).selected == (0, 1, 2)
        assert FeatureMask.top(kappa, None).selected == (0, 1, 2, 3)

    def test_apply(self):
        mask = FeatureMask(4, [1, 3])
        np.testing.assert_array_equal(mask.apply(np.array([1.0, 2.0, 3.0, 4.0])), [0.0, 2.0, 0.0, 4.0])
        np.testing.assert_array_equal(apply_mask(mask, np.ones(4)), mask.weights)

    def test_equality(self):
        assert FeatureMask(3, [2, 0]) == FeatureMask(3, [0, 2])
        assert FeatureMask(3, [0]) != FeatureMask(4, [0])

    @pytest.mark.parametrize("selected", [[], [3], [-1]])
    def test_invalid(self, selected):
        with pytest.raises(ValueError):
            FeatureMask(3, selected)


class TestFeatureContributions:
    """Normalized absolute consequent weight per input."""

    def test_shares(self):
        item = zero_rule(2)
        item.consequent = np.array([[9.0, 9.0], [2.0, -1.0], [0.0, 1.0]])
        kappa = feature_contributions([rule_base_of([item])])
        np.testing.assert_allclose(kappa, [0.75, 0.25])

    def test_pooled_over_experts(self):
        first = zero_rule(2)
        first.consequent = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 0.0]])
        second = zero_rule(2)
        second.consequent = np.array([[0.0, 0.0], [0.0, 0.0], [0.0, 3.0]])
        kappa = feature_contributions([rule_base_of([first]), rule_base_of([second])])
        np.testing.assert_allclose(kappa, [0.25, 0.75])

    def test_all_zero_is_uniform(self):
        kappa = feature_contributions([rule_base_of([zero_rule(4)])])
        np.testing.assert_allclose(kappa, np.full(4, 0.25))

    def test_no_rule_bases(self):
        with pytest.raises(ValueError):
            feature_contributions([])


class TestProjection:
    """Pooled consequent norm is bounded by 1/sqrt(chi)."""

    def rules(self, first: float, second: float) -> list[FuzzyRule]:
        rules = [zero_rule(1), zero_rule(1)]
        rules[0].consequent[0, 0] = first
        rules[1].consequent[0, 0] = second
        return rules

    def test_scaled_onto_the_ball(self):
        gofs = GofsState(1, regularizer=0.01)
        rules = self.rules(12.0, 16.0)
        assert gofs.project(rules) == pytest.approx(0.5)
        assert rules[0].consequent[0, 0] == pytest.approx(6.0)
        assert rules[1].consequent[0, 0] == pytest.approx(8.0)

    def test_inside_the_ball(self):
        gofs = GofsState(1, regularizer=0.01)
        rules = self.rules(3.0, 4.0)
        assert gofs.project(rules) == 1.0
        assert rules[1].consequent[0, 0] == 4.0

    def test_radius(self):
        assert GofsState(2, regularizer=0.04).radius == pytest.approx(5.0)


class TestGofsStep:
    """Per-sample selector update."""

    def test_correct_prediction_only_decays(self):
        gofs = GofsState(2, learning_rate=0.2, regularizer=0.01, budget=1)
        item = constant_rule(2, 2, label=1)
        item.consequent[1, 0] = 0.5
        rule_base = rule_base_of([item])
        mask = gofs.step([rule_base], np.array([1.0, -1.0]), np.array([0.0, 1.0]), correct=True)
        assert mask.selected == (0,)
        np.testing.assert_allclose(item.consequent[0], [0.0, 0.998])
        np.testing.assert_allclose(item.consequent[1], [0.499, 0.0])
        assert gofs.kappa is None

    def test_no_rules(self):
        gofs = GofsState(3, budget=2)
        assert gofs.step([RuleBase(3, 2)], np.zeros(3), np.array([1.0, 0.0]), correct=False).selected == (0, 1)

    def test_deselected_features_can_be_reselected(self):
        gofs = GofsState(6, learning_rate=0.2, regularizer=0.01, budget=2)
        item = zero_rule(6)
        rule_base = rule_base_of([item])
        z = np.array([0.1, 0.1, 0.0, 0.0, 3.0, 3.0])
        mask = gofs.step([rule_base], z, np.array([1.0, 0.0]), correct=False)
        assert mask.selected == (4, 5)
        assert gofs.mask is mask
        np.testing.assert_array_equal(item.consequent[1:5], np.zeros((4, 2)))
        np.testing.assert_allclose(item.consequent[5:, 0], [0.6, 0.6])
        np.testing.assert_allclose(item.consequent[0], [0.2, 0.0])
        assert gofs.kappa is not None
        assert gofs.kappa[4] == pytest.approx(gofs.kappa[5])

    def test_gradient_direction_reduces_the_error(self):
        gofs = GofsState(2, learning_rate=0.2, regularizer=0.01)
        item = constant_rule(2, 2, label=0)
        rule_base = rule_base_of([item])
        z = np.array([0.5, -0.5])
        target = np.array([0.0, 1.0])
        before = rule_base.infer(z)[0]
        gofs.step([rule_base], z, target, correct=False)
        after = rule_base.infer(z)[0]
        assert np.sum((target - after) ** 2) < np.sum((target - before) ** 2)

    def test_truncate(self):
        gofs = GofsState(3, budget=1)
        item = zero_rule(3)
        item.consequent[:] = 1.0
        gofs.truncate([item])
        np.testing.assert_array_equal(item.consequent[:, 0], [1.0, 1.0, 0.0, 0.0])

    def test_pooled_rules_order(self):
        first = rule_base_of([zero_rule(2), zero_rule(2)])
        second = rule_base_of([zero_rule(2)])
        pooled = pooled_rules([first, second])
        assert pooled[0] is first.rules[0]
        assert pooled[2] is second.rules[0]

    @pytest.mark.parametrize("learning_rate, regularizer", [(0.0, 0.01), (0.2, 0.0)])
    def test_invalid_rates(self, learning_rate, regularizer):
        with pytest.raises(ValueError):
            GofsState(2, learning_rate=learning_rate, regularizer=regularizer)
