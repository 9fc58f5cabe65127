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
Online feature selection over the consequents of every rule in the
ensemble: a gradient step on misclassification, projection onto an L2
ball and a crisp top-B mask of the most contributing inputs.
"""
from __future__ import absolute_import, division, print_function

__metaclass__ = type  # pylint: disable=invalid-name

import logging
from typing import Iterable, Optional, Sequence

import numpy as np

from pensemble.core import FloatArray
from pensemble.pclass import FuzzyRule, RuleBase, extend


class FeatureMask:
    """
    # Summary

    Crisp 0/1 selection over n input features.

    ## Raises

    -   `ValueError` if an index is outside `0..n-1` or nothing is selected.
    """

    def __init__(self, n_features: int, selected: Iterable[int]) -> None:
        self.n_features = int(n_features)
        chosen = tuple(sorted({int(index) for index in selected}))
        if not chosen:
            raise ValueError(f"{self.__class__.__name__}: at least one feature must be selected.")
        if chosen[0] < 0 or chosen[-1] >= self.n_features:
            msg = f"{self.__class__.__name__}: "
            msg += f"indices must be in 0..{self.n_features - 1}. Got {list(chosen)}."
            raise ValueError(msg)
        self.selected: tuple[int, ...] = chosen
        self._weights = np.zeros(self.n_features)
        self._weights[list(chosen)] = 1.0

    @classmethod
    def initial(cls, n_features: int, budget: Optional[int]) -> "FeatureMask":
        """
        The first `min(budget, n)` features, or all of them when `budget`
        is None.
        """
        size = n_features if budget is None else min(budget, n_features)
        return cls(n_features, range(size))

    @classmethod
    def top(cls, kappa: FloatArray, budget: Optional[int]) -> "FeatureMask":
        """
        The `budget` largest contributions, ties resolved to the lower index.
        """
        n_features = int(kappa.size)
        size = n_features if budget is None else min(budget, n_features)
        order = np.argsort(-kappa, kind="stable")
        return cls(n_features, order[:size].tolist())

    @property
    def weights(self) -> FloatArray:
        """
        Vector of crisp weights, 1 for selected features.
        """
        return self._weights.copy()

    @property
    def size(self) -> int:
        """
        Number of selected features.
        """
        return len(self.selected)

    def apply(self, z: FloatArray) -> FloatArray:
        """
        Zero (the standardized mean) every deselected feature of `z`.
        """
        return np.asarray(z, dtype=float) * self._weights

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FeatureMask):
            return NotImplemented
        return self.n_features == other.n_features and self.selected == other.selected

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"FeatureMask(n_features={self.n_features}, selected={list(self.selected)})"


def apply_mask(mask: FeatureMask, z: FloatArray) -> FloatArray:
    """
    Module-level form of `FeatureMask.apply`.
    """
    return mask.apply(z)


def pooled_rules(rule_bases: Sequence[RuleBase]) -> list[FuzzyRule]:
    """
    Every active rule of every rule base, in ensemble order.
    """
    return [rule for rule_base in rule_bases for rule in rule_base.rules]


def feature_contributions(rule_bases: Sequence[RuleBase]) -> FloatArray:
    """
    # Summary

    Share of the absolute consequent weight attached to each input,
    summed over all rules of all experts and all outputs.  The intercept
    row is excluded.  Uniform when every weight is zero.

    ## Raises

    -   `ValueError` if there are no rule bases.
    """
    if not rule_bases:
        raise ValueError("feature_contributions: at least one rule base is required.")
    n_features = rule_bases[0].n_features
    totals = np.zeros(n_features)
    for rule in pooled_rules(rule_bases):
        totals += np.abs(rule.consequent[1:, :]).sum(axis=1)
    grand = float(totals.sum())
    if grand <= 0.0:
        return np.full(n_features, 1.0 / n_features)
    return totals / grand


class GofsState:
    """
    # Summary

    Learning rate, regularizer, budget, last contribution vector and
    current mask of the feature selector.

    ## Usage

    ```python
    gofs = GofsState(n_features=6, learning_rate=0.2, regularizer=0.01, budget=2)
    mask = gofs.step(rule_bases, z, target, correct=False)
    ```
    """

    def __init__(self, n_features: int, learning_rate: float = 0.2, regularizer: float = 0.01, budget: Optional[int] = None) -> None:
        self.class_name = self.__class__.__name__
        self.log = logging.getLogger(f"pensemble.{self.class_name}")
        if learning_rate <= 0.0 or regularizer <= 0.0:
            msg = f"{self.class_name}.__init__: "
            msg += "learning_rate and regularizer must be > 0. "
            msg += f"Got {learning_rate}, {regularizer}."
            raise ValueError(msg)
        self.n_features = int(n_features)
        self.learning_rate = float(learning_rate)
        self.regularizer = float(regularizer)
        self.budget = budget
        self.kappa: Optional[FloatArray] = None
        self.mask = FeatureMask.initial(self.n_features, budget)

        msg = f"ENTERED {self.class_name}(): "
        msg += f"learning_rate {self.learning_rate}, regularizer {self.regularizer}, budget {budget}"
        self.log.debug(msg)

    @property
    def radius(self) -> float:
        """
        Radius 1/sqrt(chi) of the projection ball.
        """
        return 1.0 / float(np.sqrt(self.regularizer))

    def project(self, rules: Sequence[FuzzyRule]) -> float:
        """
        Scale every consequent so the pooled norm is at most `radius`.
        Returns the scale applied.
        """
        norm = float(np.sqrt(sum(float(np.sum(rule.consequent**2)) for rule in rules)))
        if norm <= self.radius:
            return 1.0
        scale = self.radius / norm
        for rule in rules:
            rule.consequent = rule.consequent * scale
        return scale

    def truncate(self, rules: Sequence[FuzzyRule]) -> None:
        """
        Zero the consequent rows of every deselected feature.
        """
        dropped = [index + 1 for index in range(self.n_features) if index not in self.mask.selected]
        if not dropped:
            return
        for rule in rules:
            consequent = rule.consequent.copy()
            consequent[dropped, :] = 0.0
            rule.consequent = consequent

    def step(self, rule_bases: Sequence[RuleBase], z: FloatArray, target: FloatArray, correct: bool) -> FeatureMask:
        """
        # Summary

        One selector update after the ensemble predicted the standardized,
        unmasked sample `z` whose one-hot target is `target`.

        -   correct: every consequent decays by (1 - alpha chi); the mask is
            kept.
        -   wrong: decay plus a gradient step of the squared error of the
            pooled rule set, projection onto the L2 ball, new contributions,
            a new top-B mask and truncation of the deselected rows.

        Firing strengths and the pooled output use the masked input, the
        gradient uses every feature so that a deselected input can win its
        place back.
        """
        rules = pooled_rules(rule_bases)
        if not rules:
            return self.mask
        shrink = 1.0 - self.learning_rate * self.regularizer
        if correct:
            for rule in rules:
                rule.consequent = rule.consequent * shrink
            return self.mask

        masked = self.mask.apply(z)
        log_phi = np.array([rule.log_fire(masked) for rule in rules])
        weights = np.exp(log_phi - log_phi.max())
        weights /= weights.sum()
        x_masked = extend(masked)
        output = sum(weight * rule.output(x_masked) for weight, rule in zip(weights, rules))
        error = target - output
        step = self.learning_rate * np.outer(extend(z), error)
        for weight, rule in zip(weights, rules):
            rule.consequent = rule.consequent * shrink + weight * step
        self.project(rules)
        self.kappa = feature_contributions(rule_bases)
        mask = FeatureMask.top(self.kappa, self.budget)
        if mask != self.mask:
            msg = f"{self.class_name}.step: mask {list(self.mask.selected)} -> {list(mask.selected)}"
            self.log.debug(msg)
        self.mask = mask
        self.truncate(rules)
        return mask
