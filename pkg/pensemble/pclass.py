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
# pylint: disable=too-many-instance-attributes,too-many-arguments,too-many-positional-arguments,too-many-locals
"""
Evolving first-order TSK fuzzy classifier used as the ensemble's base
learner.

Each rule has a multivariate Gaussian premise (centre and inverse
covariance) and a multi-output linear consequent learned by fuzzily
weighted recursive least squares.  Rules are grown from significant and
novel samples, their premises follow the data they win, and they are
parked in (and recalled from) a reserve according to their density.
"""
from __future__ import absolute_import, division, print_function

__metaclass__ = type  # pylint: disable=invalid-name

import inspect
import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from pensemble.config import EnsembleConfig
from pensemble.core import FloatArray, one_hot
from pensemble.exceptions import InsufficientDataError, UntrainedModelError

TINY = float(np.finfo(float).tiny)


def extend(x: FloatArray) -> FloatArray:
    """
    Return x_e = [1, x].
    """
    return np.concatenate(([1.0], x))


@dataclass(eq=False)
class FuzzyRule:
    """
    # Summary

    One TSK rule.

    -   `center`: premise centre u, length n.
    -   `inv_cov`: premise inverse covariance, n x n, symmetric positive definite.
    -   `consequent`: W, (n + 1) x O, row 0 is the intercept.
    -   `rls_cov`: P, (n + 1) x (n + 1), symmetric positive definite.
    -   `support`: number of samples the rule has won (>= 1).
    -   `density`: last density of the centre under the rule base's kernel.
    """

    center: FloatArray
    inv_cov: FloatArray
    consequent: FloatArray
    rls_cov: FloatArray
    support: int = 1
    density: float = 1.0
    log: logging.Logger = field(default_factory=lambda: logging.getLogger("pensemble.FuzzyRule"), repr=False, compare=False)

    @property
    def dimension(self) -> int:
        """
        Number of input features n.
        """
        return int(self.center.size)

    def mahalanobis(self, x: FloatArray) -> float:
        """
        Squared Mahalanobis distance (x - u)' inv_cov (x - u), never negative.
        """
        delta = x - self.center
        return max(float(delta @ self.inv_cov @ delta), 0.0)

    def log_fire(self, x: FloatArray) -> float:
        """
        Natural log of the firing strength.
        """
        return -0.5 * self.mahalanobis(x)

    def fire(self, x: FloatArray) -> float:
        """
        # Summary

        Firing strength exp(-d^2 / 2) in (0, 1].  Values that would
        underflow are floored at the smallest positive float.
        """
        return max(float(np.exp(self.log_fire(x))), TINY)

    def output(self, x_e: FloatArray) -> FloatArray:
        """
        Consequent output x_e' W, one value per class.
        """
        return x_e @ self.consequent

    @property
    def log_volume(self) -> float:
        """
        # Summary

        Log of the zone-of-influence volume det(cov)^(1/2).

        ## Raises

        -   `ValueError` if the inverse covariance is not positive definite.
        """
        sign, logdet = np.linalg.slogdet(self.inv_cov)
        if sign <= 0 or not np.isfinite(logdet):
            msg = f"{self.__class__.__name__}.log_volume: "
            msg += "inverse covariance is not positive definite. "
            msg += f"sign {sign}, log determinant {logdet}."
            raise ValueError(msg)
        return -0.5 * float(logdet)

    def update_premise(self, x: FloatArray) -> bool:
        """
        # Summary

        Move the premise towards `x` by one sequential maximum-likelihood
        step and return True.

        The covariance recursion cov <- (1 - a) cov + a e e' with a = 1/N is
        applied directly to the inverse covariance by a rank-one inverse
        update, so no matrix is ever inverted.

        If any intermediate is not finite the rule is left untouched, a
        warning is logged and False is returned.
        """
        support = self.support + 1
        alpha = 1.0 / support
        center = self.center + (x - self.center) / support
        error = x - center
        s_e = self.inv_cov @ error
        denominator = 1.0 - alpha + alpha * float(error @ s_e)
        inv_cov = (self.inv_cov - alpha * np.outer(s_e, s_e) / denominator) / (1.0 - alpha)
        inv_cov = 0.5 * (inv_cov + inv_cov.T)
        if not (np.isfinite(denominator) and denominator > 0.0 and np.all(np.isfinite(inv_cov)) and np.all(np.isfinite(center))):
            msg = "FuzzyRule.update_premise: "
            msg += "non-finite premise update skipped. "
            msg += f"support {self.support}, denominator {denominator}."
            self.log.warning(msg)
            return False
        self.support = support
        self.center = center
        self.inv_cov = inv_cov
        return True

    def fwgrls_update(self, x_e: FloatArray, target: FloatArray, firing: float, decay: float) -> None:
        """
        # Summary

        One fuzzily weighted generalized recursive least squares step.

        -   K = P x_e / (1/firing + x_e' P x_e)
        -   P <- P - K x_e' P
        -   W <- W - decay firing W + K (target' - x_e' W)

        A zero firing strength leaves the rule unchanged.
        """
        if firing <= 0.0:
            return
        p_x = self.rls_cov @ x_e
        gain = p_x / (1.0 / firing + float(x_e @ p_x))
        residual = target - x_e @ self.consequent
        rls_cov = self.rls_cov - np.outer(gain, p_x)
        self.rls_cov = 0.5 * (rls_cov + rls_cov.T)
        consequent = self.consequent
        if decay > 0.0:
            consequent = consequent * (1.0 - decay * firing)
        self.consequent = consequent + np.outer(gain, residual)

    def copy(self) -> "FuzzyRule":
        """
        Return an independent copy.
        """
        return FuzzyRule(
            center=self.center.copy(),
            inv_cov=self.inv_cov.copy(),
            consequent=self.consequent.copy(),
            rls_cov=self.rls_cov.copy(),
            support=self.support,
            density=self.density,
        )

    def parameter_count(self) -> int:
        """
        Centre, upper triangle of the covariance and consequent entries.
        """
        n = self.dimension
        return n + n * (n + 1) // 2 + int(self.consequent.size)


class DensityAccumulators:
    """
    # Summary

    Weighted running sums from which the inverse multiquadric density of
    any point is computed recursively:

    d(z) = 1 / sqrt(1 + |z|^2 - 2 z'A / t + B / t)

    where t is the total weight, A the weighted sum of samples and B the
    weighted sum of their squared norms.
    """

    def __init__(self, dimension: int) -> None:
        self.dimension = int(dimension)
        self.weight: float = 0.0
        self.linear: FloatArray = np.zeros(self.dimension)
        self.quadratic: float = 0.0

    def update(self, x: FloatArray, weight: float) -> None:
        """
        Add `x` with the given non-negative weight.
        """
        weight = max(float(weight), 0.0)
        self.weight += weight
        self.linear = self.linear + weight * x
        self.quadratic += weight * float(x @ x)

    def density(self, z: FloatArray) -> float:
        """
        # Summary

        Inverse multiquadric of the weighted mean squared distance from `z`
        to every sample seen.

        ## Raises

        -   `InsufficientDataError` if no weight has been accumulated.
        """
        if self.weight <= 0.0:
            msg = f"{self.__class__.__name__}.density: "
            msg += "No samples have been accumulated."
            raise InsufficientDataError(msg)
        mean_square = float(z @ z) - 2.0 * float(z @ self.linear) / self.weight + self.quadratic / self.weight
        return 1.0 / np.sqrt(1.0 + max(mean_square, 0.0))

    def copy(self) -> "DensityAccumulators":
        """
        Return an independent copy.
        """
        other = DensityAccumulators(self.dimension)
        other.weight = self.weight
        other.linear = self.linear.copy()
        other.quadratic = self.quadratic
        return other


class RuleBase:
    """
    # Summary

    The rule set of one base classifier plus its reserve of pruned rules
    and its density accumulators.

    Inputs are expected standardized and masked by the caller.  `ranges`
    arguments are the per-feature spans in that same space; axes with
    span 0 are treated as inactive.

    ## Raises

    -   `UntrainedModelError` from `infer` and `winning_rule` when there
        are no active rules.

    ## Usage

    ```python
    rule_base = RuleBase(n_features=3, n_classes=2, config=EnsembleConfig())
    for z, label in zip(inputs, labels):
        rule_base.train_sample(z, label, ranges)
    rule_base.ers_prune()
    scores, label = rule_base.infer(z)
    ```
    """

    def __init__(self, n_features: int, n_classes: int, config: Optional[EnsembleConfig] = None) -> None:
        self.class_name = self.__class__.__name__
        self.log = logging.getLogger(f"pensemble.{self.class_name}")
        if n_features < 1 or n_classes < 2:
            msg = f"{self.class_name}.__init__: "
            msg += "Expected n_features >= 1 and n_classes >= 2. "
            msg += f"Got n_features {n_features}, n_classes {n_classes}."
            raise ValueError(msg)
        self.n_features = int(n_features)
        self.n_classes = int(n_classes)
        self.config = config if config is not None else EnsembleConfig()
        self.rules: list[FuzzyRule] = []
        self.reserve: list[FuzzyRule] = []
        self.accumulators = DensityAccumulators(self.n_features)

        msg = f"ENTERED {self.class_name}(): "
        msg += f"n_features {self.n_features}, n_classes {self.n_classes}"
        self.log.debug(msg)

    @property
    def size(self) -> int:
        """
        Number of active rules R.
        """
        return len(self.rules)

    def parameter_count(self) -> int:
        """
        Network parameters over the active rules.
        """
        return sum(rule.parameter_count() for rule in self.rules)

    def _require_rules(self) -> None:
        if not self.rules:
            method_name = inspect.stack()[1][3]
            msg = f"{self.class_name}.{method_name}: "
            msg += "The rule base has no active rules (untrained expert)."
            raise UntrainedModelError(msg)

    def log_firings(self, x: FloatArray) -> FloatArray:
        """
        Log firing strength of every active rule.
        """
        return np.array([rule.log_fire(x) for rule in self.rules])

    def firings(self, x: FloatArray) -> FloatArray:
        """
        Firing strength of every active rule.
        """
        return np.maximum(np.exp(self.log_firings(x)), TINY)

    def normalized_firings(self, x: FloatArray) -> FloatArray:
        """
        phi_i / sum(phi), computed in log space so that it stays defined
        when every firing strength underflows.
        """
        self._require_rules()
        log_phi = self.log_firings(x)
        weights = np.exp(log_phi - log_phi.max())
        return weights / weights.sum()

    def infer(self, x: FloatArray) -> tuple[FloatArray, int]:
        """
        # Summary

        Return the class scores (normalized-firing blend of the rule
        outputs) and the predicted class, ties resolved to the lowest index.

        ## Raises

        -   `UntrainedModelError` if there are no active rules.
        """
        weights = self.normalized_firings(x)
        x_e = extend(x)
        outputs = np.vstack([rule.output(x_e) for rule in self.rules])
        scores = weights @ outputs
        return scores, int(np.argmax(scores))

    def winning_rule(self, x: FloatArray) -> int:
        """
        Index of the rule with the largest posterior phi_i N_i, ties to the
        lowest index.
        """
        self._require_rules()
        supports = np.array([rule.support for rule in self.rules], dtype=float)
        return int(np.argmax(self.log_firings(x) + np.log(supports)))

    def candidate_widths(self, x: FloatArray, ranges: FloatArray) -> FloatArray:
        """
        # Summary

        Per-axis standard deviations a rule grown at `x` would receive.

        -   First rule: `init_width_fraction` of each span (span 1 on
            inactive axes).
        -   Otherwise: `overlap_factor` times the distance to the nearest
            active rule centre, on every axis.

        Widths are floored at `min_width`.
        """
        if not self.rules:
            spans = np.where(ranges > 0.0, ranges, 1.0)
            widths = self.config.init_width_fraction * spans
        else:
            nearest = min(float(np.linalg.norm(x - rule.center)) for rule in self.rules)
            widths = np.full(self.n_features, self.config.overlap_factor * nearest)
        return np.maximum(widths, self.config.min_width)

    def datum_significance(self, x: FloatArray, error: FloatArray, ranges: FloatArray) -> tuple[float, bool]:
        """
        # Summary

        Datum significance of `x`: the error norm scaled by the share of the
        candidate rule's volume in the total volume.

        Returns `(ds, ds >= ds_threshold)`.
        """
        self._require_rules()
        log_candidate = float(np.sum(np.log(self.candidate_widths(x, ranges))))
        log_volumes = np.array([rule.log_volume for rule in self.rules])
        log_total = float(np.logaddexp(log_candidate, np.logaddexp.reduce(log_volumes)))
        share = float(np.exp(log_candidate - log_total))
        significance = float(np.linalg.norm(error)) * share
        return significance, significance >= self.config.ds_threshold

    def data_quality(self, x: FloatArray) -> tuple[float, bool]:
        """
        # Summary

        Density of `x` and whether it is novel, i.e. denser than every
        active rule centre or sparser than all of them.

        ## Raises

        -   `InsufficientDataError` if the accumulators are empty.
        """
        self._require_rules()
        density = self.accumulators.density(x)
        rule_densities = [self.accumulators.density(rule.center) for rule in self.rules]
        novelty = density > max(rule_densities) or density < min(rule_densities)
        return density, novelty

    def volume_guard(self, winner: int, ranges: FloatArray) -> bool:
        """
        # Summary

        True if the winning rule is still small enough to absorb samples:
        the geometric-mean standard deviation of its covariance on active
        axes is at most `volume_ratio` times the geometric-mean span of
        those axes.
        """
        active = ranges > 0.0
        count = int(active.sum())
        if count == 0:
            return True
        covariance = np.linalg.inv(self.rules[winner].inv_cov)
        sub = covariance[np.ix_(active, active)]
        sign, logdet = np.linalg.slogdet(sub)
        if sign <= 0:
            return False
        log_width = float(logdet) / (2.0 * count)
        log_span = float(np.mean(np.log(ranges[active])))
        return bool(log_width <= np.log(self.config.volume_ratio) + log_span)

    def grow_rule(self, x: FloatArray, winner: Optional[int], ranges: FloatArray) -> FuzzyRule:
        """
        # Summary

        Add a rule centred at `x` and return it.  The consequent is copied
        from `winner` when given, zeros otherwise.
        """
        widths = self.candidate_widths(x, ranges)
        if winner is None:
            consequent = np.zeros((self.n_features + 1, self.n_classes))
        else:
            consequent = self.rules[winner].consequent.copy()
        density = self.accumulators.density(x) if self.accumulators.weight > 0.0 else 1.0
        rule = FuzzyRule(
            center=np.array(x, dtype=float),
            inv_cov=np.diag(1.0 / widths**2),
            consequent=consequent,
            rls_cov=self.config.rls_init * np.eye(self.n_features + 1),
            support=1,
            density=density,
        )
        self.rules.append(rule)
        msg = f"{self.class_name}.grow_rule: "
        msg += f"rules {self.size}, winner {winner}, width {float(widths.mean()):.4g}"
        self.log.debug(msg)
        return rule

    def ers_prune(self) -> list[FuzzyRule]:
        """
        # Summary

        Move rules with an insignificant contribution to the reserve and
        return them.

        A rule's score is its volume share times the norm of its
        consequent.  Rules scoring below `ers_threshold` times the best
        score are pruned.  Nothing is pruned when R <= 1.
        """
        if self.size <= 1:
            return []
        log_volumes = np.array([rule.log_volume for rule in self.rules])
        shares = np.exp(log_volumes - np.logaddexp.reduce(log_volumes))
        norms = np.array([np.linalg.norm(rule.consequent) for rule in self.rules])
        scores = shares * norms
        cutoff = self.config.ers_threshold * float(scores.max())
        pruned = [rule for rule, score in zip(self.rules, scores) if score < cutoff]
        if pruned:
            self.rules = [rule for rule, score in zip(self.rules, scores) if score >= cutoff]
            self.reserve.extend(pruned)
            msg = f"{self.class_name}.ers_prune: "
            msg += f"pruned {len(pruned)}, rules {self.size}, reserve {len(self.reserve)}"
            self.log.debug(msg)
        return pruned

    def pplus_step(self, x: FloatArray) -> tuple[list[FuzzyRule], list[FuzzyRule]]:
        """
        # Summary

        Refresh the density of every active and reserve rule, park sparse
        active rules and recall dense reserve rules.

        -   Active rule pruned if its density is below `pplus_threshold`
            times the densest active rule (only when R > 1).
        -   Reserve rule recalled if its density exceeds every active rule
            and the density of `x`.

        Returns `(pruned, recalled)`.  Recalled rules are the same objects
        that were parked, so their parameters are unchanged.
        """
        if self.accumulators.weight <= 0.0:
            return [], []
        for rule in self.rules + self.reserve:
            rule.density = self.accumulators.density(rule.center)
        pruned: list[FuzzyRule] = []
        if self.size > 1:
            cutoff = self.config.pplus_threshold * max(rule.density for rule in self.rules)
            pruned = [rule for rule in self.rules if rule.density < cutoff]
            if pruned:
                self.rules = [rule for rule in self.rules if rule.density >= cutoff]
        recalled: list[FuzzyRule] = []
        if self.reserve:
            ceiling = max([rule.density for rule in self.rules] + [self.accumulators.density(x)])
            recalled = [rule for rule in self.reserve if rule.density > ceiling]
            if recalled:
                self.reserve = [rule for rule in self.reserve if rule.density <= ceiling]
                self.rules.extend(recalled)
        self.reserve.extend(pruned)
        if pruned or recalled:
            msg = f"{self.class_name}.pplus_step: "
            msg += f"pruned {len(pruned)}, recalled {len(recalled)}, "
            msg += f"rules {self.size}, reserve {len(self.reserve)}"
            self.log.debug(msg)
        return pruned, recalled

    def train_sample(self, x: FloatArray, label: int, ranges: FloatArray) -> bool:
        """
        # Summary

        Learn one standardized, masked sample and return True if a rule was
        grown.

        Order: update the density accumulators; grow the first rule or
        evaluate datum significance and data quality; otherwise adapt the
        winner's premise (reverted and replaced by a new rule if the volume
        guard trips); consequent update of every rule weighted by its
        normalized firing; density-based pruning and recall.
        """
        x = np.asarray(x, dtype=float)
        target = one_hot(label, self.n_classes)
        grew = False
        if not self.rules:
            self.accumulators.update(x, 1.0)
            self.grow_rule(x, None, ranges)
            grew = True
        else:
            self.accumulators.update(x, float(self.firings(x).max()))
            scores, _ = self.infer(x)
            winner = self.winning_rule(x)
            _, significant = self.datum_significance(x, target - scores, ranges)
            if significant:
                _, novel = self.data_quality(x)
                if novel:
                    self.grow_rule(x, winner, ranges)
                    grew = True
            if not grew:
                rule = self.rules[winner]
                saved = (rule.center, rule.inv_cov, rule.support)
                if rule.update_premise(x) and not self.volume_guard(winner, ranges):
                    rule.center, rule.inv_cov, rule.support = saved
                    self.grow_rule(x, winner, ranges)
                    grew = True
        x_e = extend(x)
        decay = self.config.consequent_decay
        for rule, weight in zip(self.rules, self.normalized_firings(x)):
            rule.fwgrls_update(x_e, target, float(weight), decay)
        self.pplus_step(x)
        return grew
