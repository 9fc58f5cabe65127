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
# pylint: disable=too-many-locals,too-many-arguments,too-many-positional-arguments
"""
Localized generalization error of a base classifier and the 3-sigma
decision that prunes experts whose error bound degrades.

The bound is

    r_sm = (sqrt(r_emp) + sqrt(e_sq) + A)^2 + eps

with r_emp the chunk training error, e_sq the stochastic sensitivity of
the rule base to uniform input perturbations of radius Q, A the output
range and eps a Hoeffding slack on the empirical error.
"""
from __future__ import absolute_import, division, print_function

__metaclass__ = type  # pylint: disable=invalid-name

import logging
import math
from dataclasses import dataclass
from typing import Any

import numpy as np
from numpy.typing import NDArray

from pensemble.core import FeatureMoments, FloatArray
from pensemble.exceptions import InsufficientDataError, UntrainedModelError
from pensemble.pclass import FuzzyRule, RuleBase, extend

LOG = logging.getLogger("pensemble.genloss")

# one-hot targets lie in [0, 1]
OUTPUT_RANGE = 1.0


def width_transform(rule: FuzzyRule) -> tuple[FloatArray, float]:
    """
    # Summary

    Isotropic equivalent of a rule's ellipsoid: centre unchanged, width
    v = sqrt(2) * det(cov)^(1/(2n)), i.e. sqrt(2) times the geometric-mean
    standard deviation.

    ## Raises

    -   `ValueError` if the inverse covariance is not positive definite.
    """
    sign, logdet = np.linalg.slogdet(rule.inv_cov)
    if sign <= 0 or not np.isfinite(logdet):
        msg = "width_transform: "
        msg += f"inverse covariance is not positive definite (sign {sign})."
        raise ValueError(msg)
    return rule.center.copy(), math.sqrt(2.0) * math.exp(-float(logdet) / (2.0 * rule.dimension))


@dataclass
class SsmTerms:
    """
    # Summary

    Per-rule intermediates of the stochastic sensitivity, one entry per
    active rule, plus the total.

    `clamped` marks rules whose activation term hit the ceiling.
    """

    centers: FloatArray
    widths: FloatArray
    magnitudes: FloatArray
    expectations: FloatArray
    variances: FloatArray
    activations: FloatArray
    nu: FloatArray
    varsigma: FloatArray
    clamped: NDArray[np.bool_]
    e_sq: float


def ssm_terms(rule_base: RuleBase, moments: FeatureMoments, q: float = 1.0, ceiling: float = 1e12) -> SsmTerms:
    """
    # Summary

    Compute every per-rule sensitivity term of `rule_base` under the input
    distribution summarized by `moments` (expressed in the rule base's
    input space).

    ## Raises

    -   `InsufficientDataError` if `moments` holds fewer than two samples.
    -   `UntrainedModelError` if the rule base has no active rules.
    """
    if moments.count < 2:
        msg = "ssm_terms: "
        msg += f"At least two samples are required. Got {moments.count}."
        raise InsufficientDataError(msg)
    if rule_base.size == 0:
        msg = "ssm_terms: The rule base has no active rules (untrained expert)."
        raise UntrainedModelError(msg)

    mu = moments.mean
    var = moments.variance
    third = moments.third
    fourth = moments.fourth
    n = moments.dimension
    mean_e = extend(mu)

    count = rule_base.size
    centers = np.empty((count, n))
    widths = np.empty(count)
    magnitudes = np.empty(count)
    expectations = np.empty(count)
    variances = np.empty(count)
    activations = np.empty(count)
    clamped = np.zeros(count, dtype=bool)
    for index, rule in enumerate(rule_base.rules):
        center, width = width_transform(rule)
        offset = mu - center
        expectation = float(np.sum(var + offset**2))
        variance = float(np.sum(fourth - var**2 + 4.0 * var * offset**2 + 4.0 * third * offset))
        magnitude = float(np.linalg.norm(mean_e @ rule.consequent))
        exponent = variance / (2.0 * width**4) - expectation / width**2
        if magnitude == 0.0:
            activation = 0.0
        elif math.log(magnitude) + exponent > math.log(ceiling):
            activation = ceiling
            clamped[index] = True
        else:
            activation = magnitude * math.exp(exponent)
        centers[index] = center
        widths[index] = width
        magnitudes[index] = magnitude
        expectations[index] = expectation
        variances[index] = variance
        activations[index] = activation

    width4 = widths**4
    nu = activations * expectations / width4
    varsigma = activations / width4
    e_sq = (q**2 / 3.0) * float(nu.sum()) + (0.2 * q**4 * n / 9.0) * float(varsigma.sum())
    if clamped.any():
        msg = "ssm_terms: "
        msg += f"{int(clamped.sum())} activation term(s) clamped to {ceiling:g}."
        LOG.warning(msg)
    return SsmTerms(
        centers=centers,
        widths=widths,
        magnitudes=magnitudes,
        expectations=expectations,
        variances=variances,
        activations=activations,
        nu=nu,
        varsigma=varsigma,
        clamped=clamped,
        e_sq=max(e_sq, 0.0),
    )


def stochastic_sensitivity(rule_base: RuleBase, moments: FeatureMoments, q: float = 1.0, ceiling: float = 1e12) -> float:
    """
    Expected squared output change of `rule_base` under uniform input
    perturbations of radius `q`.  See `ssm_terms`.
    """
    return ssm_terms(rule_base, moments, q, ceiling).e_sq


@dataclass(frozen=True)
class GenErrorEstimate:
    """
    One evaluation of the localized generalization error bound.
    """

    r_emp: float
    e_sq: float
    a: float
    bmax: float
    epsilon: float
    r_sm: float

    def to_dict(self) -> dict[str, float]:
        """
        Plain-data form.
        """
        return {
            "r_emp": self.r_emp,
            "e_sq": self.e_sq,
            "a": self.a,
            "bmax": self.bmax,
            "epsilon": self.epsilon,
            "r_sm": self.r_sm,
        }


def confidence_slack(bmax: float, size: int, eta: float) -> float:
    """
    eps = bmax * sqrt(ln(1 / eta) / (2 size)).
    """
    return bmax * math.sqrt(math.log(1.0 / eta) / (2.0 * size))


def generalization_bound(r_emp: float, e_sq: float, a: float, bmax: float, size: int, eta: float) -> GenErrorEstimate:
    """
    # Summary

    Assemble the bound from its components.

    ## Raises

    -   `ValueError` if `size` < 1 or `eta` is outside (0, 1].
    """
    if size < 1:
        raise ValueError(f"generalization_bound: size must be >= 1. Got {size}.")
    if not 0.0 < eta <= 1.0:
        raise ValueError(f"generalization_bound: eta must be in (0, 1]. Got {eta}.")
    epsilon = confidence_slack(bmax, size, eta)
    r_sm = (math.sqrt(max(r_emp, 0.0)) + math.sqrt(max(e_sq, 0.0)) + a) ** 2 + epsilon
    return GenErrorEstimate(r_emp=r_emp, e_sq=e_sq, a=a, bmax=bmax, epsilon=epsilon, r_sm=r_sm)


def localized_gen_error(
    rule_base: RuleBase,
    inputs: FloatArray,
    labels: Any,
    moments: FeatureMoments,
    eta: float = 0.05,
    q: float = 1.0,
    ceiling: float = 1e12,
    bmax: float = 0.0,
) -> GenErrorEstimate:
    """
    # Summary

    Localized generalization error of `rule_base` over one chunk.

    `inputs` are the chunk's standardized, masked samples, `moments` the
    input distribution in that same space and `bmax` the expert's running
    maximum per-sample squared error so far.

    ## Raises

    -   `ValueError` if the chunk is empty.
    -   `UntrainedModelError` if the rule base has no active rules.
    """
    inputs = np.atleast_2d(np.asarray(inputs, dtype=float))
    labels = np.asarray(labels, dtype=int).ravel()
    if inputs.shape[0] == 0:
        raise ValueError("localized_gen_error: the chunk is empty.")
    errors = np.empty(inputs.shape[0])
    for index, (z, label) in enumerate(zip(inputs, labels)):
        scores, _ = rule_base.infer(z)
        residual = scores.copy()
        residual[label] -= 1.0
        errors[index] = float(residual @ residual) / rule_base.n_classes
    r_emp = float(errors.mean())
    bmax = max(float(bmax), float(errors.max()))
    e_sq = stochastic_sensitivity(rule_base, moments, q, ceiling) if moments.count >= 2 else 0.0
    return generalization_bound(r_emp, e_sq, OUTPUT_RANGE, bmax, inputs.shape[0], eta)


class GenErrorHistory:
    """
    # Summary

    Running count, mean and variance of an expert's error bound across the
    chunks it has lived through, plus its running maximum per-sample
    squared error.
    """

    def __init__(self) -> None:
        self.count: int = 0
        self.mean: float = 0.0
        self.m2: float = 0.0
        self.bmax: float = 0.0

    @property
    def variance(self) -> float:
        """
        Population variance of the recorded bounds.
        """
        return self.m2 / self.count if self.count else 0.0

    @property
    def std(self) -> float:
        """
        Population standard deviation of the recorded bounds.
        """
        return math.sqrt(max(self.variance, 0.0))

    def update(self, value: float) -> None:
        """
        Record one bound.
        """
        self.count += 1
        delta = value - self.mean
        self.mean += delta / self.count
        self.m2 += delta * (value - self.mean)

    def decide(self, current: float, direction: str = "high", warmup: int = 5) -> bool:
        """
        # Summary

        Return True if `current` falls outside the 3-sigma band of the
        history on the `direction` side, then record it.

        Never True while fewer than `warmup` bounds are recorded.
        """
        prune = False
        if self.count >= warmup:
            band = 3.0 * self.std
            if direction == "high":
                prune = current > self.mean + band
            else:
                prune = current < self.mean - band
        self.update(current)
        return prune

    def to_dict(self) -> dict[str, Any]:
        """
        Plain-data form used by the model file.
        """
        return {"count": self.count, "mean": self.mean, "m2": self.m2, "bmax": self.bmax}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "GenErrorHistory":
        """
        Rebuild a history written by `to_dict`.
        """
        history = cls()
        history.count = int(data["count"])
        history.mean = float(data["mean"])
        history.m2 = float(data["m2"])
        history.bmax = float(data["bmax"])
        return history


def gen_prune_decision(history: GenErrorHistory, current: float, direction: str = "high", warmup: int = 5) -> bool:
    """
    Module-level form of `GenErrorHistory.decide`.
    """
    return history.decide(current, direction, warmup)
