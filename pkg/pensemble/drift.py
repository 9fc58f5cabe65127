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
# pylint: disable=too-many-instance-attributes
"""
Online drift detector over a bounded performance signal, driven by
Hoeffding bounds and a running cut point.
"""
from __future__ import absolute_import, division, print_function

__metaclass__ = type  # pylint: disable=invalid-name

import inspect
import logging
import math
from typing import Any

from pensemble.drift_state import DriftState
from pensemble.exceptions import InsufficientDataError


def hoeffding_epsilon(cut: int, m: int, lower: float, upper: float, alpha: float) -> float:
    """
    # Summary

    Hoeffding slack for the difference between the mean of `cut + m`
    observations and the mean of their first `cut`:

    eps = (upper - lower) * sqrt(m / (2 cut (m + cut)) * ln(1 / alpha))

    ## Raises

    -   `InsufficientDataError` if `cut` or `m` is below 1.
    -   `ValueError` if `alpha` is outside (0, 1] or `upper < lower`.
    """
    if cut < 1 or m < 1:
        msg = "hoeffding_epsilon: "
        msg += f"Both counts must be >= 1. Got cut {cut}, m {m}."
        raise InsufficientDataError(msg)
    if not 0.0 < alpha <= 1.0:
        msg = f"hoeffding_epsilon: alpha must be in (0, 1]. Got {alpha}."
        raise ValueError(msg)
    if upper < lower:
        msg = f"hoeffding_epsilon: upper must be >= lower. Got [{lower}, {upper}]."
        raise ValueError(msg)
    return (upper - lower) * math.sqrt(m / (2.0 * cut * (m + cut)) * math.log(1.0 / alpha))


def single_mean_epsilon(count: int, lower: float, upper: float, alpha: float) -> float:
    """
    Hoeffding slack of one running mean over `count` observations.
    """
    if count < 1:
        return math.inf
    return (upper - lower) * math.sqrt(math.log(1.0 / alpha) / (2.0 * count))


class DriftMonitor:
    """
    # Summary

    Stable / Warning / Drift detector over a stream of values in
    `[lower, upper]`, typically the ensemble's 0/1 misclassification
    indicator.

    The monitor keeps the overall running mean, the mean up to the current
    cut point (the prefix whose upper confidence bound was lowest) and the
    mean of what followed it.  A state is raised when the overall mean has
    risen above the cut mean by more than the Hoeffding slack at the drift
    (or warning) confidence.  Drift clears every statistic.

    ## Raises

    -   `ValueError` from `observe` for values outside `[lower, upper]`.

    ## Usage

    ```python
    monitor = DriftMonitor(warning_alpha=0.005, drift_alpha=0.001)
    for error in errors:
        state = monitor.observe(error)
    ```
    """

    def __init__(self, warning_alpha: float = 0.005, drift_alpha: float = 0.001, lower: float = 0.0, upper: float = 1.0) -> None:
        self.class_name = self.__class__.__name__
        self.log = logging.getLogger(f"pensemble.{self.class_name}")
        for name, value in (("warning_alpha", warning_alpha), ("drift_alpha", drift_alpha)):
            if not 0.0 < value <= 1.0:
                msg = f"{self.class_name}.__init__: "
                msg += f"{name} must be in (0, 1]. Got {value}."
                raise ValueError(msg)
        if upper < lower:
            msg = f"{self.class_name}.__init__: "
            msg += f"upper must be >= lower. Got [{lower}, {upper}]."
            raise ValueError(msg)
        self.warning_alpha = float(warning_alpha)
        self.drift_alpha = float(drift_alpha)
        self.lower = float(lower)
        self.upper = float(upper)
        self.detections: int = 0
        self.reset()

        msg = f"ENTERED {self.class_name}(): "
        msg += f"warning_alpha {self.warning_alpha}, drift_alpha {self.drift_alpha}"
        self.log.debug(msg)

    def reset(self) -> None:
        """
        Clear every running statistic and return to Stable.
        """
        self.total_n: int = 0
        self.total_sum: float = 0.0
        self.cut_n: int = 0
        self.cut_sum: float = 0.0
        self.post_n: int = 0
        self.post_sum: float = 0.0
        self.state: DriftState = DriftState.STABLE

    @property
    def total_mean(self) -> float:
        """
        Mean of every value since the last reset.
        """
        return self.total_sum / self.total_n if self.total_n else 0.0

    @property
    def cut_mean(self) -> float:
        """
        Mean of the values up to the cut point.
        """
        return self.cut_sum / self.cut_n if self.cut_n else 0.0

    @property
    def post_mean(self) -> float:
        """
        Mean of the values after the cut point.
        """
        return self.post_sum / self.post_n if self.post_n else 0.0

    def _test(self, alpha: float) -> bool:
        epsilon = hoeffding_epsilon(self.cut_n, self.post_n, self.lower, self.upper, alpha)
        return self.total_mean - self.cut_mean >= epsilon

    def observe(self, value: float) -> DriftState:
        """
        # Summary

        Fold one value in and return the resulting state.

        ## Raises

        -   `ValueError` if `value` is outside `[lower, upper]` or not finite.
        """
        value = float(value)
        if not self.lower <= value <= self.upper:
            method_name = inspect.stack()[0][3]
            msg = f"{self.class_name}.{method_name}: "
            msg += f"Expected a value in [{self.lower}, {self.upper}]. Got {value}."
            raise ValueError(msg)
        self.total_n += 1
        self.total_sum += value
        self.post_n += 1
        self.post_sum += value

        total_bound = self.total_mean + single_mean_epsilon(self.total_n, self.lower, self.upper, self.drift_alpha)
        cut_bound = self.cut_mean + single_mean_epsilon(self.cut_n, self.lower, self.upper, self.drift_alpha)
        if total_bound <= cut_bound:
            self.cut_n = self.total_n
            self.cut_sum = self.total_sum
            self.post_n = 0
            self.post_sum = 0.0

        previous = self.state
        if self.post_n == 0:
            state = DriftState.STABLE
        elif self._test(self.drift_alpha):
            state = DriftState.DRIFT
        elif self._test(self.warning_alpha):
            state = DriftState.WARNING
        else:
            state = DriftState.STABLE

        if state is not previous:
            msg = f"{self.class_name}.observe: {previous.value} -> {state.value} "
            msg += f"at sample {self.total_n}, total mean {self.total_mean:.4f}, "
            msg += f"cut mean {self.cut_mean:.4f}"
            self.log.debug(msg)
        if state is DriftState.DRIFT:
            self.detections += 1
            self.reset()
        else:
            self.state = state
        return state

    def to_dict(self) -> dict[str, Any]:
        """
        Plain-data form used by the model file.
        """
        return {
            "warning_alpha": self.warning_alpha,
            "drift_alpha": self.drift_alpha,
            "lower": self.lower,
            "upper": self.upper,
            "detections": self.detections,
            "total_n": self.total_n,
            "total_sum": self.total_sum,
            "cut_n": self.cut_n,
            "cut_sum": self.cut_sum,
            "post_n": self.post_n,
            "post_sum": self.post_sum,
            "state": self.state.value,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "DriftMonitor":
        """
        Rebuild a monitor written by `to_dict`.
        """
        monitor = cls(float(data["warning_alpha"]), float(data["drift_alpha"]), float(data["lower"]), float(data["upper"]))
        monitor.detections = int(data["detections"])
        monitor.total_n = int(data["total_n"])
        monitor.total_sum = float(data["total_sum"])
        monitor.cut_n = int(data["cut_n"])
        monitor.cut_sum = float(data["cut_sum"])
        monitor.post_n = int(data["post_n"])
        monitor.post_sum = float(data["post_sum"])
        monitor.state = DriftState(data["state"])
        return monitor
