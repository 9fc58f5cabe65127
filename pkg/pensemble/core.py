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
Domain primitives shared by every layer: labelled samples, fixed-size
chunks of them, and running per-feature moments.
"""
from __future__ import absolute_import, division, print_function

__metaclass__ = type  # pylint: disable=invalid-name

import inspect
import logging
from dataclasses import dataclass
from typing import Any, Iterator, Optional, Sequence

import numpy as np
from numpy.typing import NDArray

from pensemble.exceptions import InsufficientDataError

FloatArray = NDArray[np.float64]


@dataclass(frozen=True)
class LabeledSample:
    """
    # Summary

    One observation: a finite feature vector `x` (raw units) and a class
    index `label`.

    ## Raises

    -   `ValueError` if `x` is not a finite 1-D vector or `label` is negative.
    """

    x: FloatArray
    label: int

    def __post_init__(self) -> None:
        x = np.asarray(self.x, dtype=float)
        if x.ndim != 1 or x.size == 0:
            msg = f"{self.__class__.__name__}: x must be a non-empty vector. "
            msg += f"Got shape {x.shape}."
            raise ValueError(msg)
        if not np.all(np.isfinite(x)):
            msg = f"{self.__class__.__name__}: x must be finite. Got {x.tolist()}."
            raise ValueError(msg)
        label = int(self.label)
        if label < 0:
            msg = f"{self.__class__.__name__}: label must be >= 0. Got {label}."
            raise ValueError(msg)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "label", label)

    @property
    def dimension(self) -> int:
        """
        Number of features.
        """
        return int(self.x.size)


@dataclass(frozen=True)
class DataChunk:
    """
    # Summary

    An ordered, non-empty block of samples sharing one dimension.

    ## Usage

    ```python
    chunk = DataChunk.from_arrays(features, labels)
    for sample in chunk:
        ...
    ```
    """

    samples: tuple[LabeledSample, ...]

    def __post_init__(self) -> None:
        samples = tuple(self.samples)
        if len(samples) == 0:
            raise ValueError(f"{self.__class__.__name__}: a chunk holds at least one sample.")
        dimension = samples[0].dimension
        for index, sample in enumerate(samples):
            if sample.dimension != dimension:
                msg = f"{self.__class__.__name__}: sample {index} has dimension "
                msg += f"{sample.dimension}, expected {dimension}."
                raise ValueError(msg)
        object.__setattr__(self, "samples", samples)

    @classmethod
    def from_arrays(cls, features: Any, labels: Any) -> "DataChunk":
        """
        Build a chunk from a (P, n) feature matrix and P labels.
        """
        features = np.atleast_2d(np.asarray(features, dtype=float))
        labels = np.asarray(labels).astype(int).ravel()
        if features.shape[0] != labels.size:
            msg = f"{cls.__name__}.from_arrays: {features.shape[0]} feature rows "
            msg += f"but {labels.size} labels."
            raise ValueError(msg)
        return cls(tuple(LabeledSample(row, int(label)) for row, label in zip(features, labels)))

    def __len__(self) -> int:
        return len(self.samples)

    def __iter__(self) -> Iterator[LabeledSample]:
        return iter(self.samples)

    @property
    def size(self) -> int:
        """
        Chunk size P.
        """
        return len(self.samples)

    @property
    def dimension(self) -> int:
        """
        Feature dimension n shared by all samples.
        """
        return self.samples[0].dimension

    @property
    def features(self) -> FloatArray:
        """
        (P, n) matrix of raw features.
        """
        return np.vstack([sample.x for sample in self.samples])

    @property
    def labels(self) -> NDArray[np.int64]:
        """
        Vector of P labels.
        """
        return np.array([sample.label for sample in self.samples], dtype=np.int64)


class FeatureMoments:
    """
    # Summary

    Running per-feature count, mean, 2nd/3rd/4th central-moment sums and
    range, maintained in one pass.

    The accumulators `m2`, `m3`, `m4` hold sums of centred powers; the
    population moments are `m2 / count` and so on.

    ## Raises

    -   `ValueError` if an update has the wrong dimension or is not finite.
    -   `InsufficientDataError` if `standardize` is called before any update.

    ## Usage

    ```python
    moments = FeatureMoments(dimension=3)
    for sample in chunk:
        moments.update(sample.x)
        z = moments.standardize(sample.x)
    ```
    """

    def __init__(self, dimension: int) -> None:
        self.class_name = self.__class__.__name__
        self.log = logging.getLogger(f"pensemble.{self.class_name}")
        if int(dimension) < 1:
            msg = f"{self.class_name}.__init__: dimension must be >= 1. Got {dimension}."
            raise ValueError(msg)
        self.dimension: int = int(dimension)
        self.count: int = 0
        self.mean: FloatArray = np.zeros(self.dimension)
        self.m2: FloatArray = np.zeros(self.dimension)
        self.m3: FloatArray = np.zeros(self.dimension)
        self.m4: FloatArray = np.zeros(self.dimension)
        self.minimum: FloatArray = np.full(self.dimension, np.inf)
        self.maximum: FloatArray = np.full(self.dimension, -np.inf)

    def _check(self, x: Any) -> FloatArray:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dimension,):
            method_name = inspect.stack()[1][3]
            msg = f"{self.class_name}.{method_name}: "
            msg += f"Expected a vector of length {self.dimension}. Got shape {x.shape}."
            raise ValueError(msg)
        if not np.all(np.isfinite(x)):
            method_name = inspect.stack()[1][3]
            msg = f"{self.class_name}.{method_name}: "
            msg += f"Expected finite values. Got {x.tolist()}."
            raise ValueError(msg)
        return x

    def update(self, x: Any) -> "FeatureMoments":
        """
        # Summary

        Fold one observation into the running moments and return self.

        ## Raises

        -   `ValueError` if `x` has the wrong length or is not finite.
        """
        x = self._check(x)
        previous = self.count
        self.count += 1
        n = float(self.count)
        delta = x - self.mean
        delta_n = delta / n
        delta_n2 = delta_n * delta_n
        term1 = delta * delta_n * previous
        self.mean = self.mean + delta_n
        # m4 and m3 read the pre-update m2/m3
        self.m4 = self.m4 + term1 * delta_n2 * (n * n - 3.0 * n + 3.0) + 6.0 * delta_n2 * self.m2 - 4.0 * delta_n * self.m3
        self.m3 = self.m3 + term1 * delta_n * (n - 2.0) - 3.0 * delta_n * self.m2
        self.m2 = self.m2 + term1
        self.m2 = np.maximum(self.m2, 0.0)
        self.m4 = np.maximum(self.m4, 0.0)
        self.minimum = np.minimum(self.minimum, x)
        self.maximum = np.maximum(self.maximum, x)
        return self

    @property
    def variance(self) -> FloatArray:
        """
        Population variance per feature (zeros before the first update).
        """
        if self.count == 0:
            return np.zeros(self.dimension)
        return self.m2 / self.count

    @property
    def std(self) -> FloatArray:
        """
        Population standard deviation per feature.
        """
        return np.sqrt(self.variance)

    @property
    def third(self) -> FloatArray:
        """
        Third central moment E[(x - mu)^3] per feature.
        """
        if self.count == 0:
            return np.zeros(self.dimension)
        return self.m3 / self.count

    @property
    def fourth(self) -> FloatArray:
        """
        Fourth central moment E[(x - mu)^4] per feature.
        """
        if self.count == 0:
            return np.zeros(self.dimension)
        return self.m4 / self.count

    @property
    def ranges(self) -> FloatArray:
        """
        Observed span b - a per feature (zeros before the first update).
        """
        if self.count == 0:
            return np.zeros(self.dimension)
        return self.maximum - self.minimum

    def standardize(self, x: Any) -> FloatArray:
        """
        # Summary

        Return z = (x - mean) / std with z_j = 0 wherever std_j = 0.

        ## Raises

        -   `InsufficientDataError` if no sample has been observed.
        -   `ValueError` if `x` has the wrong length or is not finite.
        """
        if self.count == 0:
            msg = f"{self.class_name}.standardize: "
            msg += "At least one update is required before standardizing."
            raise InsufficientDataError(msg)
        x = self._check(x)
        std = self.std
        safe = np.where(std > 0.0, std, 1.0)
        return np.where(std > 0.0, (x - self.mean) / safe, 0.0)

    def standardized_ranges(self) -> FloatArray:
        """
        Span of each feature in standardized units, 0 for constant features.
        """
        std = self.std
        safe = np.where(std > 0.0, std, 1.0)
        return np.where(std > 0.0, self.ranges / safe, 0.0)

    def standardized_view(self, mask: Optional[Sequence[float]] = None) -> "FeatureMoments":
        """
        # Summary

        Return the moments of the standardized (and optionally masked)
        stream: mean 0, variance 1, third and fourth moments divided by
        std^3 and std^4.  Constant features and features whose mask weight
        is 0 carry zero moments.
        """
        view = FeatureMoments(self.dimension)
        view.count = self.count
        std = self.std
        keep = std > 0.0
        if mask is not None:
            keep = keep & (np.asarray(mask, dtype=float) > 0.0)
        safe = np.where(keep, std, 1.0)
        count = float(self.count)
        view.mean = np.zeros(self.dimension)
        view.m2 = np.where(keep, count, 0.0)
        view.m3 = np.where(keep, self.m3 / safe**3, 0.0)
        view.m4 = np.where(keep, self.m4 / safe**4, 0.0)
        spans = self.standardized_ranges()
        view.minimum = np.where(keep, (self.minimum - self.mean) / safe, 0.0)
        view.maximum = np.where(keep, view.minimum + spans, 0.0)
        return view

    def copy(self) -> "FeatureMoments":
        """
        Return an independent copy.
        """
        other = FeatureMoments(self.dimension)
        other.count = self.count
        other.mean = self.mean.copy()
        other.m2 = self.m2.copy()
        other.m3 = self.m3.copy()
        other.m4 = self.m4.copy()
        other.minimum = self.minimum.copy()
        other.maximum = self.maximum.copy()
        return other

    def to_dict(self) -> dict[str, Any]:
        """
        Plain-data form used by the model file.
        """
        return {
            "dimension": self.dimension,
            "count": self.count,
            "mean": self.mean,
            "m2": self.m2,
            "m3": self.m3,
            "m4": self.m4,
            "minimum": self.minimum,
            "maximum": self.maximum,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "FeatureMoments":
        """
        Rebuild moments written by `to_dict`.
        """
        moments = cls(int(data["dimension"]))
        moments.count = int(data["count"])
        for key in ("mean", "m2", "m3", "m4", "minimum", "maximum"):
            value = np.asarray(data[key], dtype=float)
            if value.shape != (moments.dimension,):
                msg = f"{cls.__name__}.from_dict: {key} has shape {value.shape}, "
                msg += f"expected ({moments.dimension},)."
                raise ValueError(msg)
            setattr(moments, key, value)
        return moments


def one_hot(label: int, n_classes: int) -> FloatArray:
    """
    Return the one-hot target vector for `label`.
    """
    target = np.zeros(n_classes)
    target[label] = 1.0
    return target
