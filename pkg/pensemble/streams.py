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
# pylint: disable=too-many-instance-attributes,too-many-arguments,too-many-positional-arguments
"""
Synthetic drifting streams and CSV ingestion.

Every source hands out `DataChunk`s in stream order through
`generate(count)`; a sample is never produced twice.
"""
from __future__ import absolute_import, division, print_function

__metaclass__ = type  # pylint: disable=invalid-name

import inspect
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Optional, Sequence, Union

import numpy as np
import pandas as pd

from pensemble.core import DataChunk, FloatArray
from pensemble.exceptions import ConfigError, DataParseError, StreamExhaustedError

STREAM_KINDS = ("sea", "hyperplane", "gaussian", "line", "sin", "sinh", "10dplane")

DEFAULT_FEATURES = {
    "sea": 3,
    "hyperplane": 4,
    "gaussian": 2,
    "line": 2,
    "sin": 2,
    "sinh": 2,
    "10dplane": 10,
}

SEA_THRESHOLDS = (8.0, 9.0, 7.0, 9.5)

# (a, b) of the boundary x2 = a f(x1) + b, one pair per concept
BOUNDARY_COEFFICIENTS = {
    "line": ((-1.0, 1.0), (1.0, 0.0)),
    "sin": ((1.0, 0.0), (-1.0, 0.0)),
    "sinh": ((1.0, 0.0), (-1.0, 0.0)),
}

# sampling box of (x1, x2)
BOUNDARY_DOMAINS = {
    "line": ((0.0, 1.0), (0.0, 1.0)),
    "sin": ((0.0, 2.0 * math.pi), (-1.0, 1.0)),
    "sinh": ((-2.0, 2.0), (-4.0, 4.0)),
}


def even_change_points(total: int, segments: int) -> tuple[int, ...]:
    """
    Change points splitting `total` samples into `segments` equal parts.
    """
    if segments < 2 or total < segments:
        return ()
    return tuple(total * index // segments for index in range(1, segments))


@dataclass
class StreamSpec:
    """
    # Summary

    Declarative description of a synthetic stream.

    -   `kind`: one of `STREAM_KINDS`.
    -   `n_features`: defaults per kind (SEA 3, hyperplane 4, 10dplane 10,
        otherwise 2).
    -   `n_classes`: 2 for every kind except `gaussian`, which accepts more.
    -   `noise`: probability of flipping a label to another class.
    -   `change_points`: sample indices where the next concept starts.
    -   `drift_duration`: samples over which a change is phased in
        (0 = abrupt).
    -   `cyclic`: concepts wrap around so that old ones return.
    -   `class_ratio`: target frequency of class 1 (SEA only), reached by
        rejecting surplus samples of the over-represented class.
    -   `seed`: all randomness derives from it.

    ## Raises

    -   `ConfigError` for an unknown kind or an invalid field.
    """

    kind: str
    n_features: Optional[int] = None
    n_classes: int = 2
    noise: float = 0.0
    change_points: tuple[int, ...] = field(default_factory=tuple)
    drift_duration: int = 0
    cyclic: bool = False
    class_ratio: Optional[float] = None
    seed: int = 0

    def __post_init__(self) -> None:
        name = self.__class__.__name__
        if self.kind not in STREAM_KINDS:
            msg = f"{name}: Unknown stream kind {self.kind!r}. "
            msg += f"Expected one of {', '.join(STREAM_KINDS)}."
            raise ConfigError(msg)
        if self.n_features is None:
            self.n_features = DEFAULT_FEATURES[self.kind]
        if self.kind in BOUNDARY_COEFFICIENTS and self.n_features != 2:
            raise ConfigError(f"{name}: {self.kind} streams are 2-D. Got n_features {self.n_features}.")
        if self.kind == "sea" and self.n_features < 2:
            raise ConfigError(f"{name}: sea needs n_features >= 2. Got {self.n_features}.")
        if self.n_features < 1:
            raise ConfigError(f"{name}: n_features must be >= 1. Got {self.n_features}.")
        if self.n_classes < 2 or (self.kind != "gaussian" and self.n_classes != 2):
            raise ConfigError(f"{name}: {self.kind} supports n_classes = 2 (gaussian: >= 2). Got {self.n_classes}.")
        if not 0.0 <= self.noise < 1.0:
            raise ConfigError(f"{name}: noise must be in [0, 1). Got {self.noise}.")
        points = tuple(int(point) for point in self.change_points)
        if any(point <= 0 for point in points) or list(points) != sorted(set(points)):
            raise ConfigError(f"{name}: change_points must be positive and strictly increasing. Got {list(points)}.")
        self.change_points = points
        if self.drift_duration < 0:
            raise ConfigError(f"{name}: drift_duration must be >= 0. Got {self.drift_duration}.")
        if self.class_ratio is not None:
            if self.kind != "sea":
                raise ConfigError(f"{name}: class_ratio is only supported for sea streams.")
            if not 0.0 < self.class_ratio < 1.0:
                raise ConfigError(f"{name}: class_ratio must be in (0, 1). Got {self.class_ratio}.")


class StreamGenerator:
    """
    # Summary

    Stateful, seeded sample source for a `StreamSpec`.

    Two generators built from equal specs produce identical sequences.

    ## Usage

    ```python
    stream = StreamGenerator(StreamSpec("sea", change_points=(12500, 25000, 37500)))
    chunk = stream.generate(250)
    ```
    """

    def __init__(self, spec: StreamSpec) -> None:
        self.class_name = self.__class__.__name__
        self.log = logging.getLogger(f"pensemble.{self.class_name}")
        self.spec = spec
        self.n_features: int = int(spec.n_features or DEFAULT_FEATURES[spec.kind])
        self.n_classes: int = spec.n_classes
        concept_seed, sample_seed = np.random.SeedSequence(spec.seed).spawn(2)
        concept_rng = np.random.default_rng(concept_seed)
        self.rng = np.random.default_rng(sample_seed)
        self.position: int = 0
        self.concept_count = self._concept_count()
        self._hyperplanes: Optional[FloatArray] = None
        self._means: Optional[FloatArray] = None
        self._stds: Optional[FloatArray] = None
        if spec.kind in ("hyperplane", "10dplane"):
            self._hyperplanes = concept_rng.uniform(0.0, 1.0, size=(self.concept_count, self.n_features))
        if spec.kind == "gaussian":
            self._means = concept_rng.uniform(-3.0, 3.0, size=(self.concept_count, self.n_classes, self.n_features))
            self._stds = concept_rng.uniform(0.5, 1.5, size=(self.concept_count, self.n_classes))

        msg = f"ENTERED {self.class_name}(): kind {spec.kind}, seed {spec.seed}, "
        msg += f"concepts {self.concept_count}"
        self.log.debug(msg)

    def _concept_count(self) -> int:
        if self.spec.kind == "sea":
            return len(SEA_THRESHOLDS)
        if self.spec.kind in BOUNDARY_COEFFICIENTS:
            return 2
        if self.spec.cyclic:
            return 2
        return len(self.spec.change_points) + 1

    def _concept(self, index: int) -> int:
        if self.spec.cyclic:
            return index % self.concept_count
        return min(index, self.concept_count - 1)

    def blend(self, position: int) -> tuple[int, int, float]:
        """
        # Summary

        Concepts active at sample `position` as `(previous, next, progress)`.
        Progress rises linearly from 0 to 1 over `drift_duration` samples
        after each change point.
        """
        passed = sum(1 for point in self.spec.change_points if point <= position)
        if passed == 0:
            return 0, 0, 0.0
        start = self.spec.change_points[passed - 1]
        duration = self.spec.drift_duration
        progress = 1.0 if duration <= 0 else min(1.0, (position - start + 1) / duration)
        return self._concept(passed - 1), self._concept(passed), progress

    def _pick(self, position: int) -> int:
        previous, following, progress = self.blend(position)
        if progress <= 0.0 or previous == following:
            return following if progress >= 1.0 else previous
        return following if self.rng.random() < progress else previous

    def _flip(self, label: int) -> int:
        if self.spec.noise > 0.0 and self.rng.random() < self.spec.noise:
            others = [other for other in range(self.n_classes) if other != label]
            return int(others[int(self.rng.integers(len(others)))])
        return label

    def _sea(self, position: int) -> tuple[FloatArray, int]:
        threshold = SEA_THRESHOLDS[self._pick(position)]
        ratio = self.spec.class_ratio
        while True:
            x = self.rng.uniform(0.0, 10.0, size=self.n_features)
            label = int(x[0] + x[1] <= threshold)
            if ratio is None:
                break
            prior = sea_positive_rate(threshold)
            if prior > ratio and label == 1:
                keep = ratio * (1.0 - prior) / (prior * (1.0 - ratio))
            elif prior < ratio and label == 0:
                keep = (1.0 - ratio) * prior / (ratio * (1.0 - prior))
            else:
                keep = 1.0
            if self.rng.random() < keep:
                break
        return x, label

    def _hyperplane(self, position: int) -> tuple[FloatArray, int]:
        assert self._hyperplanes is not None
        previous, following, progress = self.blend(position)
        weights = (1.0 - progress) * self._hyperplanes[previous] + progress * self._hyperplanes[following]
        x = self.rng.uniform(0.0, 1.0, size=self.n_features)
        label = int(float(weights @ x) >= 0.5 * float(weights.sum()))
        return x, label

    def _gaussian(self, position: int) -> tuple[FloatArray, int]:
        assert self._means is not None and self._stds is not None
        previous, following, progress = self.blend(position)
        label = int(self.rng.integers(self.n_classes))
        mean = (1.0 - progress) * self._means[previous, label] + progress * self._means[following, label]
        std = (1.0 - progress) * self._stds[previous, label] + progress * self._stds[following, label]
        return self.rng.normal(mean, std, size=self.n_features), label

    def _boundary(self, position: int) -> tuple[FloatArray, int]:
        kind = self.spec.kind
        previous, following, progress = self.blend(position)
        coefficients = BOUNDARY_COEFFICIENTS[kind]
        a = (1.0 - progress) * coefficients[previous][0] + progress * coefficients[following][0]
        b = (1.0 - progress) * coefficients[previous][1] + progress * coefficients[following][1]
        (low1, high1), (low2, high2) = BOUNDARY_DOMAINS[kind]
        x = np.array([self.rng.uniform(low1, high1), self.rng.uniform(low2, high2)])
        if kind == "line":
            curve = x[0]
        elif kind == "sin":
            curve = math.sin(x[0])
        else:
            curve = math.sinh(x[0])
        return x, int(x[1] >= a * curve + b)

    def sample(self) -> tuple[FloatArray, int]:
        """
        Draw the next `(x, label)` pair.
        """
        kind = self.spec.kind
        if kind == "sea":
            x, label = self._sea(self.position)
        elif kind in ("hyperplane", "10dplane"):
            x, label = self._hyperplane(self.position)
        elif kind == "gaussian":
            x, label = self._gaussian(self.position)
        else:
            x, label = self._boundary(self.position)
        self.position += 1
        return x, self._flip(label)

    def generate(self, count: int) -> DataChunk:
        """
        # Summary

        Return the next `count` samples as one chunk.

        ## Raises

        -   `ValueError` if `count` < 1.
        """
        if count < 1:
            raise ValueError(f"{self.class_name}.generate: count must be >= 1. Got {count}.")
        drawn = [self.sample() for _ in range(count)]
        return DataChunk.from_arrays(np.vstack([x for x, _ in drawn]), [label for _, label in drawn])

    def chunks(self, size: int, count: int) -> Iterator[DataChunk]:
        """
        Yield `count` consecutive chunks of `size` samples.
        """
        for _ in range(count):
            yield self.generate(size)


def sea_positive_rate(threshold: float) -> float:
    """
    P(x1 + x2 <= threshold) for x1, x2 uniform on [0, 10].
    """
    if threshold <= 0.0:
        return 0.0
    if threshold <= 10.0:
        return threshold**2 / 200.0
    if threshold < 20.0:
        return 1.0 - (20.0 - threshold) ** 2 / 200.0
    return 1.0


@dataclass
class CsvSchema:
    """
    # Summary

    How to read a labelled CSV file.

    -   `label_names`: class names in index order.  Without them integer
        labels are used as-is and other labels get indices in order of
        first appearance.
    -   `n_classes`: declared number of classes.
    -   `strict`: reject labels outside `label_names` / `0..n_classes-1`.
    """

    label_names: Optional[Sequence[str]] = None
    n_classes: Optional[int] = None
    strict: bool = False


class CsvStream:
    """
    # Summary

    A labelled CSV file served in file order, one chunk at a time.

    ## Raises

    -   `StreamExhaustedError` from `generate` when fewer samples remain
        than requested.
    """

    def __init__(self, path: Path, features: FloatArray, labels: np.ndarray, label_names: list[str], n_classes: int, feature_names: list[str]) -> None:
        self.class_name = self.__class__.__name__
        self.log = logging.getLogger(f"pensemble.{self.class_name}")
        self.path = path
        self.features = features
        self.labels = labels
        self.label_names = label_names
        self.n_classes = n_classes
        self.feature_names = feature_names
        self.n_features = int(features.shape[1])
        self.position = 0

        msg = f"ENTERED {self.class_name}(): {path}, rows {len(labels)}, "
        msg += f"features {self.n_features}, classes {self.n_classes}"
        self.log.debug(msg)

    @property
    def remaining(self) -> int:
        """
        Samples not yet handed out.
        """
        return int(self.labels.size) - self.position

    def generate(self, count: int) -> DataChunk:
        """
        Return the next `count` rows as one chunk.
        """
        if count < 1:
            raise ValueError(f"{self.class_name}.generate: count must be >= 1. Got {count}.")
        if count > self.remaining:
            msg = f"{self.class_name}.generate: "
            msg += f"{self.path} has {self.remaining} sample(s) left, {count} requested."
            raise StreamExhaustedError(msg)
        start = self.position
        self.position += count
        return DataChunk.from_arrays(self.features[start : self.position], self.labels[start : self.position])


def _parse_labels(path: Path, cells: pd.Series, schema: CsvSchema) -> tuple[np.ndarray, list[str], int]:
    values = ["" if pd.isna(cell) else str(cell).strip() for cell in cells.tolist()]
    for row, value in enumerate(values):
        if not value:
            raise DataParseError(f"load_csv: {path} line {row + 2}: missing label.")
    names = [str(name) for name in schema.label_names] if schema.label_names is not None else None
    labels = np.empty(len(values), dtype=np.int64)
    if names is not None:
        index = {name: position for position, name in enumerate(names)}
        for row, value in enumerate(values):
            if value not in index:
                if schema.strict:
                    msg = f"load_csv: {path} line {row + 2}: "
                    msg += f"unseen label {value!r}. Known labels: {', '.join(names)}."
                    raise DataParseError(msg)
                index[value] = len(names)
                names.append(value)
            labels[row] = index[value]
        return labels, names, max(len(names), schema.n_classes or 0)

    numeric = pd.to_numeric(pd.Series(values), errors="coerce")
    if values and numeric.notna().all() and (numeric == numeric.round()).all():
        for row, value in enumerate(numeric.astype(np.int64).tolist()):
            if value < 0:
                raise DataParseError(f"load_csv: {path} line {row + 2}: negative label {value}.")
            if schema.strict and schema.n_classes is not None and value >= schema.n_classes:
                msg = f"load_csv: {path} line {row + 2}: "
                msg += f"unseen label {value}. Expected 0..{schema.n_classes - 1}."
                raise DataParseError(msg)
            labels[row] = value
        count = max(int(labels.max()) + 1 if labels.size else 0, schema.n_classes or 0, 2)
        return labels, [str(label) for label in range(count)], count

    if schema.strict:
        row = next(row for row, value in enumerate(values) if pd.isna(numeric.iloc[row]))
        msg = f"load_csv: {path} line {row + 2}: "
        msg += f"non-integer label {values[row]!r} in strict mode without label names."
        raise DataParseError(msg)
    index = {}
    for row, value in enumerate(values):
        labels[row] = index.setdefault(value, len(index))
    names = list(index)
    return labels, names, max(len(names), schema.n_classes or 0, 2)


def load_csv(path: Union[str, Path], schema: Optional[CsvSchema] = None) -> CsvStream:
    """
    # Summary

    Read a comma-separated UTF-8 file with a header row whose last column
    is the class label.  Rows keep file order.

    ## Raises

    -   `DataParseError` for an unreadable or malformed file, a missing or
        non-finite feature cell, or (in strict mode) an unseen label.  The
        message names the offending line.
    """
    path = Path(path)
    schema = schema or CsvSchema()
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False, encoding="utf-8", skipinitialspace=True)
    except (OSError, UnicodeDecodeError, pd.errors.ParserError, pd.errors.EmptyDataError) as error:
        msg = f"load_csv: Unable to read {path}. Error detail: {error}"
        raise DataParseError(msg) from error
    if frame.shape[1] < 2:
        msg = f"load_csv: {path} needs at least one feature column and a label column. "
        msg += f"Got columns {list(frame.columns)}."
        raise DataParseError(msg)
    if frame.shape[0] == 0:
        raise DataParseError(f"load_csv: {path} has a header but no rows.")

    feature_names = [str(name) for name in frame.columns[:-1]]
    features = np.empty((frame.shape[0], len(feature_names)))
    for column, name in enumerate(feature_names):
        # to_numeric only locates bad cells; it is not correctly rounded
        checked = pd.to_numeric(frame[name], errors="coerce").to_numpy(dtype=float)
        bad = np.flatnonzero(~np.isfinite(checked))
        if bad.size:
            row = int(bad[0])
            msg = f"load_csv: {path} line {row + 2}: "
            msg += f"column {name!r} has non-numeric or missing value {frame[name].iloc[row]!r}."
            raise DataParseError(msg)
        features[:, column] = frame[name].to_numpy(dtype=object).astype(float)
    labels, names, n_classes = _parse_labels(path, frame.iloc[:, -1], schema)
    return CsvStream(path, features, labels, names, n_classes, feature_names)


def write_csv(path: Union[str, Path], chunks: Iterable[DataChunk], feature_names: Optional[Sequence[str]] = None) -> int:
    """
    # Summary

    Write chunks as CSV (header, features, integer label last) with 17
    significant digits so that `load_csv` reproduces every value.  Returns
    the number of rows written.
    """
    method_name = inspect.stack()[0][3]
    chunks = list(chunks)
    if not chunks:
        raise ValueError(f"{method_name}: at least one chunk is required.")
    features = np.vstack([chunk.features for chunk in chunks])
    labels = np.concatenate([chunk.labels for chunk in chunks])
    names = list(feature_names) if feature_names is not None else [f"f{index + 1}" for index in range(features.shape[1])]
    if len(names) != features.shape[1]:
        msg = f"{method_name}: {len(names)} feature names for {features.shape[1]} features."
        raise ValueError(msg)
    frame = pd.DataFrame(features, columns=names)
    frame["class"] = labels
    frame.to_csv(Path(path), index=False, float_format="%.17g", encoding="utf-8")
    return int(labels.size)
