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
Exposes public class Results to collect per-stamp metrics of a run and
write them out.
"""
from __future__ import absolute_import, division, print_function

__metaclass__ = type  # pylint: disable=invalid-name

import copy
import inspect
import json
import logging
import math
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Any, Union

import pandas as pd

# excluded when comparing runs for determinism
TIMING_COLUMNS = ("seconds",)

# per-stamp criteria aggregated by Results.summary()
SUMMARY_CRITERIA = (
    "classification_rate",
    "rules",
    "input_attributes",
    "parameters",
    "ensemble_size",
    "seconds",
    "train_accuracy",
)


@dataclass(frozen=True)
class MetricsRow:
    """
    # Summary

    Evaluation criteria of one time stamp.

    -   `classification_rate`: accuracy on the test block, in [0, 1].
    -   `rules`: active fuzzy rules over all experts.
    -   `input_attributes`: features selected by the mask.
    -   `parameters`: network parameters over all rules.
    -   `ensemble_size`: number of experts M.
    -   `seconds`: wall-clock time of training plus testing.
    -   `drift_state`: most severe detector state seen while training.
    -   `train_accuracy`: prequential accuracy on the training block (NaN
        on the first stamp, which has no expert to predict with).
    -   `mask`: selected feature indices, space separated.
    """

    stamp: int
    classification_rate: float
    rules: int
    input_attributes: int
    parameters: int
    ensemble_size: int
    seconds: float
    drift_state: str
    train_accuracy: float
    mask: str


class Results:
    """
    # Summary

    Collect `MetricsRow`s across the stamps of a run, summarize them and
    write the metrics CSV and summary JSON.

    ## Raises

    -   `TypeError` if `add_row` receives anything but a `MetricsRow`.

    ## Usage

    ```python
    results = Results()
    results.add_row(row)
    results.write_metrics(Path("out/metrics.csv"))
    results.write_summary(Path("out/summary.json"))
    ```
    """

    def __init__(self) -> None:
        self.class_name: str = self.__class__.__name__
        self.log: logging.Logger = logging.getLogger(f"pensemble.{self.class_name}")
        self._rows: list[MetricsRow] = []
        self._metadata: dict[str, Any] = {}

        msg = f"ENTERED {self.class_name}():"
        self.log.debug(msg)

    def add_row(self, value: MetricsRow) -> None:
        """
        # Summary

        Append the metrics of one stamp.

        ## Raises

        -   `TypeError`: if value is not a MetricsRow
        """
        method_name: str = inspect.stack()[0][3]
        if not isinstance(value, MetricsRow):
            msg = f"{self.class_name}.{method_name}: "
            msg += f"value must be a MetricsRow. Got {type(value).__name__}."
            raise TypeError(msg)
        self._rows.append(value)
        msg = f"{self.class_name}.{method_name}: stamp {value.stamp}, "
        msg += f"rate {value.classification_rate:.4f}, size {value.ensemble_size}"
        self.log.debug(msg)

    @property
    def rows(self) -> list[MetricsRow]:
        """
        The rows added so far, in stamp order.
        """
        return list(self._rows)

    @property
    def metadata(self) -> dict[str, Any]:
        """
        # Summary

        Free-form description of the run (config, stream) written into the
        summary.

        ## Raises

        -   `TypeError`: if value is not a dict
        """
        return copy.deepcopy(self._metadata)

    @metadata.setter
    def metadata(self, value: dict[str, Any]) -> None:
        method_name: str = inspect.stack()[0][3]
        if not isinstance(value, dict):
            msg = f"{self.class_name}.{method_name}: "
            msg += f"value must be a dict. Got {type(value).__name__}."
            raise TypeError(msg)
        self._metadata = copy.deepcopy(value)

    def frame(self) -> pd.DataFrame:
        """
        The rows as a DataFrame, one column per field.
        """
        columns = [item.name for item in fields(MetricsRow)]
        return pd.DataFrame([asdict(row) for row in self._rows], columns=columns)

    def summary(self) -> dict[str, Any]:
        """
        # Summary

        Mean and (population) standard deviation of each criterion over the
        stamps, plus the stamp count and metadata.  NaN entries (the first
        stamp's training accuracy) are skipped.
        """
        frame = self.frame()
        criteria: dict[str, dict[str, float]] = {}
        for name in SUMMARY_CRITERIA:
            values = frame[name].astype(float).dropna() if not frame.empty else pd.Series(dtype=float)
            mean = float(values.mean()) if len(values) else math.nan
            std = float(values.std(ddof=0)) if len(values) else math.nan
            criteria[name] = {"mean": mean, "std": std}
        return {"stamps": len(self._rows), "criteria": criteria, "metadata": self.metadata}

    def write_metrics(self, path: Union[str, Path]) -> Path:
        """
        Write one CSV row per stamp.  Returns the path written.
        """
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        self.frame().to_csv(path, index=False, float_format="%.17g", encoding="utf-8")
        self.log.debug(f"{self.class_name}.write_metrics: {path}")
        return path

    def write_summary(self, path: Union[str, Path]) -> Path:
        """
        Write `summary()` as JSON.  NaN values become null.
        """
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(_nan_to_none(self.summary()), indent=4, sort_keys=True) + "\n", encoding="utf-8")
        self.log.debug(f"{self.class_name}.write_summary: {path}")
        return path


def _nan_to_none(value: Any) -> Any:
    if isinstance(value, dict):
        return {key: _nan_to_none(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_nan_to_none(item) for item in value]
    if isinstance(value, float) and math.isnan(value):
        return None
    return value
