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
Tests for per-stamp metric collection and output files.
"""
import json
import math

import pandas as pd
import pytest

from pensemble.results import MetricsRow, Results


def row(stamp: int, rate: float, train_accuracy: float = 0.5) -> MetricsRow:
    return MetricsRow(
        stamp=stamp,
        classification_rate=rate,
        rules=2 + stamp,
        input_attributes=3,
        parameters=40,
        ensemble_size=1,
        seconds=0.01,
        drift_state="stable",
        train_accuracy=train_accuracy,
        mask="0 1 2",
    )


@pytest.fixture
def results() -> Results:
    results = Results()
    results.add_row(row(1, 0.8, math.nan))
    results.add_row(row(2, 0.9))
    results.add_row(row(3, 1.0, 0.7))
    return results


class TestResults:
    """Collection and summary."""

    def test_add_row_type(self):
        with pytest.raises(TypeError):
            Results().add_row({"stamp": 1})  # type: ignore[arg-type]

    def test_rows_are_a_copy(self, results):
        results.rows.clear()
        assert len(results.rows) == 3

    def test_summary(self, results):
        summary = results.summary()
        assert summary["stamps"] == 3
        rate = summary["criteria"]["classification_rate"]
        assert rate["mean"] == pytest.approx(0.9)
        assert rate["std"] == pytest.approx(math.sqrt(0.02 / 3))
        assert summary["criteria"]["rules"]["mean"] == pytest.approx(4.0)
        assert summary["criteria"]["train_accuracy"]["mean"] == pytest.approx(0.6)

    def test_empty_summary(self):
        summary = Results().summary()
        assert summary["stamps"] == 0
        assert math.isnan(summary["criteria"]["classification_rate"]["mean"])

    def test_metadata(self, results):
        metadata = {"stream": "sea"}
        results.metadata = metadata
        metadata["stream"] = "changed"
        assert results.metadata == {"stream": "sea"}
        with pytest.raises(TypeError):
            results.metadata = ["sea"]  # type: ignore[assignment]


class TestOutputFiles:
    """metrics.csv and summary.json."""

    def test_metrics_csv(self, results, tmp_path):
        path = results.write_metrics(tmp_path / "run" / "metrics.csv")
        frame = pd.read_csv(path)
        assert frame["stamp"].tolist() == [1, 2, 3]
        assert frame["classification_rate"].tolist() == [0.8, 0.9, 1.0]
        assert frame["mask"].tolist() == ["0 1 2"] * 3

    def test_summary_json_has_no_nan(self, tmp_path):
        results = Results()
        results.add_row(row(1, 0.8, math.nan))
        path = results.write_summary(tmp_path / "summary.json")
        data = json.loads(path.read_text(encoding="utf-8"))
        assert data["criteria"]["train_accuracy"] == {"mean": None, "std": None}
        assert data["criteria"]["classification_rate"]["mean"] == 0.8
