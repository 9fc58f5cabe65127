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
Tests for the synthetic drifting streams and CSV ingestion.
"""
import numpy as np
import pytest

from pensemble.core import DataChunk
from pensemble.exceptions import ConfigError, DataParseError, StreamExhaustedError
from pensemble.streams import (
    CsvSchema,
    StreamGenerator,
    StreamSpec,
    even_change_points,
    load_csv,
    sea_positive_rate,
    write_csv,
)


def write_text(path, text: str):
    path.write_text(text, encoding="utf-8")
    return path


class TestStreamSpec:
    """Validation of stream descriptions."""

    def test_defaults(self):
        assert StreamSpec("sea").n_features == 3
        assert StreamSpec("10dplane").n_features == 10
        assert StreamSpec("sin").n_features == 2

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"kind": "spiral"},
            {"kind": "line", "n_features": 3},
            {"kind": "sea", "n_classes": 3},
            {"kind": "sea", "noise": 1.0},
            {"kind": "sea", "change_points": (100, 50)},
            {"kind": "sea", "change_points": (0,)},
            {"kind": "hyperplane", "class_ratio": 0.3},
            {"kind": "sea", "class_ratio": 1.0},
            {"kind": "sea", "drift_duration": -1},
        ],
    )
    def test_invalid(self, kwargs):
        with pytest.raises(ConfigError):
            StreamSpec(**kwargs)

    def test_even_change_points(self):
        assert even_change_points(50000, 4) == (12500, 25000, 37500)
        assert even_change_points(100, 1) == ()


class TestSea:
    """Sum-threshold concepts."""

    def test_labels_follow_the_threshold(self):
        chunk = StreamGenerator(StreamSpec("sea", seed=3)).generate(2000)
        expected = (chunk.features[:, 0] + chunk.features[:, 1] <= 8.0).astype(int)
        np.testing.assert_array_equal(chunk.labels, expected)
        assert chunk.features.min() >= 0.0
        assert chunk.features.max() <= 10.0

    def test_abrupt_change(self):
        stream = StreamGenerator(StreamSpec("sea", change_points=(100,), seed=3))
        stream.generate(100)
        chunk = stream.generate(500)
        expected = (chunk.features[:, 0] + chunk.features[:, 1] <= 9.0).astype(int)
        np.testing.assert_array_equal(chunk.labels, expected)

    def test_same_seed_same_stream(self):
        spec = StreamSpec("sea", noise=0.1, change_points=(50,), seed=11)
        first = StreamGenerator(spec).generate(200)
        second = StreamGenerator(spec).generate(200)
        np.testing.assert_array_equal(first.features, second.features)
        np.testing.assert_array_equal(first.labels, second.labels)

    def test_positive_rate(self):
        assert sea_positive_rate(8.0) == pytest.approx(0.32)
        assert sea_positive_rate(15.0) == pytest.approx(0.875)
        assert sea_positive_rate(-1.0) == 0.0
        assert sea_positive_rate(25.0) == 1.0

    def test_prior_over_four_concepts(self):
        total = 100_000
        spec = StreamSpec("sea", change_points=even_change_points(total, 4), seed=5)
        chunk = StreamGenerator(spec).generate(total)
        assert float(chunk.labels.mean()) == pytest.approx(0.355, abs=0.01)

    def test_class_ratio(self):
        chunk = StreamGenerator(StreamSpec("sea", class_ratio=0.2, seed=5)).generate(20_000)
        assert float(chunk.labels.mean()) == pytest.approx(0.2, abs=0.02)

    def test_label_noise(self):
        chunk = StreamGenerator(StreamSpec("sea", noise=0.2, seed=5)).generate(20_000)
        clean = (chunk.features[:, 0] + chunk.features[:, 1] <= 8.0).astype(int)
        assert float(np.mean(chunk.labels != clean)) == pytest.approx(0.2, abs=0.03)


class TestConceptSchedule:
    """Change points, gradual phase-in and recurrence."""

    def test_gradual_blend(self):
        stream = StreamGenerator(StreamSpec("hyperplane", change_points=(1000,), drift_duration=100))
        assert stream.blend(999) == (0, 0, 0.0)
        assert stream.blend(1000) == (0, 1, pytest.approx(0.01))
        assert stream.blend(1099) == (0, 1, 1.0)
        assert stream.blend(5000) == (0, 1, 1.0)

    def test_cyclic_concepts_return(self):
        stream = StreamGenerator(StreamSpec("gaussian", change_points=(10, 20, 30), cyclic=True))
        assert stream.concept_count == 2
        assert stream.blend(25) == (1, 0, 1.0)
        assert stream.blend(35) == (0, 1, 1.0)

    def test_line_boundary(self):
        chunk = StreamGenerator(StreamSpec("line", seed=2)).generate(500)
        expected = (chunk.features[:, 1] >= 1.0 - chunk.features[:, 0]).astype(int)
        np.testing.assert_array_equal(chunk.labels, expected)

    def test_sin_boundary_after_change(self):
        stream = StreamGenerator(StreamSpec("sin", change_points=(10,), seed=2))
        stream.generate(10)
        chunk = stream.generate(300)
        expected = (chunk.features[:, 1] >= -np.sin(chunk.features[:, 0])).astype(int)
        np.testing.assert_array_equal(chunk.labels, expected)

    def test_gaussian_classes(self):
        chunk = StreamGenerator(StreamSpec("gaussian", n_classes=3, n_features=4, seed=2)).generate(600)
        assert set(chunk.labels.tolist()) == {0, 1, 2}
        assert chunk.dimension == 4

    def test_chunks(self):
        chunks = list(StreamGenerator(StreamSpec("10dplane")).chunks(50, 3))
        assert [chunk.size for chunk in chunks] == [50, 50, 50]
        assert all(chunk.dimension == 10 for chunk in chunks)

    def test_generate_needs_a_sample(self):
        with pytest.raises(ValueError):
            StreamGenerator(StreamSpec("sea")).generate(0)


class TestCsv:
    """Loading labelled CSV files."""

    def test_numeric_labels(self, tmp_path):
        rows = "\n".join(f"{index}.5,{-index},{index % 2}" for index in range(10))
        stream = load_csv(write_text(tmp_path / "data.csv", f"a,b,class\n{rows}\n"))
        assert stream.n_features == 2
        assert stream.n_classes == 2
        assert stream.feature_names == ["a", "b"]
        chunk = stream.generate(4)
        assert chunk.features[3].tolist() == [3.5, -3.0]
        assert chunk.labels.tolist() == [0, 1, 0, 1]
        assert stream.remaining == 6

    def test_missing_value_names_the_line(self, tmp_path):
        path = write_text(tmp_path / "data.csv", "a,b,class\n1,2,0\n3,nan,1\n")
        with pytest.raises(DataParseError, match="line 3"):
            load_csv(path)

    def test_empty_cell(self, tmp_path):
        path = write_text(tmp_path / "data.csv", "a,b,class\n1,2,0\n3,4,1\n5,,1\n")
        with pytest.raises(DataParseError, match="line 4"):
            load_csv(path)

    def test_missing_label(self, tmp_path):
        path = write_text(tmp_path / "data.csv", "a,class\n1,0\n2,\n")
        with pytest.raises(DataParseError, match="missing label"):
            load_csv(path)

    def test_categorical_labels(self, tmp_path):
        stream = load_csv(write_text(tmp_path / "data.csv", "a,class\n1,spam\n2,ham\n3,spam\n"))
        assert stream.label_names == ["spam", "ham"]
        assert stream.labels.tolist() == [0, 1, 0]

    def test_declared_label_names(self, tmp_path):
        path = write_text(tmp_path / "data.csv", "a,class\n1,up\n2,down\n")
        stream = load_csv(path, CsvSchema(label_names=["down", "up"]))
        assert stream.labels.tolist() == [1, 0]
        assert stream.n_classes == 2

    def test_strict_unseen_label(self, tmp_path):
        path = write_text(tmp_path / "data.csv", "a,class\n1,up\n2,sideways\n")
        with pytest.raises(DataParseError, match="line 3"):
            load_csv(path, CsvSchema(label_names=["down", "up"], strict=True))

    def test_strict_numeric_label_out_of_range(self, tmp_path):
        path = write_text(tmp_path / "data.csv", "a,class\n1,0\n2,2\n")
        with pytest.raises(DataParseError, match="unseen label 2"):
            load_csv(path, CsvSchema(n_classes=2, strict=True))

    def test_declared_class_count(self, tmp_path):
        stream = load_csv(write_text(tmp_path / "data.csv", "a,class\n1,0\n2,1\n"), CsvSchema(n_classes=4))
        assert stream.n_classes == 4

    def test_exhaustion(self, tmp_path):
        stream = load_csv(write_text(tmp_path / "data.csv", "a,class\n1,0\n2,1\n3,0\n"))
        stream.generate(2)
        with pytest.raises(StreamExhaustedError):
            stream.generate(2)

    @pytest.mark.parametrize("text", ["a\n1\n2\n", "a,class\n", ""])
    def test_malformed(self, tmp_path, text):
        with pytest.raises(DataParseError):
            load_csv(write_text(tmp_path / "data.csv", text))

    def test_unreadable(self, tmp_path):
        with pytest.raises(DataParseError):
            load_csv(tmp_path / "missing.csv")

    def test_write_then_load(self, tmp_path):
        chunk = StreamGenerator(StreamSpec("sinh", seed=4)).generate(50)
        path = tmp_path / "stream.csv"
        assert write_csv(path, [chunk]) == 50
        stream = load_csv(path)
        np.testing.assert_array_equal(stream.features, chunk.features)
        np.testing.assert_array_equal(stream.labels, chunk.labels)
        assert stream.feature_names == ["f1", "f2"]

    def test_reload_is_exact_to_the_last_bit(self, rng, tmp_path):
        features = rng.uniform(-1.0, 1.0, size=(2000, 2))
        chunk = DataChunk.from_arrays(features, rng.integers(0, 2, size=2000))
        path = tmp_path / "uniform.csv"
        write_csv(path, [chunk])
        stream = load_csv(path)
        assert np.array_equal(stream.features, features)

    def test_write_needs_chunks(self, tmp_path):
        with pytest.raises(ValueError):
            write_csv(tmp_path / "x.csv", [])

    def test_write_feature_name_count(self, tmp_path):
        chunk = DataChunk.from_arrays([[1.0, 2.0]], [0])
        with pytest.raises(ValueError):
            write_csv(tmp_path / "x.csv", [chunk], feature_names=["only"])
