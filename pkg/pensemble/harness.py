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
# pylint: disable=too-many-instance-attributes,too-many-public-methods
"""
Run the chunked train/test protocol, the one-at-a-time parameter sweep
and model inspection.
"""
from __future__ import absolute_import, division, print_function

__metaclass__ = type  # pylint: disable=invalid-name

import copy
import inspect
import json
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Optional, Union

import numpy as np
import pandas as pd

from pensemble.config import EnsembleConfig
from pensemble.ensemble import Pensemble
from pensemble.exceptions import ConfigError, StreamExhaustedError
from pensemble.model_io import load_model, save_model
from pensemble.results import MetricsRow, Results
from pensemble.streams import STREAM_KINDS, CsvSchema, CsvStream, StreamGenerator, StreamSpec, even_change_points, load_csv

# name: (stream kind, stamps, train samples, test samples)
PRESETS: dict[str, tuple[str, int, int, int]] = {
    "sea": ("sea", 200, 250, 250),
    "line": ("line", 10, 200, 50),
    "sin": ("sin", 10, 200, 50),
    "sinh": ("sinh", 10, 200, 50),
    "10dplane": ("10dplane", 10, 100, 20),
    "gaussian": ("gaussian", 100, 400, 7200),
    "hyperplane": ("hyperplane", 100, 1000, 250),
}


class RunConfig:
    """
    # Summary

    Everything one experiment needs: the data source, the stamp schedule,
    stream options, the output directory and an `EnsembleConfig`.

    ## Raises

    -   `ConfigError` from `validate()` if the source is ambiguous or
        missing, or a size is below 1.
    -   `TypeError` / `ValueError` from property setters.

    ## Usage

    ```python
    run_config = RunConfig()
    run_config.apply_preset("sea")
    run_config.seed = 7
    run_config.ensemble.set_value("alpha_d", 0.003)
    ```
    """

    def __init__(self) -> None:
        self.class_name = self.__class__.__name__
        self.log = logging.getLogger(f"pensemble.{self.class_name}")

        self._stream: Optional[str] = None
        self._csv_path: Optional[Path] = None
        self._stamps: int = 10
        self._train_size: int = 200
        self._test_size: int = 50
        self._seed: int = 0
        self._output: Optional[Path] = None
        self.n_features: Optional[int] = None
        self.n_classes: int = 2
        self.noise: float = 0.0
        self.change_points: Optional[tuple[int, ...]] = None
        self.drift_duration: Optional[int] = None
        self.cyclic: bool = False
        self.class_ratio: Optional[float] = None
        self.label_names: Optional[list[str]] = None
        self.csv_classes: Optional[int] = None
        self.strict: bool = False
        self.ensemble: EnsembleConfig = EnsembleConfig()

        msg = f"ENTERED {self.class_name}()"
        self.log.debug(msg)

    def _positive_int(self, name: str, value: Any) -> int:
        if isinstance(value, bool) or not isinstance(value, int):
            msg = f"{self.class_name}.{name}: "
            msg += f"Expected an int. Got {type(value).__name__} {value!r}."
            raise TypeError(msg)
        if value < 1:
            msg = f"{self.class_name}.{name}: Expected an int >= 1. Got {value}."
            raise ValueError(msg)
        return value

    @property
    def stream(self) -> Optional[str]:
        """
        Synthetic stream kind, or None when reading a CSV file.
        """
        return self._stream

    @stream.setter
    def stream(self, value: Optional[str]) -> None:
        if value is not None and value not in STREAM_KINDS:
            msg = f"{self.class_name}.stream: "
            msg += f"Expected one of {', '.join(STREAM_KINDS)}. Got {value!r}."
            raise ValueError(msg)
        self._stream = value

    @property
    def csv_path(self) -> Optional[Path]:
        """
        Labelled CSV file, or None when generating a stream.
        """
        return self._csv_path

    @csv_path.setter
    def csv_path(self, value: Optional[Union[str, Path]]) -> None:
        self._csv_path = None if value is None else Path(value)

    @property
    def stamps(self) -> int:
        """
        Number of time stamps TS.
        """
        return self._stamps

    @stamps.setter
    def stamps(self, value: int) -> None:
        self._stamps = self._positive_int("stamps", value)

    @property
    def train_size(self) -> int:
        """
        Training samples per stamp TRS.
        """
        return self._train_size

    @train_size.setter
    def train_size(self, value: int) -> None:
        self._train_size = self._positive_int("train_size", value)

    @property
    def test_size(self) -> int:
        """
        Testing samples per stamp TES.
        """
        return self._test_size

    @test_size.setter
    def test_size(self, value: int) -> None:
        self._test_size = self._positive_int("test_size", value)

    @property
    def seed(self) -> int:
        """
        Seed of the stream generator; also recorded in the ensemble config.
        """
        return self._seed

    @seed.setter
    def seed(self, value: int) -> None:
        if isinstance(value, bool) or not isinstance(value, int) or value < 0:
            msg = f"{self.class_name}.seed: Expected an int >= 0. Got {value!r}."
            raise ValueError(msg)
        self._seed = value
        self.ensemble.seed = value

    @property
    def output(self) -> Optional[Path]:
        """
        Directory receiving metrics.csv, summary.json and model.json.
        """
        return self._output

    @output.setter
    def output(self, value: Optional[Union[str, Path]]) -> None:
        self._output = None if value is None else Path(value)

    def apply_preset(self, name: str) -> None:
        """
        # Summary

        Set the stream kind and stamp schedule of a named preset.

        ## Raises

        -   `ConfigError` for an unknown preset.
        """
        if name not in PRESETS:
            msg = f"{self.class_name}.apply_preset: "
            msg += f"Unknown preset {name!r}. Expected one of {', '.join(PRESETS)}."
            raise ConfigError(msg)
        kind, stamps, train_size, test_size = PRESETS[name]
        self.stream = kind
        self.csv_path = None
        self.stamps = stamps
        self.train_size = train_size
        self.test_size = test_size

    @property
    def total_samples(self) -> int:
        """
        Samples consumed by a complete run.
        """
        return self.stamps * (self.train_size + self.test_size)

    def validate(self) -> None:
        """
        # Summary

        Check the configuration as a whole.

        ## Raises

        -   `ConfigError` unless exactly one of `stream` / `csv_path` is set.
        """
        if (self.stream is None) == (self.csv_path is None):
            msg = f"{self.class_name}.validate: "
            msg += "Exactly one of stream or csv_path must be set. "
            msg += f"Got stream {self.stream!r}, csv_path {self.csv_path}."
            raise ConfigError(msg)

    def stream_spec(self) -> StreamSpec:
        """
        # Summary

        `StreamSpec` of the configured synthetic stream.  Unless given,
        change points split the run evenly (four SEA concepts, otherwise one
        change halfway) and the drift duration is abrupt for SEA, a tenth of
        the run for line/sin/sinh and a quarter for the rest.
        """
        if self.stream is None:
            raise ConfigError(f"{self.class_name}.stream_spec: no stream kind configured.")
        total = self.total_samples
        change_points = self.change_points
        if change_points is None:
            change_points = even_change_points(total, 4 if self.stream == "sea" else 2)
        duration = self.drift_duration
        if duration is None:
            if self.stream == "sea":
                duration = 0
            elif self.stream in ("line", "sin", "sinh"):
                duration = total // 10
            else:
                duration = total // 4
        return StreamSpec(
            kind=self.stream,
            n_features=self.n_features,
            n_classes=self.n_classes,
            noise=self.noise,
            change_points=tuple(change_points),
            drift_duration=duration,
            cyclic=self.cyclic,
            class_ratio=self.class_ratio,
            seed=self.seed,
        )

    def to_dict(self) -> dict[str, Any]:
        """
        Plain-data form, accepted by `from_dict`.
        """
        return {
            "stream": self.stream,
            "csv": None if self.csv_path is None else str(self.csv_path),
            "stamps": self.stamps,
            "train": self.train_size,
            "test": self.test_size,
            "seed": self.seed,
            "output": None if self.output is None else str(self.output),
            "n_features": self.n_features,
            "n_classes": self.n_classes,
            "noise": self.noise,
            "change_points": None if self.change_points is None else list(self.change_points),
            "drift_duration": self.drift_duration,
            "cyclic": self.cyclic,
            "class_ratio": self.class_ratio,
            "label_names": self.label_names,
            "csv_classes": self.csv_classes,
            "strict": self.strict,
            "config": self.ensemble.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "RunConfig":
        """
        # Summary

        Build a run configuration from a dict such as a sweep grid's `base`.
        A `preset` key is applied first; other keys override it.

        ## Raises

        -   `ConfigError` for unknown keys or invalid values.
        """
        run_config = cls()
        data = dict(data)
        try:
            if "preset" in data:
                run_config.apply_preset(data.pop("preset"))
            for key, value in data.items():
                if key == "config":
                    for name, item in dict(value).items():
                        run_config.ensemble.set_value(name, item)
                elif key == "csv":
                    run_config.csv_path = value
                    if value is not None:
                        run_config.stream = None
                elif key == "train":
                    run_config.train_size = value
                elif key == "test":
                    run_config.test_size = value
                elif key == "change_points":
                    run_config.change_points = None if value is None else tuple(int(point) for point in value)
                elif key in ("stream", "stamps", "seed", "output", "n_features", "n_classes", "noise", "drift_duration", "cyclic", "class_ratio", "label_names", "csv_classes", "strict"):
                    setattr(run_config, key, value)
                else:
                    raise ConfigError(f"{cls.__name__}.from_dict: Unknown run key {key!r}.")
        except (TypeError, ValueError) as error:
            if isinstance(error, ConfigError):
                raise
            raise ConfigError(f"{cls.__name__}.from_dict: {error}") from error
        return run_config

    def copy(self) -> "RunConfig":
        """
        Return an independent copy.
        """
        other = copy.copy(self)
        other.ensemble = self.ensemble.copy()
        return other


class ExperimentRunner:
    """
    # Summary

    Run the stamp protocol: per stamp, train on TRS samples
    (`Pensemble.process_chunk`), then measure the classification rate on
    the next TES samples without learning from them.

    ## Raises

    -   `ConfigError` if `run_config` is invalid.
    -   `StreamExhaustedError` naming the stamp if the source runs dry.
    -   `DataParseError` if the CSV source cannot be read.

    ## Usage

    ```python
    runner = ExperimentRunner()
    runner.run_config = run_config
    runner.commit()
    print(runner.results.summary())
    ```
    """

    def __init__(self) -> None:
        self.class_name = self.__class__.__name__
        self.log = logging.getLogger(f"pensemble.{self.class_name}")
        self._run_config: Optional[RunConfig] = None
        self._results: Results = Results()
        self.ensemble: Optional[Pensemble] = None
        self.written: list[Path] = []

        msg = f"ENTERED {self.class_name}()"
        self.log.debug(msg)

    @property
    def run_config(self) -> RunConfig:
        """
        # Summary

        The run configuration.

        ## Raises

        -   `ValueError` if read before it is set.
        -   `TypeError` if set to anything but a `RunConfig`.
        """
        if self._run_config is None:
            raise ValueError(f"{self.class_name}.run_config: run_config must be set.")
        return self._run_config

    @run_config.setter
    def run_config(self, value: RunConfig) -> None:
        if not isinstance(value, RunConfig):
            msg = f"{self.class_name}.run_config: "
            msg += f"Expected a RunConfig. Got {type(value).__name__}."
            raise TypeError(msg)
        self._run_config = value

    @property
    def results(self) -> Results:
        """
        Metrics collected by the last `commit()`.
        """
        return self._results

    def _source(self) -> Union[StreamGenerator, CsvStream]:
        run_config = self.run_config
        if run_config.csv_path is not None:
            schema = CsvSchema(label_names=run_config.label_names, n_classes=run_config.csv_classes, strict=run_config.strict)
            return load_csv(run_config.csv_path, schema)
        return StreamGenerator(run_config.stream_spec())

    def commit(self) -> Results:
        """
        # Summary

        Execute the run and, if an output directory is configured, write
        `metrics.csv`, `summary.json` and `model.json` into it.
        """
        method_name = inspect.stack()[0][3]
        run_config = self.run_config
        run_config.validate()
        source = self._source()
        ensemble = Pensemble(source.n_features, source.n_classes, run_config.ensemble)
        self.ensemble = ensemble
        self._results = Results()
        self._results.metadata = {"run": run_config.to_dict(), "n_features": source.n_features, "n_classes": source.n_classes}

        for stamp in range(run_config.stamps):
            try:
                train = source.generate(run_config.train_size)
                report = ensemble.process_chunk(train)
                test = source.generate(run_config.test_size)
            except StreamExhaustedError as error:
                msg = f"{self.class_name}.{method_name}: "
                msg += f"Stream exhausted at stamp {stamp} of {run_config.stamps}. "
                msg += f"Error detail: {error}"
                raise StreamExhaustedError(msg) from error
            start = time.perf_counter()
            rate = ensemble.score(test)
            seconds = report.seconds + time.perf_counter() - start
            self._results.add_row(
                MetricsRow(
                    stamp=stamp,
                    classification_rate=rate,
                    rules=report.rules,
                    input_attributes=report.active_features,
                    parameters=report.parameters,
                    ensemble_size=report.ensemble_size,
                    seconds=seconds,
                    drift_state=report.state.value,
                    train_accuracy=report.accuracy,
                    mask=" ".join(str(index) for index in report.mask),
                )
            )

        if run_config.output is not None:
            self.written = [
                self._results.write_metrics(run_config.output / "metrics.csv"),
                self._results.write_summary(run_config.output / "summary.json"),
                save_model(ensemble, run_config.output / "model.json"),
            ]
        return self._results


def run_experiment(run_config: RunConfig) -> Results:
    """
    Run one experiment and return its results.
    """
    runner = ExperimentRunner()
    runner.run_config = run_config
    return runner.commit()


def _sweep_point(settings: dict[str, Any]) -> dict[str, Any]:
    run_config = RunConfig.from_dict(settings["run"])
    run_config.output = None
    summary = run_experiment(run_config).summary()
    criteria = summary["criteria"]
    return {
        "parameter": settings["parameter"],
        "value": settings["value"],
        "classification_rate": criteria["classification_rate"]["mean"],
        "classification_rate_std": criteria["classification_rate"]["std"],
        "ensemble_size": criteria["ensemble_size"]["mean"],
        "rules": criteria["rules"]["mean"],
        "parameters": criteria["parameters"]["mean"],
        "seconds": criteria["seconds"]["mean"],
    }


class SweepRunner:
    """
    # Summary

    One-parameter-at-a-time sensitivity sweep.  A grid document names a
    base run and, per ensemble configuration key, the values to try; every
    other key keeps its base value.

    ```json
    {
        "base": {"preset": "sea", "stamps": 20, "seed": 3},
        "parameters": {"drift_alpha": [0.01, 0.005, 0.003], "prune_threshold": [0.005, 0.02, 0.03]}
    }
    ```

    ## Raises

    -   `ConfigError` if the grid cannot be read or names unknown keys.
    """

    def __init__(self) -> None:
        self.class_name = self.__class__.__name__
        self.log = logging.getLogger(f"pensemble.{self.class_name}")
        self.workers: int = 1
        self.output: Optional[Path] = None
        self._grid: dict[str, Any] = {}
        self.rows: list[dict[str, Any]] = []

        msg = f"ENTERED {self.class_name}()"
        self.log.debug(msg)

    @property
    def grid(self) -> dict[str, Any]:
        """
        # Summary

        The sweep grid.

        ## Raises

        -   `ConfigError` if it lacks `base` / `parameters` or a parameter
            has no values.
        """
        return self._grid

    @grid.setter
    def grid(self, value: dict[str, Any]) -> None:
        method_name = inspect.stack()[0][3]
        if not isinstance(value, dict) or not isinstance(value.get("base"), dict) or not isinstance(value.get("parameters"), dict):
            msg = f"{self.class_name}.{method_name}: "
            msg += "Expected a dict with 'base' and 'parameters' objects."
            raise ConfigError(msg)
        for name, values in value["parameters"].items():
            if EnsembleConfig.canonical_key(name) not in EnsembleConfig.keys():
                raise ConfigError(f"{self.class_name}.{method_name}: Unknown parameter {name!r}.")
            if not isinstance(values, list) or not values:
                raise ConfigError(f"{self.class_name}.{method_name}: {name} needs a non-empty list of values.")
        RunConfig.from_dict(value["base"]).validate()
        self._grid = value

    def load(self, path: Union[str, Path]) -> None:
        """
        Read the grid from a JSON file.
        """
        try:
            grid = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as error:
            raise ConfigError(f"{self.class_name}.load: Unable to read grid {path}. Error detail: {error}") from error
        self.grid = grid

    def points(self) -> list[dict[str, Any]]:
        """
        One settings dict per run, in grid order.
        """
        points = []
        for name, values in self.grid["parameters"].items():
            for value in values:
                run = copy.deepcopy(self.grid["base"])
                run.setdefault("config", {})
                run["config"] = dict(run["config"])
                run["config"][name] = value
                points.append({"parameter": name, "value": value, "run": run})
        return points

    def commit(self) -> list[dict[str, Any]]:
        """
        # Summary

        Run every point, in parallel when `workers` > 1, and write
        `sweep.csv` into `output` when set.  Returns one row per point.
        """
        points = self.points()
        if self.workers > 1:
            with ProcessPoolExecutor(max_workers=self.workers) as executor:
                self.rows = list(executor.map(_sweep_point, points))
        else:
            self.rows = [_sweep_point(point) for point in points]
        if self.output is not None:
            self.output.mkdir(parents=True, exist_ok=True)
            path = self.output / "sweep.csv"
            pd.DataFrame(self.rows).to_csv(path, index=False, float_format="%.17g", encoding="utf-8")
            self.log.debug(f"{self.class_name}.commit: {path}")
        return self.rows


def inspect_model(path: Union[str, Path]) -> dict[str, Any]:
    """
    # Summary

    Describe a saved model: per expert its weight, birth chunk, rule
    centres, supports, densities and consequent norms, and its reserve
    size.

    ## Raises

    -   `ModelFileError` if the file cannot be loaded.
    """
    ensemble = load_model(path)
    experts = []
    for index, expert in enumerate(ensemble.experts):
        rule_base = expert.rule_base
        experts.append(
            {
                "expert": index,
                "weight": expert.weight,
                "born_at": expert.born_at,
                "reserve": len(rule_base.reserve),
                "rules": [
                    {
                        "center": np.round(rule.center, 6).tolist(),
                        "support": rule.support,
                        "density": rule.density,
                        "consequent_norm": float(np.linalg.norm(rule.consequent)),
                    }
                    for rule in rule_base.rules
                ],
            }
        )
    return {
        "n_features": ensemble.n_features,
        "n_classes": ensemble.n_classes,
        "chunks": ensemble.chunk_index,
        "ensemble_size": ensemble.size,
        "rules": ensemble.total_rules(),
        "parameters": ensemble.parameter_count(),
        "mask": list(ensemble.mask.selected),
        "drift_detections": ensemble.monitor.detections,
        "experts": experts,
    }
