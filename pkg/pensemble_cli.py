#!/usr/bin/env python
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
# Summary

Command-line entry point for pensemble experiments.

## Usage

Run the SEA preset and write metrics, summary and model into ./out/sea:

```bash
export PENSEMBLE_LOGGING_CONFIG=$HOME/pensemble/logging_config.json
python3 pensemble_cli.py run --preset sea --seed 7 --out out/sea
```

Run a CSV file in chunks of 100 (train) / 50 (test), overriding two
ensemble parameters:

```bash
python3 pensemble_cli.py run --csv data/stream.csv --stamps 20 --train 100 --test 50 \
    --set alpha_d=0.003 --set theta=0.02 --out out/csv
```

Sensitivity sweep and model inspection:

```bash
python3 pensemble_cli.py sweep --grid grid.json --workers 4 --out out/sweep
python3 pensemble_cli.py inspect out/sea/model.json
```

Exit codes: 0 success, 1 configuration error, 2 data error.
"""
import sys
from argparse import ArgumentParser, Namespace
from json import dumps
from math import isnan
from pathlib import Path
from typing import Any, NoReturn, Optional, Sequence

from pensemble.conversion import ConversionUtils
from pensemble.exceptions import ConfigError, DataError
from pensemble.harness import PRESETS, RunConfig, SweepRunner, inspect_model, run_experiment
from pensemble.log import Log
from pensemble.streams import STREAM_KINDS

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_DATA = 2


class ConfigArgumentParser(ArgumentParser):
    """
    ArgumentParser whose usage errors exit with `EXIT_CONFIG` instead of
    argparse's usual 2, which this script reserves for data errors.
    """

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> ArgumentParser:
    """
    Argument parser with the run, sweep and inspect subcommands.
    """
    parser = ConfigArgumentParser(description="Evolving fuzzy ensemble for drifting data streams.")
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser("run", help="Train/test over a stream, stamp by stamp.")
    source = run.add_mutually_exclusive_group()
    source.add_argument("--stream", choices=STREAM_KINDS, help="Synthetic stream kind.")
    source.add_argument("--csv", help="Labelled CSV file (header row, label in the last column).")
    run.add_argument("--preset", choices=sorted(PRESETS), help="Stream and stamp schedule of a benchmark preset.")
    run.add_argument("--stamps", type=int, help="Number of time stamps.")
    run.add_argument("--train", type=int, help="Training samples per stamp.")
    run.add_argument("--test", type=int, help="Testing samples per stamp.")
    run.add_argument("--seed", type=int, default=0, help="Stream seed (default: 0).")
    run.add_argument("--out", help="Directory for metrics.csv, summary.json and model.json.")
    run.add_argument("--set", action="append", default=[], metavar="KEY=VALUE", help="Override an ensemble configuration value (repeatable).")
    run.add_argument("--features", type=int, help="Number of features of the synthetic stream.")
    run.add_argument("--classes", type=int, help="Number of classes (gaussian stream, or declared CSV classes).")
    run.add_argument("--noise", type=float, help="Label noise rate of the synthetic stream.")
    run.add_argument("--change-points", help="Comma-separated sample indices where concepts change.")
    run.add_argument("--drift-duration", type=int, help="Samples over which each change is phased in.")
    run.add_argument("--cyclic", action="store_true", help="Let old concepts recur.")
    run.add_argument("--class-ratio", type=float, help="Target frequency of class 1 (sea only).")
    run.add_argument("--label-names", help="Comma-separated CSV class names in index order.")
    run.add_argument("--strict", action="store_true", help="Reject unseen CSV labels.")

    sweep = commands.add_parser("sweep", help="One-parameter-at-a-time sensitivity sweep.")
    sweep.add_argument("--grid", required=True, help="JSON grid with 'base' and 'parameters'.")
    sweep.add_argument("--workers", type=int, default=1, help="Parallel worker processes (default: 1).")
    sweep.add_argument("--out", help="Directory for sweep.csv.")

    show = commands.add_parser("inspect", help="Print the experts and rules of a saved model.")
    show.add_argument("model", help="Model file written by run --out.")
    return parser


def run_config_from_args(args: Namespace) -> RunConfig:
    """
    # Summary

    Translate `run` arguments into a `RunConfig`.  A preset is applied
    first; explicit flags override it.

    ## Raises

    -   `ConfigError` for invalid values or `--set` assignments.
    """
    run_config = RunConfig()
    try:
        if args.preset:
            run_config.apply_preset(args.preset)
        if args.stream:
            run_config.stream = args.stream
        if args.csv:
            run_config.csv_path = args.csv
            run_config.stream = None
        for name, attribute in (("stamps", "stamps"), ("train", "train_size"), ("test", "test_size")):
            value = getattr(args, name)
            if value is not None:
                setattr(run_config, attribute, value)
        run_config.seed = args.seed
        run_config.output = args.out
        if args.features is not None:
            run_config.n_features = args.features
        if args.classes is not None:
            run_config.n_classes = args.classes
            run_config.csv_classes = args.classes
        if args.noise is not None:
            run_config.noise = args.noise
        if args.change_points:
            run_config.change_points = tuple(int(point) for point in args.change_points.split(","))
        if args.drift_duration is not None:
            run_config.drift_duration = args.drift_duration
        run_config.cyclic = args.cyclic
        run_config.class_ratio = args.class_ratio
        if args.label_names:
            run_config.label_names = [name.strip() for name in args.label_names.split(",")]
        run_config.strict = args.strict
        conversion = ConversionUtils()
        for assignment in args.set:
            key, value = conversion.parse_assignment(assignment)
            run_config.ensemble.set_value(key, value)
    except ConfigError:
        raise
    except (TypeError, ValueError) as error:
        raise ConfigError(f"Invalid run arguments: {error}") from error
    run_config.validate()
    return run_config


def _printable(value: Any) -> Any:
    if isinstance(value, dict):
        return {key: _printable(item) for key, item in value.items()}
    if isinstance(value, list):
        return [_printable(item) for item in value]
    if isinstance(value, float) and isnan(value):
        return None
    return value


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Parse `argv`, run the chosen subcommand and return the exit code.
    """
    try:
        log = Log()
        log.commit()
    except ValueError as error:
        print(f"Failed to initialize logging: {error}")
        return EXIT_CONFIG

    try:
        args = build_parser().parse_args(argv)
    except SystemExit as error:
        return error.code if isinstance(error.code, int) else EXIT_CONFIG
    try:
        if args.command == "run":
            results = run_experiment(run_config_from_args(args))
            summary = results.summary()
            summary.pop("metadata", None)
            print(dumps(_printable(summary), indent=4, sort_keys=True))
        elif args.command == "sweep":
            sweep = SweepRunner()
            sweep.load(args.grid)
            sweep.workers = max(1, args.workers)
            sweep.output = None if args.out is None else Path(args.out)
            for row in sweep.commit():
                print(dumps(_printable(row), sort_keys=True))
        else:
            print(dumps(_printable(inspect_model(args.model)), indent=4))
    except DataError as error:
        print(f"Data error: {error}")
        return EXIT_DATA
    except (ConfigError, TypeError, ValueError) as error:
        print(f"Configuration error: {error}")
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
