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
Tests for the command-line entry point.
"""
import json

import pytest

from conftest import blob_chunk
from pensemble.streams import write_csv
from pensemble_cli import EXIT_CONFIG, EXIT_DATA, EXIT_OK, build_parser, main, run_config_from_args


@pytest.fixture(autouse=True)
def quiet_logging(monkeypatch, restore_root_logger):
    monkeypatch.delenv("PENSEMBLE_LOGGING_CONFIG", raising=False)
    yield


def test_run_config_from_args(tmp_path):
    args = build_parser().parse_args(
        ["run", "--preset", "sin", "--stamps", "4", "--set", "theta=0.02", "--set", "b=1", "--out", str(tmp_path), "--change-points", "100,200"]
    )
    run_config = run_config_from_args(args)
    assert run_config.stream == "sin"
    assert run_config.stamps == 4
    assert run_config.train_size == 200
    assert run_config.change_points == (100, 200)
    assert run_config.ensemble.prune_threshold == 0.02
    assert run_config.ensemble.feature_budget == 1
    assert run_config.output == tmp_path


def test_csv_replaces_the_preset_stream(tmp_path):
    args = build_parser().parse_args(["run", "--preset", "sea", "--csv", str(tmp_path / "data.csv")])
    run_config = run_config_from_args(args)
    assert run_config.stream is None
    assert run_config.csv_path == tmp_path / "data.csv"


def test_run(tmp_path, capsys):
    code = main(["run", "--stream", "line", "--stamps", "2", "--train", "60", "--test", "20", "--seed", "3", "--out", str(tmp_path)])
    assert code == EXIT_OK
    summary = json.loads(capsys.readouterr().out)
    assert summary["stamps"] == 2
    assert "classification_rate" in summary["criteria"]
    assert (tmp_path / "model.json").is_file()


def test_inspect(tmp_path, capsys, rng):
    path = tmp_path / "blobs.csv"
    write_csv(path, [blob_chunk(rng, 300, offset=4.0)])
    assert main(["run", "--csv", str(path), "--stamps", "2", "--train", "100", "--test", "50", "--out", str(tmp_path)]) == EXIT_OK
    capsys.readouterr()
    assert main(["inspect", str(tmp_path / "model.json")]) == EXIT_OK
    info = json.loads(capsys.readouterr().out)
    assert info["chunks"] == 2
    assert info["n_classes"] == 2


def test_bad_assignment(capsys):
    assert main(["run", "--stream", "sea", "--set", "colour=red"]) == EXIT_CONFIG
    assert "Configuration error" in capsys.readouterr().out


def test_assignment_without_equals():
    assert main(["run", "--stream", "sea", "--set", "theta"]) == EXIT_CONFIG


def test_no_source():
    assert main(["run", "--stamps", "2"]) == EXIT_CONFIG


def test_missing_csv(tmp_path, capsys):
    assert main(["run", "--csv", str(tmp_path / "absent.csv")]) == EXIT_DATA
    assert "Data error" in capsys.readouterr().out


def test_corrupted_model(tmp_path):
    path = tmp_path / "model.json"
    path.write_text("{\"format\": ", encoding="utf-8")
    assert main(["inspect", str(path)]) == EXIT_DATA


def test_bad_sweep_grid(tmp_path):
    path = tmp_path / "grid.json"
    path.write_text(json.dumps({"base": {"stream": "line"}, "parameters": {"colour": [1]}}), encoding="utf-8")
    assert main(["sweep", "--grid", str(path)]) == EXIT_CONFIG


def test_unreadable_logging_config(monkeypatch, tmp_path):
    monkeypatch.setenv("PENSEMBLE_LOGGING_CONFIG", str(tmp_path / "absent.json"))
    assert main(["inspect", "model.json"]) == EXIT_CONFIG


def test_unknown_command():
    assert main(["train"]) == EXIT_CONFIG


def test_unknown_stream_kind(capsys):
    assert main(["run", "--stream", "nosuch"]) == EXIT_CONFIG
    assert "invalid choice" in capsys.readouterr().err


def test_mistyped_flag_value():
    assert main(["run", "--stream", "sea", "--stamps", "zero"]) == EXIT_CONFIG


def test_help_exits_cleanly(capsys):
    assert main(["--help"]) == EXIT_OK
    assert "inspect" in capsys.readouterr().out
