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
Versioned JSON model file.

Layout (every float, including array entries, is a decimal string with
17 significant digits so that a reload is bit-identical):

```json
{
    "format": "pensemble-model",
    "version": 1,
    "n_features": 3,
    "n_classes": 2,
    "chunk_index": 12,
    "config": {"decreasing_factor": "0.10000000000000001", "...": "..."},
    "moments": {"count": 3000, "mean": {"shape": [3], "data": ["..."]}, "...": "..."},
    "monitor": {"total_n": 120, "...": "..."},
    "gofs": {"learning_rate": "0.20000000000000001", "budget": null, "kappa": null, "selected": [0, 1, 2]},
    "experts": [
        {
            "weight": "1",
            "born_at": 0,
            "squared_error": "0",
            "observed": 0,
            "history": {"count": 11, "mean": "...", "m2": "...", "bmax": "..."},
            "accumulators": {"weight": "...", "linear": {"...": "..."}, "quadratic": "..."},
            "rules": [{"center": {}, "inv_cov": {}, "consequent": {}, "rls_cov": {}, "support": 4, "density": "..."}],
            "reserve": []
        }
    ]
}
```
"""
from __future__ import absolute_import, division, print_function

__metaclass__ = type  # pylint: disable=invalid-name

import json
import logging
from pathlib import Path
from typing import Any, Union

import numpy as np

from pensemble.config import EnsembleConfig
from pensemble.core import FeatureMoments
from pensemble.drift import DriftMonitor
from pensemble.ensemble import LocalExpert, Pensemble
from pensemble.exceptions import ModelFileError
from pensemble.genloss import GenErrorHistory
from pensemble.gofs import FeatureMask, GofsState
from pensemble.pclass import DensityAccumulators, FuzzyRule, RuleBase

MODEL_FORMAT = "pensemble-model"
MODEL_VERSION = 1

LOG = logging.getLogger("pensemble.model_io")


def encode(value: Any) -> Any:
    """
    Plain JSON-ready form: floats and arrays become 17-digit decimal text.
    """
    if isinstance(value, np.ndarray):
        return {"shape": list(value.shape), "data": [format(float(item), ".17g") for item in value.ravel()]}
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    if isinstance(value, dict):
        return {key: encode(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [encode(item) for item in value]
    return value


def decode_float(value: Any) -> float:
    """
    Inverse of `encode` for one float.
    """
    if isinstance(value, bool) or not isinstance(value, (str, int, float)):
        raise ValueError(f"expected a decimal string, got {value!r}")
    return float(value)


def decode_array(value: Any) -> np.ndarray:
    """
    Inverse of `encode` for one array.
    """
    if not isinstance(value, dict) or "shape" not in value or "data" not in value:
        raise ValueError(f"expected an encoded array, got {type(value).__name__}")
    shape = tuple(int(size) for size in value["shape"])
    data = np.array([decode_float(item) for item in value["data"]], dtype=float)
    return data.reshape(shape)


def _rule_dict(rule: FuzzyRule) -> dict[str, Any]:
    return {
        "center": rule.center,
        "inv_cov": rule.inv_cov,
        "consequent": rule.consequent,
        "rls_cov": rule.rls_cov,
        "support": rule.support,
        "density": rule.density,
    }


def model_dict(ensemble: Pensemble) -> dict[str, Any]:
    """
    # Summary

    Encoded, JSON-ready description of `ensemble`.
    """
    experts = []
    for expert in ensemble.experts:
        rule_base = expert.rule_base
        experts.append(
            {
                "weight": expert.weight,
                "born_at": expert.born_at,
                "squared_error": expert.squared_error,
                "observed": expert.observed,
                "history": expert.history.to_dict(),
                "accumulators": {
                    "weight": rule_base.accumulators.weight,
                    "linear": rule_base.accumulators.linear,
                    "quadratic": rule_base.accumulators.quadratic,
                },
                "rules": [_rule_dict(rule) for rule in rule_base.rules],
                "reserve": [_rule_dict(rule) for rule in rule_base.reserve],
            }
        )
    gofs = ensemble.gofs
    return encode(
        {
            "format": MODEL_FORMAT,
            "version": MODEL_VERSION,
            "n_features": ensemble.n_features,
            "n_classes": ensemble.n_classes,
            "chunk_index": ensemble.chunk_index,
            "config": ensemble.config.to_dict(),
            "moments": ensemble.moments.to_dict(),
            "monitor": ensemble.monitor.to_dict(),
            "gofs": {
                "learning_rate": gofs.learning_rate,
                "regularizer": gofs.regularizer,
                "budget": gofs.budget,
                "kappa": gofs.kappa,
                "selected": list(gofs.mask.selected),
            },
            "experts": experts,
        }
    )


def save_model(ensemble: Pensemble, path: Union[str, Path]) -> Path:
    """
    # Summary

    Write `ensemble` to `path` and return the path.

    ## Raises

    -   `ModelFileError` if the file cannot be written.
    """
    path = Path(path)
    text = json.dumps(model_dict(ensemble), indent=1) + "\n"
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    except OSError as error:
        raise ModelFileError(f"save_model: Unable to write {path}. Error detail: {error}") from error
    LOG.debug(f"save_model: {path}, experts {ensemble.size}")
    return path


def _decode_scalar(data: dict[str, Any], key: str) -> Any:
    value = data[key]
    if isinstance(value, str):
        # enum-like fields ("high", "stable") are plain text
        try:
            return decode_float(value)
        except ValueError:
            return value
    if isinstance(value, list):
        return [_decode_scalar({"item": item}, "item") for item in value]
    if isinstance(value, dict):
        if set(value) == {"shape", "data"}:
            return decode_array(value)
        return {name: _decode_scalar(value, name) for name in value}
    return value


def _decode_rule(data: dict[str, Any], n_features: int, n_classes: int) -> FuzzyRule:
    rule = FuzzyRule(
        center=decode_array(data["center"]),
        inv_cov=decode_array(data["inv_cov"]),
        consequent=decode_array(data["consequent"]),
        rls_cov=decode_array(data["rls_cov"]),
        support=int(data["support"]),
        density=decode_float(data["density"]),
    )
    expected = {
        "center": (n_features,),
        "inv_cov": (n_features, n_features),
        "consequent": (n_features + 1, n_classes),
        "rls_cov": (n_features + 1, n_features + 1),
    }
    for name, shape in expected.items():
        if getattr(rule, name).shape != shape:
            raise ValueError(f"rule {name} has shape {getattr(rule, name).shape}, expected {shape}")
    if rule.support < 1:
        raise ValueError(f"rule support must be >= 1, got {rule.support}")
    return rule


def model_from_dict(data: dict[str, Any]) -> Pensemble:
    """
    # Summary

    Rebuild an ensemble from `model_dict` output.  The whole document is
    validated before the ensemble is returned.

    ## Raises

    -   `ModelFileError` for a foreign format, a version mismatch or any
        missing or malformed field.
    """
    if not isinstance(data, dict) or data.get("format") != MODEL_FORMAT:
        raise ModelFileError(f"model_from_dict: not a {MODEL_FORMAT} document.")
    if data.get("version") != MODEL_VERSION:
        msg = "model_from_dict: "
        msg += f"Unsupported model version {data.get('version')!r}. Expected {MODEL_VERSION}."
        raise ModelFileError(msg)
    try:
        n_features = int(data["n_features"])
        n_classes = int(data["n_classes"])
        config = EnsembleConfig.from_dict(_decode_scalar(data, "config"))
        ensemble = Pensemble(n_features, n_classes, config)
        ensemble.chunk_index = int(data["chunk_index"])
        ensemble.moments = FeatureMoments.from_dict(_decode_scalar(data, "moments"))
        ensemble.monitor = DriftMonitor.from_dict(_decode_scalar(data, "monitor"))
        gofs_data = _decode_scalar(data, "gofs")
        gofs = GofsState(n_features, gofs_data["learning_rate"], gofs_data["regularizer"], gofs_data["budget"])
        gofs.kappa = gofs_data["kappa"]
        gofs.mask = FeatureMask(n_features, gofs_data["selected"])
        ensemble.gofs = gofs
        for expert_data in data["experts"]:
            expert = LocalExpert(n_features, n_classes, config, born_at=int(expert_data["born_at"]))
            expert.weight = decode_float(expert_data["weight"])
            expert.squared_error = decode_float(expert_data["squared_error"])
            expert.observed = int(expert_data["observed"])
            expert.history = GenErrorHistory.from_dict(_decode_scalar(expert_data, "history"))
            accumulators = DensityAccumulators(n_features)
            accumulators.weight = decode_float(expert_data["accumulators"]["weight"])
            accumulators.linear = decode_array(expert_data["accumulators"]["linear"])
            accumulators.quadratic = decode_float(expert_data["accumulators"]["quadratic"])
            rule_base: RuleBase = expert.rule_base
            rule_base.accumulators = accumulators
            rule_base.rules = [_decode_rule(rule, n_features, n_classes) for rule in expert_data["rules"]]
            rule_base.reserve = [_decode_rule(rule, n_features, n_classes) for rule in expert_data["reserve"]]
            ensemble.experts.append(expert)
    except (KeyError, TypeError, ValueError, AttributeError) as error:
        msg = "model_from_dict: "
        msg += f"Malformed model document. Error detail: {type(error).__name__}: {error}"
        raise ModelFileError(msg) from error
    if ensemble.moments.dimension != n_features:
        raise ModelFileError("model_from_dict: moments dimension does not match n_features.")
    return ensemble


def load_model(path: Union[str, Path]) -> Pensemble:
    """
    # Summary

    Read a model written by `save_model`.

    ## Raises

    -   `ModelFileError` if the file is unreadable, truncated, of another
        format or version, or malformed.
    """
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as error:
        raise ModelFileError(f"load_model: Unable to read {path}. Error detail: {error}") from error
    try:
        ensemble = model_from_dict(data)
    except ModelFileError as error:
        raise ModelFileError(f"load_model: {path}: {error}") from error
    LOG.debug(f"load_model: {path}, experts {ensemble.size}")
    return ensemble
