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
Evolving fuzzy ensemble classifier for drifting data streams.
"""
from pensemble.config import EnsembleConfig
from pensemble.core import DataChunk, FeatureMoments, LabeledSample
from pensemble.drift import DriftMonitor, hoeffding_epsilon
from pensemble.drift_state import DriftState
from pensemble.ensemble import ChunkReport, LocalExpert, Pensemble
from pensemble.exceptions import (
    ConfigError,
    DataError,
    DataParseError,
    InsufficientDataError,
    ModelFileError,
    StreamExhaustedError,
    UntrainedModelError,
)
from pensemble.gofs import FeatureMask, GofsState
from pensemble.log import Log
from pensemble.model_io import load_model, save_model
from pensemble.pclass import FuzzyRule, RuleBase
from pensemble.streams import StreamGenerator, StreamSpec, load_csv

__all__ = [
    "ChunkReport",
    "ConfigError",
    "DataChunk",
    "DataError",
    "DataParseError",
    "DriftMonitor",
    "DriftState",
    "EnsembleConfig",
    "FeatureMask",
    "FeatureMoments",
    "FuzzyRule",
    "GofsState",
    "InsufficientDataError",
    "LabeledSample",
    "Log",
    "LocalExpert",
    "ModelFileError",
    "Pensemble",
    "RuleBase",
    "StreamExhaustedError",
    "StreamGenerator",
    "StreamSpec",
    "UntrainedModelError",
    "hoeffding_epsilon",
    "load_csv",
    "load_model",
    "save_model",
]
