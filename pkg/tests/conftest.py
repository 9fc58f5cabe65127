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
Shared fixtures and builders for the pensemble test suite.
"""
import logging

import numpy as np
import pytest

from pensemble.config import EnsembleConfig
from pensemble.core import DataChunk
from pensemble.pclass import FuzzyRule


def blob_chunk(rng: np.random.Generator, size: int, offset: float = 2.0, spread: float = 0.3, flip: bool = False) -> DataChunk:
    """
    Two Gaussian blobs at (-offset, -offset) (class 0) and (offset, offset)
    (class 1), shuffled.  `flip` swaps the labels.
    """
    labels = rng.integers(0, 2, size=size)
    centers = np.where(labels[:, None] == 1, offset, -offset)
    features = centers + rng.normal(0.0, spread, size=(size, 2))
    if flip:
        labels = 1 - labels
    return DataChunk.from_arrays(features, labels)


def constant_rule(n_features: int, n_classes: int, label: int, center: float = 0.0) -> FuzzyRule:
    """
    Unit-width rule whose consequent predicts `label` everywhere.
    """
    consequent = np.zeros((n_features + 1, n_classes))
    consequent[0, label] = 1.0
    return FuzzyRule(
        center=np.full(n_features, center),
        inv_cov=np.eye(n_features),
        consequent=consequent,
        rls_cov=1e5 * np.eye(n_features + 1),
    )


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)


@pytest.fixture
def config() -> EnsembleConfig:
    return EnsembleConfig()


@pytest.fixture
def restore_root_logger():
    """
    Put the root logger back the way the test found it.
    """
    root = logging.getLogger()
    handlers = root.handlers[:]
    level = root.level
    propagate = root.propagate
    yield root
    for handler in root.handlers[:]:
        root.removeHandler(handler)
    for handler in handlers:
        root.addHandler(handler)
    root.setLevel(level)
    root.propagate = propagate
    logging.raiseExceptions = True
    for name, logger in logging.root.manager.loggerDict.items():
        if isinstance(logger, logging.Logger) and name.startswith("pensemble"):
            logger.disabled = False
            for handler in logger.handlers[:]:
                logger.removeHandler(handler)
            logger.propagate = True
            logger.setLevel(logging.NOTSET)
