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
# pylint: disable=too-many-instance-attributes,too-many-locals
"""
The evolving ensemble: weighted majority vote over local experts,
per-sample weight penalty/reward and pruning, drift-driven creation of
experts and pruning by localized generalization error.
"""
from __future__ import absolute_import, division, print_function

__metaclass__ = type  # pylint: disable=invalid-name

import inspect
import logging
import math
import time
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from pensemble.config import EnsembleConfig
from pensemble.core import DataChunk, FeatureMoments, FloatArray, one_hot
from pensemble.drift import DriftMonitor
from pensemble.drift_state import DriftState
from pensemble.exceptions import UntrainedModelError
from pensemble.genloss import GenErrorHistory, localized_gen_error
from pensemble.gofs import FeatureMask, GofsState
from pensemble.pclass import RuleBase


class LocalExpert:
    """
    # Summary

    One base classifier with its voting weight, the running mean squared
    error of its predictions over the current chunk and the history of its
    generalization error bound.
    """

    def __init__(self, n_features: int, n_classes: int, config: EnsembleConfig, born_at: int = 0) -> None:
        self.rule_base = RuleBase(n_features, n_classes, config)
        self.weight: float = 1.0
        self.born_at: int = born_at
        self.history = GenErrorHistory()
        self.squared_error: float = 0.0
        self.observed: int = 0

    @property
    def mse(self) -> float:
        """
        Mean squared error over the current chunk, inf before any sample.
        """
        if self.observed == 0:
            return math.inf
        return self.squared_error / self.observed

    def reset_chunk(self) -> None:
        """
        Clear the per-chunk error.
        """
        self.squared_error = 0.0
        self.observed = 0

    def record(self, scores: FloatArray, label: int) -> None:
        """
        Add one prediction to the per-chunk error.
        """
        residual = scores.copy()
        residual[label] -= 1.0
        self.squared_error += float(residual @ residual) / residual.size
        self.observed += 1


@dataclass(frozen=True)
class ChunkReport:
    """
    Outcome of `Pensemble.process_chunk`.
    """

    chunk_index: int
    accuracy: float
    ensemble_size: int
    rules: int
    parameters: int
    active_features: int
    seconds: float
    state: DriftState
    mask: tuple[int, ...]
    created_expert: bool
    pruned_experts: int


class Pensemble:
    """
    # Summary

    Evolving ensemble of fuzzy local experts for chunked stream
    classification.

    Raw samples are standardized with running feature moments and masked
    by the online feature selector before they reach the experts.  Weights
    and the drift monitor evolve per sample; experts are created, trained
    and pruned at chunk boundaries.

    ## Raises

    -   `UntrainedModelError` if a prediction is requested before the first
        chunk.
    -   `ValueError` if a chunk's dimension differs from `n_features` or a
        label is out of range.

    ## Usage

    ```python
    ensemble = Pensemble(n_features=3, n_classes=2, config=EnsembleConfig())
    for chunk in chunks:
        report = ensemble.process_chunk(chunk)
    label = ensemble.predict(x)
    ```
    """

    def __init__(self, n_features: int, n_classes: int, config: Optional[EnsembleConfig] = None) -> None:
        self.class_name = self.__class__.__name__
        self.log = logging.getLogger(f"pensemble.{self.class_name}")
        self.n_features = int(n_features)
        self.n_classes = int(n_classes)
        self.config = config if config is not None else EnsembleConfig()
        self.experts: list[LocalExpert] = []
        self.monitor = DriftMonitor(self.config.warning_alpha, self.config.drift_alpha)
        self.gofs = GofsState(
            self.n_features,
            self.config.gofs_learning_rate,
            self.config.gofs_regularizer,
            self.config.feature_budget,
        )
        self.moments = FeatureMoments(self.n_features)
        self.chunk_index: int = 0

        msg = f"ENTERED {self.class_name}(): "
        msg += f"n_features {self.n_features}, n_classes {self.n_classes}"
        self.log.debug(msg)

    @property
    def mask(self) -> FeatureMask:
        """
        Current feature mask.
        """
        return self.gofs.mask

    @property
    def size(self) -> int:
        """
        Ensemble size M.
        """
        return len(self.experts)

    @property
    def weights(self) -> FloatArray:
        """
        Voting weights of the experts, in ensemble order.
        """
        return np.array([expert.weight for expert in self.experts])

    @property
    def rule_bases(self) -> list[RuleBase]:
        """
        Rule base of every expert, in ensemble order.
        """
        return [expert.rule_base for expert in self.experts]

    def total_rules(self) -> int:
        """
        Active rules over all experts.
        """
        return sum(expert.rule_base.size for expert in self.experts)

    def parameter_count(self) -> int:
        """
        Network parameters over all experts.
        """
        return sum(expert.rule_base.parameter_count() for expert in self.experts)

    def _require_experts(self) -> None:
        if not self.experts:
            method_name = inspect.stack()[1][3]
            msg = f"{self.class_name}.{method_name}: "
            msg += "The ensemble has no experts (untrained)."
            raise UntrainedModelError(msg)

    # -- voting and weights ---------------------------------------------------

    def local_predictions(self, z: FloatArray) -> list[tuple[FloatArray, int]]:
        """
        Scores and predicted class of every expert for the prepared input `z`.
        """
        return [expert.rule_base.infer(z) for expert in self.experts]

    def vote_predict(self, z: FloatArray) -> tuple[int, list[int], FloatArray]:
        """
        # Summary

        Weighted majority vote for the prepared input `z`.

        Returns the global class, every expert's local class and the vote
        vector (sum of the weights of the experts voting for each class).
        Ties go to the lowest class index.

        ## Raises

        -   `UntrainedModelError` if the ensemble is empty.
        """
        self._require_experts()
        local = [label for _, label in self.local_predictions(z)]
        return self._vote(local)

    def _vote(self, local: Sequence[int]) -> tuple[int, list[int], FloatArray]:
        votes = np.zeros(self.n_classes)
        for expert, label in zip(self.experts, local):
            votes[label] += expert.weight
        return int(np.argmax(votes)), list(local), votes

    def update_weights(self, local: Sequence[int], label: int) -> None:
        """
        # Summary

        Penalize every expert that predicted wrongly (weight times p) and
        reward every expert that was right (weight times 2 - p, capped at 1).
        """
        factor = self.config.decreasing_factor
        for expert, predicted in zip(self.experts, local):
            if predicted == label:
                expert.weight = min(expert.weight * (2.0 - factor), 1.0)
            else:
                expert.weight = expert.weight * factor

    def normalize(self) -> None:
        """
        Scale the weights to sum to one.
        """
        total = float(sum(expert.weight for expert in self.experts))
        if total <= 0.0:
            for expert in self.experts:
                expert.weight = 1.0 / len(self.experts)
            return
        for expert in self.experts:
            expert.weight = expert.weight / total

    def normalize_and_prune(self) -> list[LocalExpert]:
        """
        # Summary

        Normalize the weights, remove every expert whose weight is below
        `prune_threshold` and normalize again.  The last expert standing is
        never removed.  Returns the removed experts.
        """
        self._require_experts()
        self.normalize()
        if len(self.experts) == 1:
            return []
        threshold = self.config.prune_threshold
        keep = [expert for expert in self.experts if expert.weight >= threshold]
        if not keep:
            keep = [max(self.experts, key=lambda expert: expert.weight)]
        pruned = [expert for expert in self.experts if expert not in keep]
        if pruned:
            self.experts = keep
            self.normalize()
            msg = f"{self.class_name}.normalize_and_prune: "
            msg += f"pruned {len(pruned)} expert(s), size {self.size}"
            self.log.debug(msg)
        return pruned

    # -- input preparation ------------------------------------------------------

    def _check_sample(self, x: FloatArray, label: Optional[int] = None) -> None:
        if x.shape != (self.n_features,):
            method_name = inspect.stack()[1][3]
            msg = f"{self.class_name}.{method_name}: "
            msg += f"Expected {self.n_features} features. Got shape {x.shape}."
            raise ValueError(msg)
        if label is not None and label >= self.n_classes:
            method_name = inspect.stack()[1][3]
            msg = f"{self.class_name}.{method_name}: "
            msg += f"Expected a label in 0..{self.n_classes - 1}. Got {label}."
            raise ValueError(msg)

    def prepare(self, x: FloatArray) -> FloatArray:
        """
        Standardize `x` with the current moments and apply the mask.  Does
        not update any state.
        """
        return self.mask.apply(self.moments.standardize(x))

    def predict(self, x: FloatArray) -> int:
        """
        # Summary

        Class predicted for the raw sample `x`.  No state is modified.

        ## Raises

        -   `UntrainedModelError` if no chunk has been processed.
        """
        self._require_experts()
        x = np.asarray(x, dtype=float)
        self._check_sample(x)
        label, _, _ = self.vote_predict(self.prepare(x))
        return label

    def predict_chunk(self, chunk: DataChunk) -> np.ndarray:
        """
        Predicted class of every sample in `chunk`.  No state is modified.
        """
        return np.array([self.predict(sample.x) for sample in chunk], dtype=np.int64)

    def score(self, chunk: DataChunk) -> float:
        """
        Classification rate on `chunk` without learning from it.
        """
        return float(np.mean(self.predict_chunk(chunk) == chunk.labels))

    # -- chunk processing ---------------------------------------------------------

    def _train(self, expert: LocalExpert, inputs: FloatArray, labels: np.ndarray) -> None:
        ranges = self.moments.standardized_ranges() * self.mask.weights
        for z, label in zip(inputs, labels):
            expert.rule_base.train_sample(z, int(label), ranges)
        expert.rule_base.ers_prune()

    def _generalization_prune(self, inputs: FloatArray, labels: np.ndarray) -> list[LocalExpert]:
        if len(self.experts) < 2:
            for expert in self.experts:
                self._update_history(expert, inputs, labels)
            return []
        flagged: list[LocalExpert] = []
        bounds: dict[int, float] = {}
        for expert in self.experts:
            r_sm, prune = self._update_history(expert, inputs, labels)
            bounds[id(expert)] = r_sm
            if prune:
                flagged.append(expert)
        if len(flagged) == len(self.experts):
            flagged.remove(min(flagged, key=lambda expert: bounds[id(expert)]))
        if flagged:
            self.experts = [expert for expert in self.experts if expert not in flagged]
            self.normalize()
            msg = f"{self.class_name}._generalization_prune: "
            msg += f"pruned {len(flagged)} expert(s), size {self.size}"
            self.log.debug(msg)
        return flagged

    def _update_history(self, expert: LocalExpert, inputs: FloatArray, labels: np.ndarray) -> tuple[float, bool]:
        view = self.moments.standardized_view(self.mask.weights)
        estimate = localized_gen_error(
            expert.rule_base,
            inputs,
            labels,
            view,
            eta=self.config.generalization_eta,
            q=self.config.neighborhood_q,
            ceiling=self.config.ssm_ceiling,
            bmax=expert.history.bmax,
        )
        expert.history.bmax = estimate.bmax
        prune = expert.history.decide(estimate.r_sm, self.config.gen_prune_direction, self.config.gen_prune_warmup)
        return estimate.r_sm, prune

    def process_chunk(self, chunk: DataChunk) -> ChunkReport:
        """
        # Summary

        Consume one chunk, in order, exactly once.

        Per sample: update the moments, standardize, mask, vote, update and
        prune the weights, step the feature selector and feed the error
        indicator to the drift monitor.

        Per chunk: prune experts whose generalization bound degrades, then
        act on the most severe drift state seen in the chunk.  Drift adds a
        new expert trained on this chunk; Warning trains nothing; Stable
        trains the expert with the lowest chunk error.  The very first chunk
        builds the first expert.

        ## Raises

        -   `ValueError` if the chunk dimension or a label is invalid.
        """
        start = time.perf_counter()
        if chunk.dimension != self.n_features:
            msg = f"{self.class_name}.process_chunk: "
            msg += f"Expected {self.n_features} features. Got {chunk.dimension}."
            raise ValueError(msg)
        first = not self.experts
        for expert in self.experts:
            expert.reset_chunk()

        standardized: list[FloatArray] = []
        correct = 0
        chunk_state = DriftState.STABLE
        for sample in chunk:
            self._check_sample(sample.x, sample.label)
            self.moments.update(sample.x)
            z = self.moments.standardize(sample.x)
            standardized.append(z)
            if first:
                continue
            masked = self.mask.apply(z)
            outputs = self.local_predictions(masked)
            for expert, (scores, _) in zip(self.experts, outputs):
                expert.record(scores, sample.label)
            label, local, _ = self._vote([predicted for _, predicted in outputs])
            hit = label == sample.label
            correct += int(hit)
            self.update_weights(local, sample.label)
            self.normalize_and_prune()
            self.gofs.step(self.rule_bases, z, one_hot(sample.label, self.n_classes), hit)
            chunk_state = chunk_state.worst(self.monitor.observe(0.0 if hit else 1.0))

        inputs = np.vstack([self.mask.apply(z) for z in standardized])
        labels = chunk.labels
        created = False
        pruned: list[LocalExpert] = []
        if first:
            expert = LocalExpert(self.n_features, self.n_classes, self.config, born_at=self.chunk_index)
            self.experts.append(expert)
            self._train(expert, inputs, labels)
            created = True
            accuracy = math.nan
        else:
            accuracy = correct / chunk.size
            pruned = self._generalization_prune(inputs, labels)
            if chunk_state.creates_expert():
                expert = LocalExpert(self.n_features, self.n_classes, self.config, born_at=self.chunk_index)
                self.experts.append(expert)
                self.normalize()
                self._train(expert, inputs, labels)
                self.monitor.reset()
                created = True
                msg = f"{self.class_name}.process_chunk: "
                msg += f"drift at chunk {self.chunk_index}, size {self.size}"
                self.log.debug(msg)
            elif chunk_state.trains_winner():
                winner = min(self.experts, key=lambda expert: expert.mse)
                self._train(winner, inputs, labels)

        report = ChunkReport(
            chunk_index=self.chunk_index,
            accuracy=accuracy,
            ensemble_size=self.size,
            rules=self.total_rules(),
            parameters=self.parameter_count(),
            active_features=self.mask.size,
            seconds=time.perf_counter() - start,
            state=chunk_state,
            mask=self.mask.selected,
            created_expert=created,
            pruned_experts=len(pruned),
        )
        self.chunk_index += 1
        return report
