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
Hyper-parameters of the ensemble, its base learners, drift detector and
feature selector.
"""
from __future__ import absolute_import, division, print_function

__metaclass__ = type  # pylint: disable=invalid-name

import copy
import inspect
import logging
from typing import Any, Optional

from pensemble.exceptions import ConfigError

# short names accepted by set_value() and the CLI --set option
ALIASES: dict[str, str] = {
    "p": "decreasing_factor",
    "theta": "prune_threshold",
    "alpha_w": "warning_alpha",
    "alpha_d": "drift_alpha",
    "eta": "generalization_eta",
    "q": "neighborhood_q",
    "alpha": "gofs_learning_rate",
    "chi": "gofs_regularizer",
    "b": "feature_budget",
    "g_ds": "ds_threshold",
    "rho_vol": "volume_ratio",
    "theta_ers": "ers_threshold",
    "theta_pp": "pplus_threshold",
    "gamma_decay": "consequent_decay",
    "omega_init": "rls_init",
    "k_ov": "overlap_factor",
}

GEN_PRUNE_DIRECTIONS = ("high", "low")


class EnsembleConfig:
    """
    # Summary

    Validated hyper-parameters for one `Pensemble`.

    Every value is a property whose setter checks type and range.
    `set_value()` accepts canonical keys or their short aliases and is what
    the CLI `--set key=value` option calls.

    ## Raises

    -   `TypeError` if a property is set to a value of the wrong type.
    -   `ValueError` if a property is set to a value outside its range.
    -   `ConfigError` from `set_value()` / `from_dict()` for unknown keys or
        invalid values.

    ## Usage

    ```python
    config = EnsembleConfig()
    config.drift_alpha = 0.003
    config.set_value("theta", 0.02)
    ensemble = Pensemble(n_features=3, n_classes=2, config=config)
    ```
    """

    def __init__(self) -> None:
        self.class_name = self.__class__.__name__
        self.log = logging.getLogger(f"pensemble.{self.class_name}")

        self._decreasing_factor: float = 0.1
        self._prune_threshold: float = 0.01
        self._warning_alpha: float = 0.005
        self._drift_alpha: float = 0.001
        self._generalization_eta: float = 0.05
        self._neighborhood_q: float = 1.0
        self._gofs_learning_rate: float = 0.2
        self._gofs_regularizer: float = 0.01
        self._feature_budget: Optional[int] = None
        self._ds_threshold: float = 0.05
        self._volume_ratio: float = 0.3
        self._ers_threshold: float = 0.1
        self._pplus_threshold: float = 0.1
        self._consequent_decay: float = 1e-4
        self._rls_init: float = 1e5
        self._overlap_factor: float = 0.5
        self._init_width_fraction: float = 0.1
        self._min_width: float = 1e-2
        self._ssm_ceiling: float = 1e12
        self._gen_prune_direction: str = "high"
        self._gen_prune_warmup: int = 5
        self._seed: int = 0

        msg = f"ENTERED {self.class_name}()"
        self.log.debug(msg)

    # -- validation helpers -------------------------------------------------

    def _as_float(self, name: str, value: Any) -> float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            msg = f"{self.class_name}.{name}: "
            msg += f"Expected a number. Got {type(value).__name__} {value!r}."
            raise TypeError(msg)
        value = float(value)
        if value != value:
            msg = f"{self.class_name}.{name}: Expected a number. Got NaN."
            raise ValueError(msg)
        return value

    def _open_unit(self, name: str, value: Any) -> float:
        value = self._as_float(name, value)
        if not 0.0 < value < 1.0:
            msg = f"{self.class_name}.{name}: "
            msg += f"Expected a value in (0, 1). Got {value}."
            raise ValueError(msg)
        return value

    def _half_open_unit(self, name: str, value: Any) -> float:
        value = self._as_float(name, value)
        if not 0.0 < value <= 1.0:
            msg = f"{self.class_name}.{name}: "
            msg += f"Expected a value in (0, 1]. Got {value}."
            raise ValueError(msg)
        return value

    def _positive(self, name: str, value: Any) -> float:
        value = self._as_float(name, value)
        if not 0.0 < value < float("inf"):
            msg = f"{self.class_name}.{name}: "
            msg += f"Expected a finite value > 0. Got {value}."
            raise ValueError(msg)
        return value

    def _fraction(self, name: str, value: Any) -> float:
        value = self._as_float(name, value)
        if not 0.0 <= value < 1.0:
            msg = f"{self.class_name}.{name}: "
            msg += f"Expected a value in [0, 1). Got {value}."
            raise ValueError(msg)
        return value

    def _non_negative(self, name: str, value: Any) -> float:
        value = self._as_float(name, value)
        if not 0.0 <= value < float("inf"):
            msg = f"{self.class_name}.{name}: "
            msg += f"Expected a finite value >= 0. Got {value}."
            raise ValueError(msg)
        return value

    def _as_int(self, name: str, value: Any, minimum: int) -> int:
        if isinstance(value, bool) or not isinstance(value, int):
            msg = f"{self.class_name}.{name}: "
            msg += f"Expected an int. Got {type(value).__name__} {value!r}."
            raise TypeError(msg)
        if value < minimum:
            msg = f"{self.class_name}.{name}: "
            msg += f"Expected an int >= {minimum}. Got {value}."
            raise ValueError(msg)
        return value

    # -- ensemble ----------------------------------------------------------

    @property
    def decreasing_factor(self) -> float:
        """
        Penalty factor p applied to the weight of a wrong expert, in (0, 1).
        """
        return self._decreasing_factor

    @decreasing_factor.setter
    def decreasing_factor(self, value: float) -> None:
        self._decreasing_factor = self._open_unit("decreasing_factor", value)

    @property
    def prune_threshold(self) -> float:
        """
        Experts whose normalized weight falls below this are removed, in (0, 1).
        """
        return self._prune_threshold

    @prune_threshold.setter
    def prune_threshold(self, value: float) -> None:
        self._prune_threshold = self._open_unit("prune_threshold", value)

    # -- drift detector ------------------------------------------------------

    @property
    def warning_alpha(self) -> float:
        """
        Confidence level for the Warning state, in (0, 1].
        """
        return self._warning_alpha

    @warning_alpha.setter
    def warning_alpha(self, value: float) -> None:
        self._warning_alpha = self._half_open_unit("warning_alpha", value)

    @property
    def drift_alpha(self) -> float:
        """
        Confidence level for the Drift state, in (0, 1].
        """
        return self._drift_alpha

    @drift_alpha.setter
    def drift_alpha(self, value: float) -> None:
        self._drift_alpha = self._half_open_unit("drift_alpha", value)

    # -- generalization pruning ---------------------------------------------

    @property
    def generalization_eta(self) -> float:
        """
        Confidence eta of the generalization bound, in (0, 1].
        """
        return self._generalization_eta

    @generalization_eta.setter
    def generalization_eta(self, value: float) -> None:
        self._generalization_eta = self._half_open_unit("generalization_eta", value)

    @property
    def neighborhood_q(self) -> float:
        """
        Radius Q of the input perturbation neighborhood.
        """
        return self._neighborhood_q

    @neighborhood_q.setter
    def neighborhood_q(self, value: float) -> None:
        self._neighborhood_q = self._positive("neighborhood_q", value)

    @property
    def ssm_ceiling(self) -> float:
        """
        Upper clamp applied to each per-rule sensitivity term.
        """
        return self._ssm_ceiling

    @ssm_ceiling.setter
    def ssm_ceiling(self, value: float) -> None:
        self._ssm_ceiling = self._positive("ssm_ceiling", value)

    @property
    def gen_prune_direction(self) -> str:
        """
        # Summary

        Which side of the 3-sigma band prunes an expert.

        -   `high`: prune when the bound rises above mean + 3 std.
        -   `low`: prune when it falls below mean - 3 std.
        """
        return self._gen_prune_direction

    @gen_prune_direction.setter
    def gen_prune_direction(self, value: str) -> None:
        if value not in GEN_PRUNE_DIRECTIONS:
            msg = f"{self.class_name}.gen_prune_direction: "
            msg += f"Expected one of {', '.join(GEN_PRUNE_DIRECTIONS)}. Got {value!r}."
            raise ValueError(msg)
        self._gen_prune_direction = value

    @property
    def gen_prune_warmup(self) -> int:
        """
        Number of chunk estimates an expert must accumulate before it can be
        pruned by generalization error.
        """
        return self._gen_prune_warmup

    @gen_prune_warmup.setter
    def gen_prune_warmup(self, value: int) -> None:
        self._gen_prune_warmup = self._as_int("gen_prune_warmup", value, 1)

    # -- feature selection ---------------------------------------------------

    @property
    def gofs_learning_rate(self) -> float:
        """
        Step size alpha of the feature-selection gradient update.
        """
        return self._gofs_learning_rate

    @gofs_learning_rate.setter
    def gofs_learning_rate(self, value: float) -> None:
        self._gofs_learning_rate = self._positive("gofs_learning_rate", value)

    @property
    def gofs_regularizer(self) -> float:
        """
        Regularization factor chi; the projection ball has radius 1/sqrt(chi).
        """
        return self._gofs_regularizer

    @gofs_regularizer.setter
    def gofs_regularizer(self, value: float) -> None:
        self._gofs_regularizer = self._positive("gofs_regularizer", value)

    @property
    def feature_budget(self) -> Optional[int]:
        """
        Number of input features kept active.  None keeps all of them.
        """
        return self._feature_budget

    @feature_budget.setter
    def feature_budget(self, value: Optional[int]) -> None:
        if value is None:
            self._feature_budget = None
            return
        self._feature_budget = self._as_int("feature_budget", value, 1)

    # -- base learner ----------------------------------------------------------

    @property
    def ds_threshold(self) -> float:
        """
        Datum significance at or above which a sample may become a rule.
        """
        return self._ds_threshold

    @ds_threshold.setter
    def ds_threshold(self, value: float) -> None:
        self._ds_threshold = self._non_negative("ds_threshold", value)

    @property
    def volume_ratio(self) -> float:
        """
        Largest winning-rule width allowed, as a fraction of the feature range.
        """
        return self._volume_ratio

    @volume_ratio.setter
    def volume_ratio(self, value: float) -> None:
        self._volume_ratio = self._positive("volume_ratio", value)

    @property
    def ers_threshold(self) -> float:
        """
        Relative rule-significance score below which a rule is pruned.
        """
        return self._ers_threshold

    @ers_threshold.setter
    def ers_threshold(self, value: float) -> None:
        self._ers_threshold = self._fraction("ers_threshold", value)

    @property
    def pplus_threshold(self) -> float:
        """
        Relative rule density below which a rule is moved to the reserve.
        """
        return self._pplus_threshold

    @pplus_threshold.setter
    def pplus_threshold(self, value: float) -> None:
        self._pplus_threshold = self._fraction("pplus_threshold", value)

    @property
    def consequent_decay(self) -> float:
        """
        Weight-decay factor of the consequent recursive least squares.
        """
        return self._consequent_decay

    @consequent_decay.setter
    def consequent_decay(self, value: float) -> None:
        self._consequent_decay = self._non_negative("consequent_decay", value)

    @property
    def rls_init(self) -> float:
        """
        Diagonal of a new rule's consequent covariance.
        """
        return self._rls_init

    @rls_init.setter
    def rls_init(self, value: float) -> None:
        self._rls_init = self._positive("rls_init", value)

    @property
    def overlap_factor(self) -> float:
        """
        New-rule width as a multiple of the distance to the nearest rule.
        """
        return self._overlap_factor

    @overlap_factor.setter
    def overlap_factor(self, value: float) -> None:
        self._overlap_factor = self._positive("overlap_factor", value)

    @property
    def init_width_fraction(self) -> float:
        """
        First-rule width as a fraction of each feature's observed span.
        """
        return self._init_width_fraction

    @init_width_fraction.setter
    def init_width_fraction(self, value: float) -> None:
        self._init_width_fraction = self._positive("init_width_fraction", value)

    @property
    def min_width(self) -> float:
        """
        Floor applied to every new-rule width.
        """
        return self._min_width

    @min_width.setter
    def min_width(self, value: float) -> None:
        self._min_width = self._positive("min_width", value)

    @property
    def seed(self) -> int:
        """
        Seed recorded with the run.
        """
        return self._seed

    @seed.setter
    def seed(self, value: int) -> None:
        self._seed = self._as_int("seed", value, 0)

    # -- bulk access -----------------------------------------------------------

    @staticmethod
    def keys() -> list[str]:
        """
        Canonical configuration keys, in declaration order.
        """
        return [
            "decreasing_factor",
            "prune_threshold",
            "warning_alpha",
            "drift_alpha",
            "generalization_eta",
            "neighborhood_q",
            "gofs_learning_rate",
            "gofs_regularizer",
            "feature_budget",
            "ds_threshold",
            "volume_ratio",
            "ers_threshold",
            "pplus_threshold",
            "consequent_decay",
            "rls_init",
            "overlap_factor",
            "init_width_fraction",
            "min_width",
            "ssm_ceiling",
            "gen_prune_direction",
            "gen_prune_warmup",
            "seed",
        ]

    @staticmethod
    def canonical_key(key: str) -> str:
        """
        Map an alias to its canonical key.  Canonical keys map to themselves.
        """
        return ALIASES.get(key.lower(), key)

    def set_value(self, key: str, value: Any) -> None:
        """
        # Summary

        Set one configuration value by canonical key or alias.

        Integral values are accepted for float keys, so `--set q=1` works.

        ## Raises

        -   `ConfigError` if the key is unknown or the value is invalid.
        """
        method_name = inspect.stack()[0][3]
        name = self.canonical_key(key)
        if name not in self.keys():
            msg = f"{self.class_name}.{method_name}: "
            msg += f"Unknown configuration key {key!r}. "
            msg += f"Valid keys: {', '.join(self.keys())}. "
            msg += f"Aliases: {', '.join(sorted(ALIASES))}."
            raise ConfigError(msg)
        try:
            setattr(self, name, value)
        except (TypeError, ValueError) as error:
            msg = f"{self.class_name}.{method_name}: "
            msg += f"Invalid value for {name}. "
            msg += f"Error detail: {error}"
            raise ConfigError(msg) from error
        msg = f"{self.class_name}.{method_name}: {name} = {value!r}"
        self.log.debug(msg)

    def to_dict(self) -> dict[str, Any]:
        """
        Return the configuration as a plain dict keyed by canonical keys.
        """
        return {key: getattr(self, key) for key in self.keys()}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "EnsembleConfig":
        """
        # Summary

        Build a configuration from a dict.  Missing keys keep their defaults.

        ## Raises

        -   `ConfigError` for unknown keys or invalid values.
        """
        config = cls()
        for key, value in data.items():
            config.set_value(key, value)
        return config

    def copy(self) -> "EnsembleConfig":
        """
        Return an independent copy.
        """
        other = copy.copy(self)
        other.log = logging.getLogger(f"pensemble.{self.class_name}")
        return other

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EnsembleConfig):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    __hash__ = None  # type: ignore[assignment]
