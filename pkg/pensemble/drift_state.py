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
States reported by the drift monitor.
"""
from __future__ import absolute_import, division, print_function

__metaclass__ = type  # pylint: disable=invalid-name

from enum import Enum


class DriftState(Enum):
    """
    # Summary

    Enumeration for the state of a monitored data stream.

    - STABLE: No change detected.  The winning expert is trained.
    - WARNING: A change may be under way.  Nothing is trained.
    - DRIFT: A change is confirmed.  A new expert is created.

    # Usage

    ```python
    from pensemble.drift_state import DriftState
    chunk_state = DriftState.STABLE
    for state in observed_states:
        chunk_state = chunk_state.worst(state)
    if chunk_state.creates_expert():
        ...
    ```
    """

    STABLE = "stable"
    WARNING = "warning"
    DRIFT = "drift"

    @property
    def severity(self) -> int:
        """
        # Summary

        Rank of the state: STABLE 0, WARNING 1, DRIFT 2.
        """
        return _SEVERITY[self]

    def worst(self, other: "DriftState") -> "DriftState":
        """
        # Summary

        Return the more severe of this state and `other`.

        ## Examples

        ```python
        DriftState.STABLE.worst(DriftState.WARNING)  # Returns WARNING
        DriftState.DRIFT.worst(DriftState.STABLE)  # Returns DRIFT
        ```
        """
        if other.severity > self.severity:
            return other
        return self

    def creates_expert(self) -> bool:
        """
        # Summary

        Return True if this state calls for a new local expert.
        """
        return self == DriftState.DRIFT

    def trains_winner(self) -> bool:
        """
        # Summary

        Return True if this state calls for training the winning expert.
        """
        return self == DriftState.STABLE


_SEVERITY = {
    DriftState.STABLE: 0,
    DriftState.WARNING: 1,
    DriftState.DRIFT: 2,
}
