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
Tests for the Hoeffding slack and the drift monitor.
"""
import math
import time

import numpy as np
import pytest

from pensemble.drift import DriftMonitor, hoeffding_epsilon, single_mean_epsilon
from pensemble.drift_state import DriftState
from pensemble.exceptions import InsufficientDataError


def run_monitor(values, monitor=None) -> tuple[DriftMonitor, list[DriftState]]:
    monitor = monitor or DriftMonitor()
    return monitor, [monitor.observe(value) for value in values]


class TestHoeffdingEpsilon:
    """eps = (b - a) sqrt(m / (2 cut (m + cut)) ln(1 / alpha))."""

    def test_known_value(self):
        assert hoeffding_epsilon(100, 100, 0.0, 1.0, 0.005) == pytest.approx(0.11509, abs=1e-5)

    def test_alpha_one_gives_zero(self):
        assert hoeffding_epsilon(50, 20, 0.0, 1.0, 1.0) == 0.0

    def test_degenerate_range_gives_zero(self):
        assert hoeffding_epsilon(50, 20, 0.3, 0.3, 0.01) == 0.0

    def test_scales_with_range(self):
        assert hoeffding_epsilon(40, 10, 0.0, 2.0, 0.01) == pytest.approx(2.0 * hoeffding_epsilon(40, 10, 0.0, 1.0, 0.01))

    def test_smaller_alpha_is_wider(self):
        assert hoeffding_epsilon(40, 10, 0.0, 1.0, 0.001) > hoeffding_epsilon(40, 10, 0.0, 1.0, 0.005)

    @pytest.mark.parametrize("cut, m", [(0, 5), (5, 0)])
    def test_counts_must_be_positive(self, cut, m):
        with pytest.raises(InsufficientDataError):
            hoeffding_epsilon(cut, m, 0.0, 1.0, 0.01)

    def test_alpha_range(self):
        with pytest.raises(ValueError):
            hoeffding_epsilon(5, 5, 0.0, 1.0, 0.0)

    def test_single_mean_without_samples(self):
        assert single_mean_epsilon(0, 0.0, 1.0, 0.01) == math.inf


class TestDriftMonitor:
    """States follow the overall mean rising above the cut mean."""

    def test_first_observation_is_stable(self):
        assert DriftMonitor().observe(1.0) is DriftState.STABLE

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            DriftMonitor().observe(1.5)

    def test_invalid_alpha(self):
        with pytest.raises(ValueError):
            DriftMonitor(warning_alpha=0.0)

    def test_constant_stream_never_drifts(self):
        monitor, states = run_monitor([0.0] * 2000)
        assert set(states) == {DriftState.STABLE}
        assert monitor.detections == 0

    def test_jump_is_detected_and_resets(self):
        monitor, states = run_monitor([0.0] * 500 + [1.0] * 100)
        first = states.index(DriftState.DRIFT)
        assert 500 <= first < 530
        assert DriftState.WARNING in states[500:first] or states[first - 1] is DriftState.STABLE
        assert monitor.detections >= 1
        assert monitor.total_n < 100

    def test_warning_precedes_or_coincides_with_drift(self):
        _, states = run_monitor([0.0] * 1000 + [1.0] * 50)
        first_drift = states.index(DriftState.DRIFT)
        first_alert = min(index for index, state in enumerate(states) if state is not DriftState.STABLE)
        assert first_alert <= first_drift

    def test_deterministic(self, rng):
        values = (rng.random(3000) < 0.2).astype(float)
        _, first = run_monitor(values)
        _, second = run_monitor(values)
        assert first == second

    def test_reset(self):
        monitor, _ = run_monitor([1.0, 0.0, 1.0])
        monitor.reset()
        assert monitor.total_n == 0
        assert monitor.state is DriftState.STABLE

    def test_dict_round_trip_continues_identically(self, rng):
        values = (rng.random(400) < 0.3).astype(float)
        monitor, _ = run_monitor(values[:200])
        clone = DriftMonitor.from_dict(monitor.to_dict())
        assert [monitor.observe(value) for value in values[200:]] == [clone.observe(value) for value in values[200:]]


class TestBoundValidity:
    """Monte Carlo checks of the one-sided bound on uniform data."""

    @pytest.mark.parametrize("alpha", [0.005, 0.001])
    def test_false_alarm_rate(self, rng, alpha):
        runs, cut, m = 10_000, 200, 200
        data = rng.uniform(0.0, 1.0, size=(runs, cut + m))
        epsilon = hoeffding_epsilon(cut, m, 0.0, 1.0, alpha)
        cut_mean = data[:, :cut].mean(axis=1)
        total_mean = data.mean(axis=1)
        post_mean = data[:, cut:].mean(axis=1)
        limit = alpha + 3.0 * math.sqrt(alpha / runs)
        assert np.mean(total_mean - cut_mean >= epsilon) <= limit
        assert np.mean(post_mean - cut_mean >= epsilon) <= limit


class TestMonitorOnBernoulliStreams:
    """Error-rate streams with and without a change."""

    def test_stationary_stream_rarely_alarms(self, rng):
        started = time.perf_counter()
        alarms = 0
        for _ in range(100):
            values = (rng.random(5000) < 0.1).astype(float)
            monitor, _ = run_monitor(values)
            alarms += int(monitor.detections > 0)
        assert alarms <= 5
        assert time.perf_counter() - started < 10.0

    def test_change_is_detected_quickly(self, rng):
        started = time.perf_counter()
        detected = 0
        for _ in range(100):
            values = np.concatenate([rng.random(2000) < 0.1, rng.random(2000) < 0.4]).astype(float)
            monitor = DriftMonitor()
            delay = None
            for index, value in enumerate(values):
                if monitor.observe(value) is DriftState.DRIFT and index >= 2000:
                    delay = index - 2000
                    break
            detected += int(delay is not None and delay < 300)
        assert detected >= 95
        assert time.perf_counter() - started < 10.0
