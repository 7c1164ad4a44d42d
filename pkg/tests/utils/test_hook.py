# MIT License
#
# Copyright (c) 2024- crowdpulse developers
#
# Permission is hereby granted, free of charge, to any person obtaining a copy
# of this software and associated documentation files (the "Software"), to deal
# in the Software without restriction, including without limitation the rights
# to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
# copies of the Software, and to permit persons to whom the Software is
# furnished to do so, subject to the following conditions:
#
# The above copyright notice and this permission notice shall be included in all
# copies or substantial portions of the Software.
#
# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
# IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
# FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
# AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
# LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
# OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
# SOFTWARE.


import multiprocessing
import sys

import numpy as np
import pytest

from crowdpulse.pipelines.utils.getter import (
    NUM_WORKERS_ENV,
    get_num_workers,
    parallel_map,
)
from crowdpulse.core.fidelity import FidelityReport
from crowdpulse.pipelines.sweep import SweepRow
from crowdpulse.pipelines.utils.hook import (
    ArtifactHook,
    Hooks,
    ProgressHook,
    TimingHook,
    describe,
)
from crowdpulse.utils.random import create_rng


def square(x):
    return x * x


def test_artifact_hook_filters_steps():
    with ArtifactHook("sweep") as hook:
        hook("sweep", [1, 2], total=2, completed=1)
        hook("grape", "ignored")
        hook("sweep", None)
    assert hook.artifacts == {"sweep": [1, 2]}


def test_timing_hook():
    with TimingHook() as hook:
        hook("sweep", None, total=2, completed=1)
        hook("sweep", None, total=2, completed=2)
        hook("grape", None)
    assert set(hook.timing) == {"total", "sweep"}
    assert hook.timing["sweep"] >= 0.0


def test_hooks_dispatch():
    artifacts, timing = ArtifactHook(), TimingHook()
    with Hooks(artifacts, timing, ProgressHook(transient=True)) as hook:
        for completed in range(1, 4):
            hook("sweep", completed, total=3, completed=completed)
    assert artifacts.artifacts["sweep"] == 3
    assert "sweep" in timing.timing


def test_describe_reports_last_error():
    report = FidelityReport(
        phi=0.998,
        phi_star0=0.999,
        phi_star1=0.999,
        phi_avg=0.999,
        alpha=0.0,
        gamma=0.0,
        leakage=0.0,
    )
    assert describe("sweep", SweepRow(17.0, report)) == "sweep (1 - Φ_avg = 1.0e-03)"
    assert describe("sweep", SweepRow(17.0, None, "failed")) == "sweep"
    assert describe("grape", np.zeros(3)) == "grape"


def test_num_workers(monkeypatch):
    monkeypatch.delenv(NUM_WORKERS_ENV, raising=False)
    assert get_num_workers(0) == 0
    if sys.platform != "darwin":
        assert get_num_workers() == multiprocessing.cpu_count() // 2

    monkeypatch.setenv(NUM_WORKERS_ENV, "0")
    assert get_num_workers() == 0

    monkeypatch.setenv(NUM_WORKERS_ENV, "many")
    with pytest.raises(ValueError):
        get_num_workers()
    with pytest.raises(ValueError):
        get_num_workers(-1)


def test_parallel_map_preserves_order():
    calls = []
    results = parallel_map(
        square, range(5), num_workers=0, on_result=lambda i, r: calls.append((i, r))
    )
    assert results == [0, 1, 4, 9, 16]
    assert calls == list(enumerate(results))


def test_create_rng():
    first = create_rng(0, "initial_pulse", 4.0).standard_normal(5)
    again = create_rng(0, "initial_pulse", 4.0).standard_normal(5)
    other = create_rng(0, "initial_pulse", 6.0).standard_normal(5)
    np.testing.assert_array_equal(first, again)
    assert not np.array_equal(first, other)
