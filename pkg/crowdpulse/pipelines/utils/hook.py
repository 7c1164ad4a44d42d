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

import math
import time
from copy import deepcopy
from typing import Any, Dict, Optional, Text

from rich.progress import (
    BarColumn,
    Progress,
    TaskProgressColumn,
    TextColumn,
    TimeRemainingColumn,
)


def describe(step_name: Text, step_artifact: Any) -> Text:
    """Progress label, with the error of the last evaluated gate when there is one"""
    report = getattr(step_artifact, "report", None)
    if report is None or math.isnan(report.phi_avg):
        return step_name
    return f"{step_name} (1 - Φ_avg = {1.0 - report.phi_avg:.1e})"


class ArtifactHook:
    """Hook to keep artifacts of each internal step

    Parameters
    ----------
    *steps : str, optional
        Steps to keep. Defaults to all steps.

    Usage
    -----
    >>> with ArtifactHook("sweep") as hook:
    ...     result = sweep_gate_time(family, params, gate_times, dt, hook=hook)
    # hook.artifacts["sweep"] contains the last artifact of the "sweep" step
    """

    def __init__(self, *steps: Text):
        self.steps = steps
        self.artifacts: Dict[Text, Any] = dict()

    def __enter__(self):
        return self

    def __exit__(self, *args):
        pass

    def __call__(
        self,
        step_name: Text,
        step_artifact: Any,
        total: Optional[int] = None,
        completed: Optional[int] = None,
    ):
        if (step_artifact is None) or (self.steps and step_name not in self.steps):
            return

        self.artifacts[step_name] = deepcopy(step_artifact)


class ProgressHook:
    """Hook to show progress of each internal step

    Parameters
    ----------
    transient: bool, optional
        Clear the progress on exit. Defaults to False.

    Example
    -------
    with ProgressHook() as hook:
        trace = optimize(params, initial, config, hook=hook)
    """

    def __init__(self, transient: bool = False):
        self.transient = transient

    def __enter__(self):
        self.progress = Progress(
            TextColumn("[progress.description]{task.description}"),
            BarColumn(),
            TaskProgressColumn(),
            TimeRemainingColumn(elapsed_when_finished=True),
            transient=self.transient,
        )
        self.progress.start()
        return self

    def __exit__(self, *args):
        self.progress.stop()

    def __call__(
        self,
        step_name: Text,
        step_artifact: Any,
        total: Optional[int] = None,
        completed: Optional[int] = None,
    ):
        if completed is None:
            completed = total = 1

        if not hasattr(self, "step_name") or step_name != self.step_name:
            self.step_name = step_name
            self.step = self.progress.add_task(self.step_name)

        self.progress.update(
            self.step,
            completed=completed,
            total=total,
            description=describe(step_name, step_artifact),
        )

        # force refresh when completed
        if completed >= total:
            self.progress.refresh()


class TimingHook:
    """Hook to compute processing time of internal steps

    Usage
    -----
    >>> with TimingHook() as hook:
    ...     trace = optimize(params, initial, config, hook=hook)
    # hook.timing contains processing time for each step
    """

    def __enter__(self):
        self._start = time.time()
        self._start_time = dict()
        self._end_time = dict()
        self.timing: Dict[Text, float] = dict()
        return self

    def __exit__(self, *args):
        self.timing["total"] = time.time() - self._start
        for step_name, start_time in self._start_time.items():
            end_time = self._end_time.get(step_name, time.time())
            self.timing[step_name] = end_time - start_time

    def __call__(
        self,
        step_name: Text,
        step_artifact: Any,
        total: Optional[int] = None,
        completed: Optional[int] = None,
    ):
        if completed is None:
            return

        if step_name not in self._start_time:
            self._start_time[step_name] = time.time()

        if total is not None and completed >= total:
            self._end_time[step_name] = time.time()


class Hooks:
    """List of hooks

    Usage
    -----
    >>> with Hooks(ProgressHook(), TimingHook()) as hook:
    ...     result = protocol_run(params, "sideband", (12.0, 25.0), 0.01, hook=hook)

    """

    def __init__(self, *hooks):
        self.hooks = hooks

    def __enter__(self):
        for hook in self.hooks:
            if hasattr(hook, "__enter__"):
                hook.__enter__()
        return self

    def __exit__(self, *args):
        for hook in self.hooks:
            if hasattr(hook, "__exit__"):
                hook.__exit__(*args)

    def __call__(
        self,
        step_name: Text,
        step_artifact: Any,
        total: Optional[int] = None,
        completed: Optional[int] = None,
    ):
        for hook in self.hooks:
            hook(step_name, step_artifact, total=total, completed=completed)
