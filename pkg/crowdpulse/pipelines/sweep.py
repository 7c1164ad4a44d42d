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

"""Gate-time sweeps and population traces of analytic pulses"""

import math
from dataclasses import dataclass, replace
from functools import partial
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Text, Tuple, Union

import numpy as np

from crowdpulse.core.fidelity import FidelityReport, TargetGate, fidelity_report
from crowdpulse.core.io import parse_float, read_csv, write_csv
from crowdpulse.core.model import BASIS_LABELS, SystemParams
from crowdpulse.core.propagation import (
    InitialState,
    PulseSequence,
    propagate,
    propagate_trajectory,
)
from crowdpulse.pipelines.utils.getter import parallel_map
from crowdpulse.pulses.analytic import (
    AnalyticPulseSpec,
    PulseFamily,
    drag_beta_menu,
    normalize_area,
    render,
    sideband_preset,
)

SWEEP_COLUMNS = (
    "gate_time",
    "err_phi",
    "err_phi_star0",
    "err_phi_star1",
    "err_phi_avg",
    "alpha",
    "gamma",
    "leakage",
    "error",
)


def family_spec(
    family: Union[PulseFamily, Text],
    gate_time: float,
    params: SystemParams,
    **overrides,
) -> AnalyticPulseSpec:
    """Default pulse of a family at a given gate time

    Gaussian and DRAG pulses use σ = t_g/6 (DRAG with β = Δ); the sideband
    family uses the δ/2 modulation with a 2Δ derivative divisor. `overrides`
    replace any field of the resulting specification.
    """
    family = PulseFamily(family)
    if family is PulseFamily.SIDEBAND:
        spec = sideband_preset(params, gate_time)
    elif family is PulseFamily.DRAG:
        spec = AnalyticPulseSpec(family, gate_time, drag_beta=params.anharm)
    else:
        spec = AnalyticPulseSpec(family, gate_time)
    overrides = {key: value for key, value in overrides.items() if value is not None}
    return replace(spec, **overrides) if overrides else spec


def simulate(
    spec: AnalyticPulseSpec,
    params: SystemParams,
    dt: float,
    target: Optional[TargetGate] = None,
    normalize: bool = True,
) -> Tuple[PulseSequence, np.ndarray, FidelityReport]:
    """Render (optionally area-normalized), propagate and evaluate one pulse

    Returns
    -------
    pulse : PulseSequence
    unitary : (9, 9) np.ndarray
    report : FidelityReport
    """
    if normalize:
        spec = normalize_area(spec, params, dt)
    pulse = render(spec, dt, params)
    unitary = propagate(params, pulse)
    return pulse, unitary, fidelity_report(unitary, target)


@dataclass(frozen=True)
class SweepRow:
    gate_time: float
    report: Optional[FidelityReport] = None
    error: Optional[Text] = None

    def values(self) -> Tuple:
        if self.report is None:
            nan = math.nan
            return (self.gate_time,) + (nan,) * 7 + (self.error,)
        errors = self.report.errors()
        return (
            self.gate_time,
            errors["err_phi"],
            errors["err_phi_star0"],
            errors["err_phi_star1"],
            errors["err_phi_avg"],
            self.report.alpha,
            self.report.gamma,
            self.report.leakage,
            self.error,
        )


@dataclass
class SweepResult:
    """Fidelity errors and phases of one pulse family over gate times"""

    family: Text
    rows: List[SweepRow]

    def __post_init__(self):
        gate_times = [row.gate_time for row in self.rows]
        if any(b <= a for a, b in zip(gate_times, gate_times[1:])):
            raise ValueError("Sweep rows must be sorted strictly ascending in gate time.")

    @property
    def gate_times(self) -> np.ndarray:
        return np.array([row.gate_time for row in self.rows])

    def column(self, name: Text) -> np.ndarray:
        index = SWEEP_COLUMNS.index(name)
        return np.array([row.values()[index] for row in self.rows], dtype=float)

    def best(self, column: Text = "err_phi_avg") -> SweepRow:
        """Row with the smallest value of `column` (failed rows ignored)"""
        values = self.column(column)
        if np.all(np.isnan(values)):
            raise ValueError(f"No valid row in {self.family} sweep.")
        return self.rows[int(np.nanargmin(values))]

    def to_csv(self, path: Union[Text, Path]):
        write_csv(path, SWEEP_COLUMNS, (row.values() for row in self.rows))

    @classmethod
    def from_csv(cls, path: Union[Text, Path], family: Text = "") -> "SweepResult":
        rows = []
        for record in read_csv(path):
            if record["error"]:
                rows.append(SweepRow(float(record["gate_time"]), error=record["error"]))
                continue
            report = FidelityReport(
                phi=1.0 - parse_float(record["err_phi"]),
                phi_star0=1.0 - parse_float(record["err_phi_star0"]),
                phi_star1=1.0 - parse_float(record["err_phi_star1"]),
                phi_avg=1.0 - parse_float(record["err_phi_avg"]),
                alpha=parse_float(record["alpha"]),
                gamma=parse_float(record["gamma"]),
                leakage=parse_float(record["leakage"]),
            )
            rows.append(SweepRow(float(record["gate_time"]), report=report))
        return cls(family=family, rows=rows)


def _sweep_point(
    gate_time: float,
    family: PulseFamily,
    params: SystemParams,
    dt: float,
    target: Optional[TargetGate],
    normalize: bool,
    overrides: Dict,
) -> SweepRow:
    try:
        spec = family_spec(family, gate_time, params, **overrides)
        _, _, report = simulate(spec, params, dt, target=target, normalize=normalize)
    except (ValueError, ArithmeticError, np.linalg.LinAlgError) as e:
        return SweepRow(gate_time, error=f"{type(e).__name__}: {e}")
    return SweepRow(gate_time, report=report)


def sweep_gate_time(
    family: Union[PulseFamily, Text],
    params: SystemParams,
    t_range: Sequence[float],
    dt: float,
    target: Optional[TargetGate] = None,
    normalize: bool = True,
    num_workers: Optional[int] = None,
    hook: Optional[Callable] = None,
    **overrides,
) -> SweepResult:
    """Fidelity errors and phases of a pulse family over gate times

    For every gate time the pulse amplitude is normalized by the area
    condition, the pulse is rendered and propagated, and all fidelity
    quantities are reported. Points that fail are kept as flagged rows.

    Parameters
    ----------
    family : PulseFamily or str
    params : SystemParams
    t_range : sequence of float
        Gate times (ns), strictly ascending.
    dt : float
        Time step (ns).
    target : TargetGate, optional
        Defaults to X.
    normalize : bool, optional
        Solve the area condition for the amplitude. Defaults to True.
    num_workers : int, optional
        Worker processes. See `get_num_workers`.
    hook : callable, optional
        Called as hook("sweep", row, total=num_points, completed=index).
    **overrides
        Fields of the pulse specification (e.g. drag_beta, amplitude).

    Returns
    -------
    result : SweepResult
    """
    family = PulseFamily(family)
    gate_times = [float(t) for t in np.atleast_1d(t_range)]
    if len(gate_times) == 0:
        raise ValueError("Gate time range must not be empty.")
    if any(b <= a for a, b in zip(gate_times, gate_times[1:])):
        raise ValueError("Gate times must be strictly ascending.")

    def on_result(index: int, row: SweepRow):
        if hook is not None:
            hook("sweep", row, total=len(gate_times), completed=index + 1)

    rows = parallel_map(
        partial(
            _sweep_point,
            family=family,
            params=params,
            dt=dt,
            target=target,
            normalize=normalize,
            overrides=overrides,
        ),
        gate_times,
        num_workers=num_workers,
        on_result=on_result,
    )
    return SweepResult(family=family.value, rows=rows)


def sweep_drag_menu(
    params: SystemParams,
    t_range: Sequence[float],
    dt: float,
    target: Optional[TargetGate] = None,
    num_workers: Optional[int] = None,
    hook: Optional[Callable] = None,
) -> Dict[Text, SweepResult]:
    """DRAG sweeps for β ∈ {Δ, δ, δ-Δ} and their pointwise minimum

    Returns
    -------
    sweeps : dict
        One SweepResult per divisor ("anharm", "delta", "delta_minus_anharm")
        and "pointwise_min", which keeps at every gate time the row with the
        smallest 1 - Φ_avg.
    """
    sweeps = {
        name: sweep_gate_time(
            PulseFamily.DRAG,
            params,
            t_range,
            dt,
            target=target,
            num_workers=num_workers,
            hook=hook,
            drag_beta=beta,
        )
        for name, beta in drag_beta_menu(params).items()
    }

    best_rows = []
    for rows in zip(*(sweep.rows for sweep in sweeps.values())):
        valid = [row for row in rows if row.report is not None]
        if not valid:
            best_rows.append(rows[0])
            continue
        best_rows.append(min(valid, key=lambda row: row.values()[4]))
    sweeps["pointwise_min"] = SweepResult(family="drag_pointwise_min", rows=best_rows)
    return sweeps


def gate_time_grid(start: float, stop: float, step: float) -> np.ndarray:
    """Gate times from `start` to `stop` (inclusive) every `step` ns"""
    if step <= 0.0:
        raise ValueError(f"Gate time step must be positive (got {step}).")
    if stop < start:
        raise ValueError(f"Empty gate time range [{start}, {stop}].")
    num_points = int(math.floor((stop - start) / step + 1e-9)) + 1
    return start + step * np.arange(num_points)


@dataclass(frozen=True, eq=False)
class PopulationTrace:
    """Basis-state populations after every time step

    populations[j, b] is the population of basis state BASIS_LABELS[b] at
    time times[j].
    """

    times: np.ndarray
    populations: np.ndarray

    @property
    def labels(self) -> Tuple[Text, ...]:
        return tuple(f"p_{label}" for label in BASIS_LABELS)

    def final(self, label: Text) -> float:
        return float(self.populations[-1, BASIS_LABELS.index(label)])

    def qubit2_leakage(self) -> np.ndarray:
        """Population of qubit 2's |2> level over time"""
        indices = [BASIS_LABELS.index(f"{j1}2") for j1 in range(3)]
        return self.populations[:, indices].sum(axis=1)

    def to_csv(self, path: Union[Text, Path]):
        write_csv(
            path,
            ("t_ns",) + self.labels,
            (
                (t,) + tuple(row)
                for t, row in zip(self.times, self.populations.astype(float))
            ),
        )


def trace_populations(
    pulse: PulseSequence, params: SystemParams, initial: InitialState
) -> PopulationTrace:
    """Populations during a pulse, starting from `initial`

    Parameters
    ----------
    pulse : PulseSequence
    params : SystemParams
    initial : int, str or array-like
        Basis index, basis label such as "01", or normalized state vector.
    """
    populations = propagate_trajectory(params, pulse, initial)
    times = np.arange(pulse.num_samples + 1) * pulse.dt
    return PopulationTrace(times=times, populations=populations)
