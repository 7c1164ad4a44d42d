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

"""Experimental calibration protocol for analytic pulses

1. derive the pulse shape from (δ, Δ)
2. solve the area condition for A_π at every candidate gate time
3. pick the gate time maximizing Φ_avg on a grid, then refine it locally
4. report the phases α, γ needed for the frame correction
"""

import math
from dataclasses import dataclass
from typing import Callable, Dict, Optional, Text, Tuple, Union

import numpy as np
from scipy.optimize import minimize_scalar

from crowdpulse.core.fidelity import FidelityReport, TargetGate
from crowdpulse.core.model import SystemParams
from crowdpulse.pipelines.sweep import SweepResult, family_spec, simulate, sweep_gate_time
from crowdpulse.pulses.analytic import AnalyticPulseSpec, PulseFamily, normalize_area

# a gate is usable when it beats a random guess of the qubit-1 state
USABLE_PHI_AVG = 0.5


class NoUsableGateTimeError(ValueError):
    """No gate time in the search range reaches Φ_avg > 0.5"""


@dataclass(frozen=True)
class ProtocolRecommendation:
    """Calibrated gate time, amplitude and phase offsets"""

    gate_time: float
    amplitude: float
    alpha: float
    gamma: float
    report: FidelityReport
    spec: AnalyticPulseSpec
    grid_best_gate_time: float
    grid_best_phi_avg: float
    sweep: SweepResult

    def to_dict(self) -> Dict:
        return {
            "gate_time": self.gate_time,
            "amplitude": self.amplitude,
            "alpha": self.alpha,
            "gamma": self.gamma,
            "grid_best_gate_time": self.grid_best_gate_time,
            "grid_best_phi_avg": self.grid_best_phi_avg,
            "report": self.report.to_dict(),
            "spec": self.spec.to_dict(),
        }


def protocol_run(
    params: SystemParams,
    family: Union[PulseFamily, Text],
    t_search_range: Tuple[float, float],
    dt: float,
    num_points: int = 27,
    target: Optional[TargetGate] = None,
    xatol: float = 1e-3,
    num_workers: Optional[int] = None,
    hook: Optional[Callable] = None,
    **overrides,
) -> ProtocolRecommendation:
    """Choose the gate time of a pulse family that maximizes Φ_avg

    Parameters
    ----------
    params : SystemParams
    family : PulseFamily or str
    t_search_range : (float, float)
        Smallest and largest gate time (ns). Both may be equal.
    dt : float
        Time step (ns).
    num_points : int, optional
        Grid size of the coarse search. Defaults to 27.
    target : TargetGate, optional
        Defaults to X.
    xatol : float, optional
        Gate time tolerance (ns) of the local refinement. Defaults to 1e-3.
    num_workers : int, optional
        Worker processes of the coarse search.
    hook : callable, optional
        Forwarded to `sweep_gate_time`.
    **overrides
        Fields of the pulse specification.

    Returns
    -------
    recommendation : ProtocolRecommendation

    Raises
    ------
    NoUsableGateTimeError
        When no grid point reaches Φ_avg > 0.5.
    """
    family = PulseFamily(family)
    start, stop = map(float, t_search_range)
    if not (0.0 < start <= stop):
        raise ValueError(f"Invalid gate time search range [{start}, {stop}].")

    grid = [start] if start == stop else np.linspace(start, stop, max(2, num_points))
    sweep = sweep_gate_time(
        family, params, grid, dt, target=target, num_workers=num_workers, hook=hook, **overrides
    )

    phi_avg = 1.0 - sweep.column("err_phi_avg")
    usable = np.isfinite(phi_avg) & (phi_avg > USABLE_PHI_AVG)
    if not np.any(usable):
        raise NoUsableGateTimeError(
            f"No gate time in [{start:g}, {stop:g}] ns reaches Φ_avg > {USABLE_PHI_AVG} "
            f"with the {family.value} family."
        )

    best = int(np.argmax(np.where(usable, phi_avg, -np.inf)))
    grid_best_gate_time = float(sweep.gate_times[best])
    grid_best_phi_avg = float(phi_avg[best])

    def evaluate(gate_time: float):
        spec = normalize_area(family_spec(family, gate_time, params, **overrides), params, dt)
        _, _, report = simulate(spec, params, dt, target=target, normalize=False)
        return spec, report

    gate_time = grid_best_gate_time
    spec, report = evaluate(gate_time)

    if len(sweep.rows) > 1:
        lower = float(sweep.gate_times[max(best - 1, 0)])
        upper = float(sweep.gate_times[min(best + 1, len(sweep.rows) - 1)])

        def infidelity(t: float) -> float:
            try:
                return 1.0 - evaluate(t)[1].phi_avg
            except (ValueError, ArithmeticError):
                return math.inf

        # bounded Brent search: golden-section steps with parabolic acceleration
        result = minimize_scalar(
            infidelity, bounds=(lower, upper), method="bounded", options={"xatol": xatol}
        )
        refined_spec, refined_report = evaluate(float(result.x))
        if refined_report.phi_avg >= report.phi_avg:
            gate_time, spec, report = float(result.x), refined_spec, refined_report

    return ProtocolRecommendation(
        gate_time=gate_time,
        amplitude=spec.amplitude,
        alpha=report.alpha,
        gamma=report.gamma,
        report=report,
        spec=spec,
        grid_best_gate_time=grid_best_gate_time,
        grid_best_phi_avg=grid_best_phi_avg,
        sweep=sweep,
    )
