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

"""Gradient ascent pulse engineering

The controls Ω_X[j], Ω_Y[j] of a piecewise-constant pulse are updated along
the exact gradient of the fidelity, minus an optional boundary penalty. The
derivative of each slice propagator exp(-iH_j·dt) is obtained from the
eigendecomposition H_j = V·diag(e)·V† as

    ∂U_j = V·(G ∘ (V†·∂H·V))·V†,
    G_mn = -i·dt·exp(-i(e_m + e_n)·dt/2)·sinc((e_m - e_n)·dt/2),

which is exact for any time step.
"""

import math
from dataclasses import asdict, dataclass, field, replace
from enum import Enum
from functools import partial
from pathlib import Path
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Text, Tuple, Union

import numpy as np
from omegaconf import OmegaConf

from crowdpulse.core.fidelity import FidelityReport, TargetGate, fidelity_report
from crowdpulse.core.io import load_config
from crowdpulse.core.model import SystemParams, build_control_generators
from crowdpulse.core.propagation import (
    PulseSequence,
    cumulative_product,
    diagonalize,
    propagate,
    slice_hamiltonians,
)
from crowdpulse.pipelines.utils.getter import parallel_map
from crowdpulse.pulses.analytic import (
    AnalyticPulseSpec,
    PulseFamily,
    normalize_area,
    num_samples,
    render,
)
from crowdpulse.utils.random import create_rng

# sufficient increase (Armijo) constant of the line search
ARMIJO = 1e-4


class Objective(Enum):
    FULL = "full"
    AVERAGE = "average"


class DivergenceError(ArithmeticError):
    """Optimization produced a non-finite pulse or objective"""


@dataclass(frozen=True)
class GrapeConfig:
    """Optimizer hyper-parameters

    Parameters
    ----------
    dt : float, optional
        Time step (ns). Defaults to 0.01.
    gate_time : float, optional
        Gate time (ns). Defaults to 4.
    target : TargetGate or str, optional
        Target gate on qubit 1. Defaults to X.
    objective : Objective or str, optional
        "full" maximizes Φ, "average" maximizes Φ_avg. Defaults to "full".
    step_size : float, optional
        Initial step ε of the update Ω → Ω + ε·∂J/∂Ω. Defaults to 1.
    max_iterations : int, optional
        Defaults to 2000.
    convergence_threshold : float, optional
        Stop when an accepted step improves the objective by less than this.
        Defaults to 1e-12.
    penalty_weight : float, optional
        Weight of the boundary amplitude penalty. Defaults to 0 (disabled).
    seed : int, optional
        Seed of the initial pulse perturbation. Defaults to 0.
    fidelity_goal : float, optional
        Stop as soon as the (unpenalized) fidelity reaches this value.
    backtrack_factor : float, optional
        Step reduction after a rejected step. Defaults to 0.5.
    growth_factor : float, optional
        Step increase after an accepted step. Defaults to 1.5.
    max_backtracks : int, optional
        Rejected steps before giving up. Defaults to 40.
    perturbation : float, optional
        Relative amplitude of the initial pulse perturbation. Defaults to 0.01.
    """

    dt: float = 0.01
    gate_time: float = 4.0
    target: Union[TargetGate, Text] = field(default_factory=TargetGate)
    objective: Union[Objective, Text] = Objective.FULL
    step_size: float = 1.0
    max_iterations: int = 2000
    convergence_threshold: float = 1e-12
    penalty_weight: float = 0.0
    seed: int = 0
    fidelity_goal: Optional[float] = None
    backtrack_factor: float = 0.5
    growth_factor: float = 1.5
    max_backtracks: int = 40
    perturbation: float = 0.01

    def __post_init__(self):
        if isinstance(self.target, str):
            object.__setattr__(self, "target", TargetGate.named(self.target))
        object.__setattr__(self, "objective", Objective(self.objective))

        if not (np.isfinite(self.dt) and self.dt > 0.0):
            raise ValueError(f"Time step must be positive (got dt={self.dt}).")
        if not self.gate_time > 0.0 or round(self.gate_time / self.dt) < 2:
            raise ValueError(
                f"Gate time {self.gate_time} ns must span at least 2 steps of {self.dt} ns."
            )
        if not self.step_size > 0.0:
            raise ValueError(f"Step size must be positive (got {self.step_size}).")
        if self.max_iterations < 0:
            raise ValueError(
                f"Number of iterations must be non-negative (got {self.max_iterations})."
            )
        if self.penalty_weight < 0.0:
            raise ValueError(f"Penalty weight must be non-negative (got {self.penalty_weight}).")
        if not 0.0 < self.backtrack_factor < 1.0:
            raise ValueError(f"Backtrack factor must be in (0, 1) (got {self.backtrack_factor}).")
        if self.growth_factor < 1.0:
            raise ValueError(f"Growth factor must be at least 1 (got {self.growth_factor}).")

    @property
    def num_samples(self) -> int:
        return num_samples(self.gate_time, self.dt)

    def to_dict(self) -> Dict:
        config = asdict(self)
        config["target"] = self.target.name
        config["objective"] = self.objective.value
        return config

    @classmethod
    def from_config(
        cls, config: Union[Text, Path, Mapping, None] = None, **overrides
    ) -> "GrapeConfig":
        """Load a configuration file over the defaults

        Parameters
        ----------
        config : str, Path, mapping, optional
            JSON file (or mapping) with any subset of the fields.
        **overrides
            Field values taking precedence over the file. None values are ignored.
        """
        defaults = cls().to_dict()
        merged = load_config(config, defaults, what="GRAPE configuration")
        merged = OmegaConf.merge(
            merged, {key: value for key, value in overrides.items() if value is not None}
        )
        return cls(**OmegaConf.to_container(merged, resolve=True))


def _objective_terms(config: GrapeConfig) -> List[Tuple[float, np.ndarray]]:
    # objective = Σ w·|Tr(T†U)|²
    if config.objective is Objective.FULL:
        return [(1.0 / 16.0, config.target.full_block())]
    return [
        (1.0 / 8.0, config.target.reduced_block(0)),
        (1.0 / 8.0, config.target.reduced_block(1)),
    ]


def _boundary_weights(num_samples: int) -> np.ndarray:
    ramp_length = max(1, int(round(0.05 * num_samples)))
    # raised cosine, 1 on the outermost samples
    ramp = 0.5 * (1.0 + np.cos(np.pi * np.arange(ramp_length) / ramp_length))
    weights = np.zeros(num_samples)
    weights[:ramp_length] = ramp
    tail = slice(num_samples - ramp_length, num_samples)
    weights[tail] = np.maximum(weights[tail], ramp[::-1])
    return weights


def boundary_penalty(
    pulse: PulseSequence, weight: float
) -> Tuple[float, Tuple[np.ndarray, np.ndarray]]:
    """Quadratic penalty on the amplitudes at both ends of the pulse

    The first and last M = max(1, round(0.05·N)) samples are weighted by a
    raised-cosine ramp r_j equal to 1 on the outermost samples:

        P = weight · Σ_j r_j·(Ω_X[j]² + Ω_Y[j]²) / Σ_j r_j

    Parameters
    ----------
    pulse : PulseSequence
    weight : float
        Non-negative penalty weight.

    Returns
    -------
    value : float
    gradient : (np.ndarray, np.ndarray)
        ∂P/∂Ω_X[j] and ∂P/∂Ω_Y[j].
    """
    if weight < 0.0:
        raise ValueError(f"Penalty weight must be non-negative (got {weight}).")

    ramp = _boundary_weights(pulse.num_samples)
    scale = weight / np.sum(ramp)
    value = scale * float(np.sum(ramp * (pulse.omega_x**2 + pulse.omega_y**2)))
    return value, (2.0 * scale * ramp * pulse.omega_x, 2.0 * scale * ramp * pulse.omega_y)


def _fidelity(unitary: np.ndarray, terms: List[Tuple[float, np.ndarray]]) -> float:
    return float(sum(w * abs(np.vdot(block, unitary)) ** 2 for w, block in terms))


def objective_value(params: SystemParams, pulse: PulseSequence, config: GrapeConfig) -> float:
    """Penalized objective J = fidelity - boundary penalty"""
    fidelity = _fidelity(propagate(params, pulse), _objective_terms(config))
    if config.penalty_weight > 0.0:
        fidelity -= boundary_penalty(pulse, config.penalty_weight)[0]
    return fidelity


def _value_and_gradient(
    params: SystemParams, pulse: PulseSequence, config: GrapeConfig
) -> Tuple[float, float, np.ndarray, np.ndarray]:
    """Penalized objective, fidelity and exact gradient of the objective"""

    terms = _objective_terms(config)
    dt = pulse.dt

    eigvals, eigvecs, propagators = diagonalize(slice_hamiltonians(params, pulse), dt)

    # forward[j] = U_{j-1}···U_0
    forward = cumulative_product(propagators)
    unitary = forward[-1]

    # backward[j] = U_{N-1}···U_{j+1}
    backward = np.empty_like(propagators)
    backward[-1] = np.eye(unitary.shape[0])
    for j in range(len(propagators) - 2, -1, -1):
        backward[j] = backward[j + 1] @ propagators[j + 1]

    overlaps = [np.vdot(block, unitary) for _, block in terms]
    fidelity = float(sum(w * abs(g) ** 2 for (w, _), g in zip(terms, overlaps)))

    # ∂(Σ w|g|²) = 2·Re Tr(M_j·∂U_j) with M_j = forward[j]·Q·backward[j]
    weighted = sum(w * np.conj(g) * block.conj().T for (w, block), g in zip(terms, overlaps))
    m = forward[:-1] @ weighted @ backward

    eigvecs_h = eigvecs.conj().swapaxes(-1, -2)
    m = eigvecs_h @ m @ eigvecs

    total = eigvals[:, :, None] + eigvals[:, None, :]
    difference = eigvals[:, :, None] - eigvals[:, None, :]
    g_matrix = (
        -1j * dt * np.exp(-0.5j * dt * total) * np.sinc(0.5 * dt * difference / np.pi)
    )

    gradients = []
    for generator in build_control_generators(params):
        k = eigvecs_h @ generator @ eigvecs
        gradients.append(
            2.0 * np.real(np.sum(m.swapaxes(-1, -2) * g_matrix * k, axis=(-2, -1)))
        )
    gradient_x, gradient_y = gradients

    value = fidelity
    if config.penalty_weight > 0.0:
        penalty, (penalty_x, penalty_y) = boundary_penalty(pulse, config.penalty_weight)
        value -= penalty
        gradient_x = gradient_x - penalty_x
        gradient_y = gradient_y - penalty_y

    return value, fidelity, gradient_x, gradient_y


def fidelity_gradient(
    params: SystemParams, pulse: PulseSequence, config: GrapeConfig
) -> Tuple[np.ndarray, np.ndarray]:
    """Exact gradient of the penalized objective

    Parameters
    ----------
    params : SystemParams
    pulse : PulseSequence
    config : GrapeConfig
        Selects the objective (Φ or Φ_avg), target gate and penalty weight.

    Returns
    -------
    gradient_x, gradient_y : (num_samples, ) np.ndarray
        ∂J/∂Ω_X[j] and ∂J/∂Ω_Y[j].
    """
    _, _, gradient_x, gradient_y = _value_and_gradient(params, pulse, config)
    return gradient_x, gradient_y


def default_initial_pulse(params: SystemParams, config: GrapeConfig) -> PulseSequence:
    """Area-normalized Gaussian with a seeded relative perturbation"""
    spec = normalize_area(
        AnalyticPulseSpec(PulseFamily.GAUSSIAN, config.gate_time), params, config.dt
    )
    pulse = render(spec, config.dt)
    rng = create_rng(config.seed, "initial_pulse", config.gate_time, config.dt)
    noise = config.perturbation * np.max(np.abs(pulse.omega_x))
    noise = noise * rng.standard_normal((2, pulse.num_samples))
    return pulse.with_samples(pulse.omega_x + noise[0], pulse.omega_y + noise[1])


@dataclass
class OptimizationTrace:
    """History of one optimization run

    `objective`, `fidelity`, `gradient_norm` and `step_size` hold one entry for
    the initial pulse followed by one entry per accepted step.
    """

    objective: List[float]
    fidelity: List[float]
    gradient_norm: List[float]
    step_size: List[float]
    pulse: PulseSequence
    report: FidelityReport
    stop_reason: Text
    config: GrapeConfig

    @property
    def iterations(self) -> int:
        return len(self.objective) - 1

    def to_dict(self) -> Dict:
        return {
            "config": self.config.to_dict(),
            "stop_reason": self.stop_reason,
            "iterations": self.iterations,
            "objective": self.objective,
            "fidelity": self.fidelity,
            "gradient_norm": self.gradient_norm,
            "step_size": self.step_size,
            "report": self.report.to_dict(),
            "pulse": {
                "dt": self.pulse.dt,
                "omega_x": self.pulse.omega_x,
                "omega_y": self.pulse.omega_y,
            },
        }


def optimize(
    params: SystemParams,
    initial: Optional[PulseSequence] = None,
    config: Optional[GrapeConfig] = None,
    hook: Optional[Callable] = None,
) -> OptimizationTrace:
    """Maximize the penalized objective by gradient ascent

    Every iteration moves along the exact gradient with a backtracking line
    search: the step is reduced by `backtrack_factor` until the objective
    increases sufficiently, then grown by `growth_factor` for the next
    iteration. Accepted steps never decrease the objective.

    Parameters
    ----------
    params : SystemParams
    initial : PulseSequence, optional
        Starting pulse. Defaults to `default_initial_pulse(params, config)`.
    config : GrapeConfig, optional
    hook : callable, optional
        Called after every accepted step with the current pulse:
            hook("grape", pulse, total=max_iterations, completed=iteration)

    Returns
    -------
    trace : OptimizationTrace

    Raises
    ------
    DivergenceError
        When a step produces a non-finite pulse or objective.
    """
    config = config or GrapeConfig()
    pulse = initial if initial is not None else default_initial_pulse(params, config)
    if not pulse.is_finite():
        raise DivergenceError("Initial pulse contains non-finite samples.")

    value, fidelity, gradient_x, gradient_y = _value_and_gradient(params, pulse, config)
    if not np.isfinite(value):
        raise DivergenceError(f"Initial objective is not finite ({value}).")

    step = config.step_size
    objectives, fidelities = [value], [fidelity]
    gradient_norms = [float(max(np.max(np.abs(gradient_x)), np.max(np.abs(gradient_y))))]
    step_sizes = [step]
    stop_reason = "max_iterations"

    for iteration in range(1, config.max_iterations + 1):
        if config.fidelity_goal is not None and fidelity >= config.fidelity_goal:
            stop_reason = "fidelity_goal"
            break

        squared_norm = float(np.sum(gradient_x**2) + np.sum(gradient_y**2))
        if squared_norm == 0.0:
            stop_reason = "stationary"
            break

        accepted = False
        for _ in range(config.max_backtracks):
            trial = pulse.with_samples(
                pulse.omega_x + step * gradient_x, pulse.omega_y + step * gradient_y
            )
            if not trial.is_finite():
                raise DivergenceError(
                    f"Step {step:.3e} at iteration {iteration} produced non-finite controls."
                )
            trial_value = objective_value(params, trial, config)
            if not np.isfinite(trial_value):
                raise DivergenceError(
                    f"Objective diverged at iteration {iteration} (step {step:.3e})."
                )
            if trial_value - value >= ARMIJO * step * squared_norm:
                accepted = True
                break
            step *= config.backtrack_factor

        if not accepted:
            stop_reason = "line_search"
            break

        gain = trial_value - value
        pulse = trial
        value, fidelity, gradient_x, gradient_y = _value_and_gradient(params, pulse, config)
        objectives.append(value)
        fidelities.append(fidelity)
        gradient_norms.append(
            float(max(np.max(np.abs(gradient_x)), np.max(np.abs(gradient_y))))
        )
        step_sizes.append(step)

        if hook is not None:
            hook("grape", pulse, total=config.max_iterations, completed=iteration)

        if gain < config.convergence_threshold:
            stop_reason = "converged"
            break

        step *= config.growth_factor

    else:
        if config.fidelity_goal is not None and fidelity >= config.fidelity_goal:
            stop_reason = "fidelity_goal"

    return OptimizationTrace(
        objective=objectives,
        fidelity=fidelities,
        gradient_norm=gradient_norms,
        step_size=step_sizes,
        pulse=pulse,
        report=fidelity_report(propagate(params, pulse), config.target),
        stop_reason=stop_reason,
        config=config,
    )


def _optimize_from_default(params: SystemParams, config: GrapeConfig) -> OptimizationTrace:
    return optimize(params, None, config)


def optimize_many(
    params: SystemParams,
    configs: Sequence[GrapeConfig],
    num_workers: Optional[int] = None,
    hook: Optional[Callable] = None,
) -> List[OptimizationTrace]:
    """Independent optimization runs, e.g. gate-time scans or restarts

    Each run starts from its default initial pulse. Runs are distributed over
    a process pool and returned in the order of `configs`.

    Usage
    -----
    >>> configs = [replace(config, gate_time=t) for t in (4.0, 6.0, 8.0)]
    >>> traces = optimize_many(params, configs)
    """
    configs = list(configs)

    def on_result(index: int, trace: OptimizationTrace):
        if hook is not None:
            hook("optimize_many", trace, total=len(configs), completed=index + 1)

    return parallel_map(
        partial(_optimize_from_default, params),
        configs,
        num_workers=num_workers,
        on_result=on_result,
    )


def restarts(config: GrapeConfig, num_restarts: int) -> List[GrapeConfig]:
    """Copies of `config` with distinct seeds for multi-start optimization"""
    return [replace(config, seed=config.seed + restart) for restart in range(num_restarts)]
