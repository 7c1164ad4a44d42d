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

"""Analytic pulse families

Every family shares the in-phase envelope

    Ω_X(t) = A_π·exp(-(t - t_g/2)²/(2σ²))·(1 - A·cos(ω_x·(t - t_g/2)))

with A = 0 for the plain Gaussian and DRAG families. The quadrature is
either zero (Gaussian) or the scaled derivative Ω_Y = -Ω̇_X/β (DRAG and
sideband). Gaussians are truncated at 0 and t_g without subtracting their
edge value.
"""

import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Dict, Optional, Text, Tuple, Union

import numpy as np
from scipy.optimize import brentq

from crowdpulse.core.model import SystemParams
from crowdpulse.core.propagation import PulseSequence


# ½∫Ω_C dt of a π rotation: the generators carry the ½ prefactor, so the
# rotation angle of qubit 1 is ∫Ω_C dt
PI_PULSE_AREA = 0.5 * math.pi


class PulseFamily(Enum):
    GAUSSIAN = "gaussian"
    DRAG = "drag"
    SIDEBAND = "sideband"


class AreaNormalizationError(ValueError):
    """Pulse shape has no usable area to normalize"""


@dataclass(frozen=True)
class AnalyticPulseSpec:
    """Parameters of an analytic pulse

    Parameters
    ----------
    family : PulseFamily or str
    gate_time : float
        Gate time t_g (ns).
    sigma : float, optional
        Gaussian width (ns). Defaults to t_g/6. Use `math.inf` for a constant pulse.
    amplitude : float, optional
        Overall amplitude A_π (rad/ns). Defaults to 1.
    sideband_depth : float, optional
        Modulation depth A of the sideband family. Defaults to 1.
    sideband_freq : float, optional
        Modulation frequency ω_x (rad/ns) of the sideband family.
        Defaults to δ/2 when rendered with system parameters.
    drag_beta : float, optional
        Divisor β of the derivative quadrature (rad/ns). Defaults to Δ for the
        DRAG family and 2Δ for the sideband family. `math.inf` disables the
        quadrature.
    """

    family: Union[PulseFamily, Text]
    gate_time: float
    sigma: Optional[float] = None
    amplitude: float = 1.0
    sideband_depth: float = 1.0
    sideband_freq: Optional[float] = None
    drag_beta: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "family", PulseFamily(self.family))
        if not (np.isfinite(self.gate_time) and self.gate_time > 0.0):
            raise ValueError(f"Gate time must be positive (got {self.gate_time}).")
        if self.sigma is None:
            object.__setattr__(self, "sigma", self.gate_time / 6.0)
        if not self.sigma > 0.0:
            raise ValueError(f"Gaussian width must be positive (got {self.sigma}).")

    def resolve(self, params: Optional[SystemParams] = None) -> "AnalyticPulseSpec":
        """Fill unset frequencies from system parameters"""

        updates = dict()
        if self.family is PulseFamily.SIDEBAND and self.sideband_freq is None:
            updates["sideband_freq"] = 0.5 * _require(params, "sideband_freq").delta
        if self.family is not PulseFamily.GAUSSIAN and self.drag_beta is None:
            factor = 2.0 if self.family is PulseFamily.SIDEBAND else 1.0
            updates["drag_beta"] = factor * _require(params, "drag_beta").anharm
        return replace(self, **updates) if updates else self

    def to_dict(self) -> Dict:
        return {
            "family": self.family.value,
            "gate_time": self.gate_time,
            "sigma": self.sigma,
            "amplitude": self.amplitude,
            "sideband_depth": self.sideband_depth,
            "sideband_freq": self.sideband_freq,
            "drag_beta": self.drag_beta,
        }


def _require(params: Optional[SystemParams], what: Text) -> SystemParams:
    if params is None:
        raise ValueError(f"`{what}` is unset and no system parameters were given to derive it.")
    return params


def sideband_preset(params: SystemParams, gate_time: float) -> AnalyticPulseSpec:
    """Gaussian with sideband modulation at δ/2 and derivative quadrature over 2Δ"""
    return AnalyticPulseSpec(
        family=PulseFamily.SIDEBAND,
        gate_time=gate_time,
        sigma=gate_time / 6.0,
        sideband_depth=1.0,
        sideband_freq=0.5 * params.delta,
        drag_beta=2.0 * params.anharm,
    )


def envelope(
    spec: AnalyticPulseSpec, t: np.ndarray, params: Optional[SystemParams] = None
) -> Tuple[np.ndarray, np.ndarray]:
    """In-phase envelope and its exact time derivative

    Parameters
    ----------
    spec : AnalyticPulseSpec
    t : array-like
        Times (ns).
    params : SystemParams, optional
        Used to resolve unset frequencies.

    Returns
    -------
    omega_x, omega_x_dot : np.ndarray
    """
    spec = spec.resolve(params)
    offset = np.asarray(t, dtype=float) - 0.5 * spec.gate_time
    return _envelope(spec, offset)


def _envelope(spec: AnalyticPulseSpec, offset: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    if math.isinf(spec.sigma):
        gaussian = np.ones_like(offset)
        gaussian_dot = np.zeros_like(offset)
    else:
        gaussian = np.exp(-0.5 * (offset / spec.sigma) ** 2)
        gaussian_dot = -offset / spec.sigma**2 * gaussian

    if spec.family is PulseFamily.SIDEBAND:
        depth, frequency = spec.sideband_depth, spec.sideband_freq
        modulation = 1.0 - depth * np.cos(frequency * offset)
        modulation_dot = depth * frequency * np.sin(frequency * offset)
    else:
        modulation = np.ones_like(offset)
        modulation_dot = np.zeros_like(offset)

    omega_x = spec.amplitude * gaussian * modulation
    omega_x_dot = spec.amplitude * (gaussian_dot * modulation + gaussian * modulation_dot)
    return omega_x, omega_x_dot


def num_samples(gate_time: float, dt: float) -> int:
    if not (np.isfinite(dt) and dt > 0.0):
        raise ValueError(f"Time step must be positive (got dt={dt}).")
    return max(1, int(round(gate_time / dt)))


def render(
    spec: AnalyticPulseSpec, dt: float, params: Optional[SystemParams] = None
) -> PulseSequence:
    """Sample an analytic pulse at interval midpoints

    The number of samples is N = round(t_g/dt) and the actual time step is
    t_g/N, so that the rendered gate time equals t_g exactly.

    Parameters
    ----------
    spec : AnalyticPulseSpec
    dt : float
        Requested time step (ns).
    params : SystemParams, optional
        Used to resolve unset frequencies.

    Returns
    -------
    pulse : PulseSequence

    Raises
    ------
    ValueError
        When dt is not positive.
    """
    spec = spec.resolve(params)
    n = num_samples(spec.gate_time, dt)
    step = spec.gate_time / n
    # symmetric offsets from the pulse center, exact half-integers times step
    offset = (np.arange(n) + 0.5 - 0.5 * n) * step
    omega_x, omega_x_dot = _envelope(spec, offset)

    if spec.family is PulseFamily.GAUSSIAN or math.isinf(spec.drag_beta):
        omega_y = np.zeros(n)
    else:
        omega_y = -omega_x_dot / spec.drag_beta

    return PulseSequence(dt=step, omega_x=omega_x, omega_y=omega_y)


def pulse_area(pulse: PulseSequence) -> complex:
    """½∫Ω_C dt by midpoint quadrature"""
    return 0.5 * complex(np.sum(pulse.omega_c)) * pulse.dt


def normalize_area(
    spec: AnalyticPulseSpec, params: Optional[SystemParams], dt: float
) -> AnalyticPulseSpec:
    """Set the amplitude so that the rendered pulse is a π rotation

    The area condition reads ½∫Ω_C dt = π/2. The rendered area is linear in
    the amplitude, so the root of ½·Re∫Ω_C dt - π/2 is obtained in closed
    form from the unit-amplitude area, then polished with a bracketed root
    search.
    The imaginary part vanishes for the derivative quadratures by symmetry.

    Parameters
    ----------
    spec : AnalyticPulseSpec
    params : SystemParams
        Used to resolve unset frequencies.
    dt : float
        Time step the pulse will be rendered with.

    Returns
    -------
    spec : AnalyticPulseSpec
        Copy of `spec`, with frequencies resolved and amplitude A_π.

    Raises
    ------
    AreaNormalizationError
        When the unit-amplitude pulse has (numerically) zero area.
    """
    unit = replace(spec.resolve(params), amplitude=1.0)
    pulse = render(unit, dt)
    area = pulse_area(pulse).real
    scale = 0.5 * float(np.sum(np.abs(pulse.omega_x))) * pulse.dt

    if not (np.isfinite(area) and abs(area) > 1e-12 * scale and scale > 0.0):
        raise AreaNormalizationError(
            f"{unit.family.value} pulse with t_g={unit.gate_time:g} ns has vanishing "
            f"area ({area:.3e}): cannot solve the area condition."
        )

    def residual(amplitude: float) -> float:
        return pulse_area(render(replace(unit, amplitude=amplitude), dt)).real - PI_PULSE_AREA

    estimate = PI_PULSE_AREA / area
    low, high = sorted((0.5 * estimate, 2.0 * estimate))
    amplitude = brentq(residual, low, high, rtol=1e-10)
    return replace(unit, amplitude=amplitude)


@dataclass(frozen=True)
class DragResidualCoefficients:
    """First- and second-order coefficients left by a DRAG quadrature

    Each coefficient multiplies the corresponding transition in the
    DRAG-transformed Hamiltonian; a zero coefficient means the transition is
    suppressed to that order.
    """

    beta: float
    qubit1_12: float
    qubit2_01: float
    qubit2_12: float
    qubit1_02: float
    qubit2_02: float

    def ranking(self) -> Dict[Text, float]:
        """First-order channels sorted from most to least suppressed"""
        channels = {
            "qubit1_12": abs(self.qubit1_12),
            "qubit2_01": abs(self.qubit2_01),
            "qubit2_12": abs(self.qubit2_12),
        }
        return dict(sorted(channels.items(), key=lambda item: item[1]))


def drag_residual_coefficients(
    beta: float, params: SystemParams, eta: float = 1.0
) -> DragResidualCoefficients:
    """Residual transition coefficients of a DRAG pulse with divisor β

    Parameters
    ----------
    beta : float
        DRAG divisor (rad/ns).
    params : SystemParams
    eta : float, optional
        Ratio of the qubit-2 to qubit-1 coupling to the drive. Defaults to 1.

    Returns
    -------
    coefficients : DragResidualCoefficients
        qubit 1, 1↔2: λ(β-Δ)/(2β)
        qubit 2, 0↔1: η(β-δ+Δ)/(2β)
        qubit 2, 1↔2: λ(β-δ)/(2β)
        qubit 1, 0↔2: λΔ/(8β²)
        qubit 2, 0↔2: η²λΔ/(8β²)
    """
    if beta == 0.0 or not np.isfinite(beta):
        raise ValueError(f"DRAG divisor must be finite and non-zero (got β={beta}).")

    delta, anharm = params.delta, params.anharm
    lambda1, lambda2 = params.coupling(1, 2), params.coupling(2, 2)
    return DragResidualCoefficients(
        beta=beta,
        qubit1_12=lambda1 * (beta - anharm) / (2.0 * beta),
        qubit2_01=eta * (beta - delta + anharm) / (2.0 * beta),
        qubit2_12=lambda2 * (beta - delta) / (2.0 * beta),
        qubit1_02=lambda1 * anharm / (8.0 * beta**2),
        qubit2_02=eta**2 * lambda2 * anharm / (8.0 * beta**2),
    )


def drag_beta_menu(params: SystemParams) -> Dict[Text, float]:
    """DRAG divisors targeting each off-resonant transition"""
    return {
        "anharm": params.anharm,
        "delta": params.delta,
        "delta_minus_anharm": params.delta - params.anharm,
    }
