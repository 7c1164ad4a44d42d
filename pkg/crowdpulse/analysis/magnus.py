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

"""Magnus-expansion diagnostics in the interaction frame of the drift

To zeroth order the gate is exp(-iΘ0) with Θ0 = ∫H_I(t)dt. Every transition
of detuning ν enters Θ0 through the Fourier coefficient ½∫e^{iνt}Ω_C(t)dt, so
a π rotation of qubit 1 without leakage requires the coefficient to equal
π/2 at ν = 0 and to vanish at ν ∈ {Δ, δ, δ-Δ}.
"""

from dataclasses import asdict, dataclass
from typing import Dict, Text

import numpy as np

from crowdpulse.core.model import DIMENSION, SystemParams, lowering_operator
from crowdpulse.core.propagation import PulseSequence
from crowdpulse.pulses.analytic import PI_PULSE_AREA


@dataclass(frozen=True)
class ConstraintResiduals:
    """Deviation of a pulse from the zeroth-order gate conditions

    area_error : |½∫Ω_C dt - π/2|
    r_anharm, r_delta, r_delta_minus_anharm : |½∫e^{iνt}Ω_C dt| at ν = Δ, δ, δ-Δ
    """

    area_error: float
    r_anharm: float
    r_delta: float
    r_delta_minus_anharm: float

    def to_dict(self) -> Dict[Text, float]:
        return asdict(self)

    def max_leakage_residual(self) -> float:
        return max(self.r_anharm, self.r_delta, self.r_delta_minus_anharm)


def fourier_integral(pulse: PulseSequence, nu: float, origin: float = 0.0) -> complex:
    """½∫e^{iν(t + origin)}Ω_C(t)dt by midpoint quadrature

    Parameters
    ----------
    pulse : PulseSequence
    nu : float
        Detuning (rad/ns).
    origin : float, optional
        Start time of the pulse window (ns). Shifting it only changes the
        phase of the result.
    """
    phases = np.exp(1j * nu * (pulse.times + origin))
    return 0.5 * complex(np.sum(phases * pulse.omega_c)) * pulse.dt


def fourier_constraints(pulse: PulseSequence, params: SystemParams) -> ConstraintResiduals:
    """Residuals of the area condition and of the three leakage conditions"""
    return ConstraintResiduals(
        area_error=abs(fourier_integral(pulse, 0.0) - PI_PULSE_AREA),
        r_anharm=abs(fourier_integral(pulse, params.anharm)),
        r_delta=abs(fourier_integral(pulse, params.delta)),
        r_delta_minus_anharm=abs(fourier_integral(pulse, params.delta - params.anharm)),
    )


def magnus_theta0(pulse: PulseSequence, params: SystemParams) -> np.ndarray:
    """First Magnus term Θ0 = ∫H_I(t)dt, midpoint quadrature on the pulse grid

    Returns
    -------
    theta0 : (9, 9) np.ndarray
        Hermitian matrix. Θ0/t_g is the average Hamiltonian.
    """
    theta0 = np.zeros((DIMENSION, DIMENSION), dtype=complex)
    for qubit, transition, detuning in params.detunings.transitions():
        coefficient = params.coupling(qubit, transition) * fourier_integral(pulse, detuning)
        lowering = lowering_operator(qubit, transition)
        theta0 += coefficient * lowering.T + np.conj(coefficient) * lowering
    return theta0


def _theta1_kernel(pulse: PulseSequence, params: SystemParams):
    # K(t1 - t2) = 1 + cos δ(t1 - t2) - sin δ(t1 - t2) = Σ f(t1)·g(t2)
    phase = params.delta * pulse.times
    cos, sin = np.cos(phase), np.sin(phase)
    ones = np.ones_like(phase)
    return [(ones, ones), (cos, cos), (sin, sin), (-sin, cos), (cos, sin)]


def magnus_theta1_diag01(pulse: PulseSequence, params: SystemParams) -> float:
    """Element <01|Θ1|01> of the second Magnus term

    Nested midpoint quadrature of

        ¼ ∫dt2 ∫_0^{t2} dt1 Ω(t1, t2)·[1 + cos δ(t1 - t2) - sin δ(t1 - t2)]

    with Ω(t1, t2) = Ω_X(t2)Ω_Y(t1) - Ω_X(t1)Ω_Y(t2), keeping only terms
    oscillating at most as fast as δ. The kernel factorizes into products of
    single-time functions, so the double sum over j1 < j2 reduces to prefix
    sums and costs O(N). Diagonal cells do not contribute since Ω(t, t) = 0.
    """
    x, y = pulse.omega_x, pulse.omega_y
    total = 0.0
    for f, g in _theta1_kernel(pulse, params):
        # exclusive prefix sums: Σ_{j1 < j2}
        prefix_yf = np.concatenate([[0.0], np.cumsum(y * f)[:-1]])
        prefix_xf = np.concatenate([[0.0], np.cumsum(x * f)[:-1]])
        total += np.sum(g * (x * prefix_yf - y * prefix_xf))
    return float(0.25 * total * pulse.dt**2)


def magnus_theta1_diag01_bruteforce(pulse: PulseSequence, params: SystemParams) -> float:
    """Same as `magnus_theta1_diag01`, summing all O(N²) pairs explicitly"""
    t = pulse.times
    x, y = pulse.omega_x, pulse.omega_y
    # rows: t1, columns: t2
    difference = params.delta * (t[:, None] - t[None, :])
    kernel = 1.0 + np.cos(difference) - np.sin(difference)
    omega = y[:, None] * x[None, :] - x[:, None] * y[None, :]
    mask = np.triu(np.ones((len(t), len(t)), dtype=bool), k=1)
    return float(0.25 * np.sum(omega * kernel, where=mask) * pulse.dt**2)
