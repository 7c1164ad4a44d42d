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

"""Gate fidelities on the computational subspace and phase bookkeeping"""

import math
from dataclasses import asdict, dataclass
from typing import Dict, Optional, Text, Tuple

import numpy as np

from crowdpulse.core.model import COMPUTATIONAL_STATES, DIMENSION, basis_index
from crowdpulse.core.propagation import PulseSequence


class PhaseExtractionError(ValueError):
    """Unitary is too far from the phase-shifted gate form to read its phases"""


_NAMED_GATES = {
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
    "H": np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2.0),
    "I": np.eye(2, dtype=complex),
}


def wrap_phase(phase: float) -> float:
    """Wrap a phase to (-π, π]"""
    wrapped = math.pi - (math.pi - phase) % (2.0 * math.pi)
    # the modulo rounds up to 2π for tiny negative arguments
    return math.pi if wrapped <= -math.pi else wrapped


@dataclass(frozen=True, eq=False)
class TargetGate:
    """Single-qubit gate applied to qubit 1, identity on qubit 2

    Parameters
    ----------
    matrix : (2, 2) array-like, optional
        Unitary acting on qubit 1. Defaults to X.
    name : str, optional
    """

    matrix: np.ndarray = None
    name: Text = None

    def __post_init__(self):
        if self.matrix is None:
            object.__setattr__(self, "name", self.name or "X")
        matrix = _NAMED_GATES["X"] if self.matrix is None else self.matrix
        matrix = np.array(matrix, dtype=complex)
        if matrix.shape != (2, 2):
            raise ValueError(f"Target gate must be a 2x2 matrix (got shape {matrix.shape}).")
        if np.max(np.abs(matrix.conj().T @ matrix - np.eye(2))) > 1e-12:
            raise ValueError("Target gate must be unitary.")
        matrix.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)

    @classmethod
    def named(cls, name: Text) -> "TargetGate":
        """One of "X", "Y", "Z", "H" or "I" """
        try:
            return cls(matrix=_NAMED_GATES[name.upper()], name=name.upper())
        except KeyError:
            raise ValueError(
                f"Unknown gate '{name}' (expected one of {', '.join(_NAMED_GATES)})."
            )

    def _embed(self, qubit2_levels: Tuple[int, ...]) -> np.ndarray:
        block = np.zeros((DIMENSION, DIMENSION), dtype=complex)
        for j2 in qubit2_levels:
            for a in range(2):
                for b in range(2):
                    block[basis_index(a, j2), basis_index(b, j2)] = self.matrix[a, b]
        return block

    def full_block(self) -> np.ndarray:
        """U^(1)⊗1 on the computational states, zero elsewhere"""
        return self._embed((0, 1))

    def reduced_block(self, i: int) -> np.ndarray:
        """U^(1) on {|0,i>, |1,i>}, zero elsewhere"""
        if i not in (0, 1):
            raise ValueError(f"Qubit 2 state must be 0 or 1 (got {i}).")
        return self._embed((i,))


def _overlap(block: np.ndarray, unitary: np.ndarray) -> complex:
    # Tr(T†U) restricted to the support of T
    return np.vdot(block, unitary)


def gate_fidelity(unitary: np.ndarray, target: Optional[TargetGate] = None) -> float:
    """Φ = |Tr_comp(U_des† U)|² / 16"""
    target = target or TargetGate()
    return float(abs(_overlap(target.full_block(), unitary)) ** 2 / 16.0)


def reduced_fidelity(
    unitary: np.ndarray, target: Optional[TargetGate] = None, i: int = 0
) -> float:
    """Φ_|*,i> = |Tr_{|0,i>,|1,i>}(U_des† U)|² / 4"""
    target = target or TargetGate()
    return float(abs(_overlap(target.reduced_block(i), unitary)) ** 2 / 4.0)


def avg_fidelity(unitary: np.ndarray, target: Optional[TargetGate] = None) -> float:
    """Mean of both reduced fidelities, insensitive to the qubit-2 phase"""
    return 0.5 * (
        reduced_fidelity(unitary, target, 0) + reduced_fidelity(unitary, target, 1)
    )


def leakage(unitary: np.ndarray) -> float:
    """Population leaving the computational subspace, averaged over its 4 states"""
    block = unitary[np.ix_(COMPUTATIONAL_STATES, COMPUTATIONAL_STATES)]
    retained = np.sum(np.abs(block) ** 2, axis=0)
    return float(1.0 - np.mean(retained))


def _phase_shifted_block(alpha: float, gamma: float) -> np.ndarray:
    # e^{iα}·X⊗diag(1, e^{i(γ-α)}) on |00>, |01>, |10>, |11>
    qubit2 = np.diag([1.0, np.exp(1j * (gamma - alpha))])
    return np.exp(1j * alpha) * np.kron(_NAMED_GATES["X"], qubit2)


def extract_phases(unitary: np.ndarray, tolerance: float = 1e-6) -> Tuple[float, float, float]:
    """Phases of an X gate with a conditional qubit-2 phase

    Parameters
    ----------
    unitary : (9, 9) np.ndarray
        Evolution operator, close to e^{iα}·X⊗diag(1, e^{i(γ-α)}) on the
        computational subspace.
    tolerance : float, optional
        Smallest matrix element magnitude a phase is read from.

    Returns
    -------
    alpha : float
        Global phase arg<1,0|U|0,0>, in (-π, π].
    gamma : float
        Qubit-2 phase arg<1,1|U|0,1>, in (-π, π].
    residual : float
        Max-norm deviation of the computational block from the phase-shifted form.

    Raises
    ------
    PhaseExtractionError
        When one of the matrix elements is smaller than `tolerance`.
    """
    elements = {
        "alpha": unitary[basis_index(1, 0), basis_index(0, 0)],
        "gamma": unitary[basis_index(1, 1), basis_index(0, 1)],
    }
    for name, element in elements.items():
        if abs(element) < tolerance:
            raise PhaseExtractionError(
                f"Cannot extract {name}: matrix element magnitude {abs(element):.3e} "
                f"is below {tolerance:g}."
            )

    alpha = wrap_phase(float(np.angle(elements["alpha"])))
    gamma = wrap_phase(float(np.angle(elements["gamma"])))
    block = unitary[np.ix_(COMPUTATIONAL_STATES, COMPUTATIONAL_STATES)]
    residual = float(np.max(np.abs(block - _phase_shifted_block(alpha, gamma))))
    return alpha, gamma, residual


def apply_frame_correction(
    unitary: np.ndarray, alpha: float, gamma: Optional[float] = None
) -> np.ndarray:
    """Remove the relative qubit-2 phase γ - α

    Multiplies by diag(1, e^{-i(γ-α)}) acting on the computational levels of
    qubit 2 (states |0,1> and |1,1> pick up the phase). Leakage levels are left
    untouched.

    Parameters
    ----------
    unitary : (9, 9) np.ndarray
    alpha : float
        Global phase α.
    gamma : float, optional
        Qubit-2 phase γ. Defaults to the value read by `extract_phases`.
    """
    if not np.isfinite(alpha):
        raise ValueError(f"`alpha` must be finite (got {alpha}).")
    if gamma is None:
        _, gamma, _ = extract_phases(unitary)

    correction = np.ones(DIMENSION, dtype=complex)
    for j1 in (0, 1):
        correction[basis_index(j1, 1)] = np.exp(-1j * (gamma - alpha))
    return correction[:, None] * unitary


def rotate_quadratures(pulse: PulseSequence, angle: float) -> PulseSequence:
    """Change the XY frame of the drive by `angle`

    X' = cos(a)·X + sin(a)·Y and Y' = -sin(a)·X + cos(a)·Y.
    """
    cos, sin = math.cos(angle), math.sin(angle)
    return pulse.with_samples(
        omega_x=cos * pulse.omega_x + sin * pulse.omega_y,
        omega_y=-sin * pulse.omega_x + cos * pulse.omega_y,
    )


@dataclass(frozen=True)
class FidelityReport:
    """Fidelities, phases and leakage of one gate

    Phases (and the phase residual) are NaN when they cannot be extracted.
    """

    phi: float
    phi_star0: float
    phi_star1: float
    phi_avg: float
    alpha: float
    gamma: float
    leakage: float
    residual: float = float("nan")

    def errors(self) -> Dict[Text, float]:
        """1 - Φ for every fidelity"""
        return {
            "err_phi": 1.0 - self.phi,
            "err_phi_star0": 1.0 - self.phi_star0,
            "err_phi_star1": 1.0 - self.phi_star1,
            "err_phi_avg": 1.0 - self.phi_avg,
        }

    def to_dict(self) -> Dict[Text, float]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict) -> "FidelityReport":
        # NaN phases are stored as null
        return cls(
            **{
                key: math.nan if value is None else float(value)
                for key, value in data.items()
            }
        )


def fidelity_report(unitary: np.ndarray, target: Optional[TargetGate] = None) -> FidelityReport:
    """Evaluate every fidelity functional of `unitary` against `target`"""
    target = target or TargetGate()
    phi_star0 = reduced_fidelity(unitary, target, 0)
    phi_star1 = reduced_fidelity(unitary, target, 1)
    try:
        alpha, gamma, residual = extract_phases(unitary)
    except PhaseExtractionError:
        alpha = gamma = residual = float("nan")

    return FidelityReport(
        phi=gate_fidelity(unitary, target),
        phi_star0=phi_star0,
        phi_star1=phi_star1,
        phi_avg=0.5 * (phi_star0 + phi_star1),
        alpha=alpha,
        gamma=gamma,
        leakage=leakage(unitary),
        residual=residual,
    )
