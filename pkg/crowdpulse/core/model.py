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

"""Two three-level transmons sharing one drive

All frequencies are angular frequencies in rad/ns and all times are in ns.
Operators live on the 3⊗3 Hilbert space with basis index ``3 * j1 + j2``.
"""

import math
import warnings
from dataclasses import dataclass, field
from typing import Dict, Sequence, Tuple, Union

import numpy as np

LEVELS = 3
DIMENSION = LEVELS**2

# |00>, |01>, |10>, |11>
COMPUTATIONAL_STATES = (0, 1, 3, 4)

BASIS_LABELS = tuple(f"{j1}{j2}" for j1 in range(LEVELS) for j2 in range(LEVELS))

Couplings = Union[Sequence[float], Sequence[Sequence[float]]]


class SpectralCrowdingWarning(UserWarning):
    """Parameters outside the spectral crowding regime (Δ < 0 and |δ| < |Δ|)"""


def mhz_to_angular(frequency: float) -> float:
    """Convert an ordinary frequency in MHz to an angular frequency in rad/ns"""
    return 2.0 * math.pi * 1e-3 * frequency


def angular_to_mhz(frequency: float) -> float:
    """Convert an angular frequency in rad/ns to an ordinary frequency in MHz"""
    return frequency / (2.0 * math.pi * 1e-3)


def basis_index(j1: int, j2: int) -> int:
    """Index of |j1, j2> in the 3⊗3 basis"""
    if not (0 <= j1 < LEVELS and 0 <= j2 < LEVELS):
        raise ValueError(f"Levels must be in [0, {LEVELS}), got ({j1}, {j2}).")
    return LEVELS * j1 + j2


@dataclass(frozen=True)
class SystemParams:
    """Rotating-frame parameters of the two-transmon system

    Parameters
    ----------
    delta : float, optional
        Spectral crowding detuning δ (rad/ns) between the 0↔1 transition of
        qubit 1 and the 1↔2 transition of qubit 2. Defaults to 2π·45 MHz.
    anharm : float, optional
        Shared anharmonicity Δ (rad/ns). Defaults to 2π·(-350) MHz.
    couplings : sequence, optional
        Ladder coupling strengths. Either a single [λ1, λ2] pair shared by
        both qubits or one pair per qubit. Defaults to [1, √2].

    Usage
    -----
    >>> params = SystemParams.from_mhz(delta_mhz=45.0, anharm_mhz=-350.0)
    >>> params.coupling(2, 2)
    1.4142135623730951
    """

    delta: float = mhz_to_angular(45.0)
    anharm: float = mhz_to_angular(-350.0)
    couplings: Couplings = field(default=(1.0, math.sqrt(2.0)))
    levels: int = LEVELS

    def __post_init__(self):
        if self.levels != LEVELS:
            raise ValueError(
                f"Only {LEVELS}-level transmons are supported (got levels={self.levels})."
            )

        for name in ("delta", "anharm"):
            value = getattr(self, name)
            if not np.isfinite(value):
                raise ValueError(f"`{name}` must be finite (got {value}).")
            object.__setattr__(self, name, float(value))

        couplings = np.asarray(self.couplings, dtype=float)
        if couplings.shape == (2,):
            couplings = np.stack([couplings, couplings])
        if couplings.shape != (2, 2):
            raise ValueError(
                "`couplings` must be a [λ1, λ2] pair or one pair per qubit "
                f"(got shape {couplings.shape})."
            )
        if not np.all(np.isfinite(couplings)):
            raise ValueError(f"`couplings` must be finite (got {couplings.tolist()}).")
        object.__setattr__(
            self, "couplings", tuple(tuple(float(c) for c in row) for row in couplings)
        )

        if self.anharm >= 0.0:
            warnings.warn(
                f"Transmon anharmonicity is expected to be negative (got {self.anharm:g} rad/ns).",
                SpectralCrowdingWarning,
            )
        elif abs(self.delta) >= abs(self.anharm):
            warnings.warn(
                f"|δ| = {abs(self.delta):g} rad/ns is not smaller than |Δ| = "
                f"{abs(self.anharm):g} rad/ns: transitions are not spectrally crowded.",
                SpectralCrowdingWarning,
            )

    @classmethod
    def from_mhz(
        cls,
        delta_mhz: float = 45.0,
        anharm_mhz: float = -350.0,
        couplings: Couplings = None,
    ) -> "SystemParams":
        """Build parameters from ordinary frequencies given in MHz"""
        kwargs = {}
        if couplings is not None:
            kwargs["couplings"] = couplings
        return cls(
            delta=mhz_to_angular(delta_mhz), anharm=mhz_to_angular(anharm_mhz), **kwargs
        )

    def coupling(self, qubit: int, transition: int) -> float:
        """Ladder coupling λ_j^(k) of transition j-1 ↔ j of qubit k (both 1-based)"""
        return self.couplings[qubit - 1][transition - 1]

    @property
    def detunings(self) -> "DetuningTable":
        return DetuningTable.from_params(self)

    def to_dict(self) -> Dict:
        return {
            "delta_mhz": angular_to_mhz(self.delta),
            "anharm_mhz": angular_to_mhz(self.anharm),
            "lambda": [list(row) for row in self.couplings],
        }


@dataclass(frozen=True)
class DetuningTable:
    """Transition detunings δ_j^(k) in the rotating frame of the drive

    ``values[k - 1][j - 1]`` is the detuning of transition j-1 ↔ j of qubit k:
    δ_1^(1) = 0, δ_2^(1) = Δ, δ_1^(2) = δ - Δ and δ_2^(2) = δ.
    """

    values: Tuple[Tuple[float, float], Tuple[float, float]]

    @classmethod
    def from_params(cls, params: SystemParams) -> "DetuningTable":
        delta, anharm = params.delta, params.anharm
        return cls(values=((0.0, anharm), (delta - anharm, delta)))

    def transition(self, qubit: int, transition: int) -> float:
        return self.values[qubit - 1][transition - 1]

    def ladder_energies(self, qubit: int) -> np.ndarray:
        """Level energies of one qubit: [0, δ_1, δ_1 + δ_2]"""
        first, second = self.values[qubit - 1]
        return np.array([0.0, first, first + second])

    def transitions(self):
        """Iterate over (qubit, transition, detuning), both indices 1-based"""
        for qubit in (1, 2):
            for transition in (1, 2):
                yield qubit, transition, self.values[qubit - 1][transition - 1]


def embed(operator: np.ndarray, qubit: int) -> np.ndarray:
    """Embed a single-transmon operator on the 9-dimensional space"""
    identity = np.eye(LEVELS)
    if qubit == 1:
        return np.kron(operator, identity)
    if qubit == 2:
        return np.kron(identity, operator)
    raise ValueError(f"`qubit` must be 1 or 2 (got {qubit}).")


def lowering_operator(qubit: int, transition: int) -> np.ndarray:
    """|j-1><j| of qubit k embedded on the 9-dimensional space"""
    operator = np.zeros((LEVELS, LEVELS), dtype=complex)
    operator[transition - 1, transition] = 1.0
    return embed(operator, qubit)


def is_hermitian(matrix: np.ndarray, rtol: float = 1e-12) -> bool:
    """Check ‖H - H†‖_max < rtol·‖H‖_max"""
    scale = np.max(np.abs(matrix), initial=0.0)
    deviation = np.max(np.abs(matrix - matrix.conj().T), initial=0.0)
    return deviation <= rtol * scale


def build_drift(params: SystemParams) -> np.ndarray:
    """Drive-free part of the rotating-frame Hamiltonian

    Diagonal matrix with entry E1(j1) + E2(j2) for |j1, j2>, where E1 and E2
    are the cumulative detunings of each ladder: E1 = [0, 0, Δ] and
    E2 = [0, δ - Δ, 2δ - Δ].

    Parameters
    ----------
    params : SystemParams

    Returns
    -------
    drift : (9, 9) np.ndarray
        Complex diagonal matrix in rad/ns.
    """
    table = params.detunings
    energies = np.add.outer(table.ladder_energies(1), table.ladder_energies(2))
    return np.diag(energies.ravel()).astype(complex)


def build_control_generators(params: SystemParams) -> Tuple[np.ndarray, np.ndarray]:
    """In-phase and quadrature control generators

    The total rotating-frame Hamiltonian is ``drift + Ω_X·Hx + Ω_Y·Hy`` with

        Hx = ½ Σ_k Σ_j λ_j^(k) (|j><j-1| + |j-1><j|)
        Hy = ½ Σ_k Σ_j λ_j^(k) (i|j><j-1| - i|j-1><j|)

    Returns
    -------
    hx, hy : (9, 9) np.ndarray
    """
    hx = np.zeros((DIMENSION, DIMENSION), dtype=complex)
    hy = np.zeros((DIMENSION, DIMENSION), dtype=complex)
    for qubit, transition, _ in params.detunings.transitions():
        strength = 0.5 * params.coupling(qubit, transition)
        lowering = lowering_operator(qubit, transition)
        raising = lowering.T
        hx += strength * (raising + lowering)
        hy += strength * (1j * raising - 1j * lowering)
    return hx, hy


def build_interaction_hamiltonian(
    params: SystemParams, omega_c: complex, t: float
) -> np.ndarray:
    """Interaction-frame Hamiltonian at time t

    Raising elements |j><j-1| of qubit k carry (Ω_C/2)·λ_j^(k)·exp(+iδ_j^(k)t),
    lowering elements the complex conjugate. For real Ω_C the lowering
    element reads (Ω_C/2)·λ·exp(-iδt).

    Parameters
    ----------
    params : SystemParams
    omega_c : complex
        Combined control Ω_X + iΩ_Y (rad/ns).
    t : float
        Time (ns).
    """
    if not np.isfinite(t):
        raise ValueError(f"`t` must be finite (got {t}).")

    hamiltonian = np.zeros((DIMENSION, DIMENSION), dtype=complex)
    for qubit, transition, detuning in params.detunings.transitions():
        coefficient = (
            0.5 * omega_c * params.coupling(qubit, transition) * np.exp(1j * detuning * t)
        )
        lowering = lowering_operator(qubit, transition)
        hamiltonian += coefficient * lowering.T + np.conj(coefficient) * lowering
    return hamiltonian
