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

"""Time-ordered evolution under piecewise-constant controls"""

from dataclasses import dataclass
from typing import Text, Tuple, Union

import numpy as np
from einops import rearrange

from crowdpulse.core.model import (
    BASIS_LABELS,
    DIMENSION,
    SystemParams,
    build_control_generators,
    build_drift,
    build_interaction_hamiltonian,
)

InitialState = Union[int, Text, np.ndarray]


@dataclass(frozen=True, eq=False)
class PulseSequence:
    """Uniformly sampled two-quadrature control envelope

    Samples are taken at interval midpoints: ``omega_x[j]`` is Ω_X((j + ½)·dt).

    Parameters
    ----------
    dt : float
        Time step (ns).
    omega_x, omega_y : (num_samples, ) array-like
        In-phase and quadrature controls (rad/ns).
    """

    dt: float
    omega_x: np.ndarray
    omega_y: np.ndarray

    def __post_init__(self):
        if not (np.isfinite(self.dt) and self.dt > 0.0):
            raise ValueError(f"Time step must be positive and finite (got dt={self.dt}).")
        object.__setattr__(self, "dt", float(self.dt))

        for name in ("omega_x", "omega_y"):
            samples = np.array(getattr(self, name), dtype=float)
            if samples.ndim != 1:
                raise ValueError(f"`{name}` must be one-dimensional (got shape {samples.shape}).")
            samples.setflags(write=False)
            object.__setattr__(self, name, samples)

        if len(self.omega_x) != len(self.omega_y):
            raise ValueError(
                f"Quadratures must have equal length (got {len(self.omega_x)} "
                f"and {len(self.omega_y)})."
            )
        if len(self.omega_x) < 1:
            raise ValueError("Pulse must contain at least one sample.")

    @classmethod
    def zeros(cls, num_samples: int, dt: float) -> "PulseSequence":
        return cls(dt=dt, omega_x=np.zeros(num_samples), omega_y=np.zeros(num_samples))

    @classmethod
    def from_complex(cls, dt: float, omega_c: np.ndarray) -> "PulseSequence":
        omega_c = np.asarray(omega_c, dtype=complex)
        return cls(dt=dt, omega_x=omega_c.real, omega_y=omega_c.imag)

    @property
    def num_samples(self) -> int:
        return len(self.omega_x)

    @property
    def gate_time(self) -> float:
        return self.num_samples * self.dt

    @property
    def times(self) -> np.ndarray:
        """Sampling times (ns), at interval midpoints"""
        return (np.arange(self.num_samples) + 0.5) * self.dt

    @property
    def omega_c(self) -> np.ndarray:
        """Combined control Ω_X + iΩ_Y"""
        return self.omega_x + 1j * self.omega_y

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.omega_x)) and np.all(np.isfinite(self.omega_y)))

    def concatenate(self, other: "PulseSequence") -> "PulseSequence":
        """Play `other` right after this pulse"""
        if not np.isclose(self.dt, other.dt, rtol=1e-12, atol=0.0):
            raise ValueError(
                f"Cannot concatenate pulses with different time steps ({self.dt} and {other.dt})."
            )
        return PulseSequence(
            dt=self.dt,
            omega_x=np.concatenate([self.omega_x, other.omega_x]),
            omega_y=np.concatenate([self.omega_y, other.omega_y]),
        )

    def with_samples(self, omega_x: np.ndarray, omega_y: np.ndarray) -> "PulseSequence":
        return PulseSequence(dt=self.dt, omega_x=omega_x, omega_y=omega_y)


def _check_finite(pulse: PulseSequence):
    if not pulse.is_finite():
        raise ValueError("Pulse samples must be finite.")


def slice_hamiltonians(params: SystemParams, pulse: PulseSequence) -> np.ndarray:
    """Rotating-frame Hamiltonian of every time slice

    Returns
    -------
    hamiltonians : (num_samples, 9, 9) np.ndarray
    """
    drift = build_drift(params)
    hx, hy = build_control_generators(params)
    omega_x = rearrange(pulse.omega_x, "n -> n 1 1")
    omega_y = rearrange(pulse.omega_y, "n -> n 1 1")
    return drift + omega_x * hx + omega_y * hy


def diagonalize(
    hamiltonians: np.ndarray, dt: float
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Exponentiate a stack of Hermitian slice Hamiltonians

    Parameters
    ----------
    hamiltonians : (num_slices, d, d) np.ndarray
    dt : float
        Duration of each slice.

    Returns
    -------
    eigvals : (num_slices, d) np.ndarray
    eigvecs : (num_slices, d, d) np.ndarray
        Columns are eigenvectors.
    propagators : (num_slices, d, d) np.ndarray
        exp(-i·H·dt) for every slice.
    """
    eigvals, eigvecs = np.linalg.eigh(hamiltonians)
    propagators = np.einsum(
        "lij,lj,lkj->lik", eigvecs, np.exp(-1j * dt * eigvals), eigvecs.conj()
    )
    return eigvals, eigvecs, propagators


def _ordered_product(propagators: np.ndarray) -> np.ndarray:
    unitary = np.eye(propagators.shape[-1], dtype=complex)
    for propagator in propagators:
        unitary = propagator @ unitary
    return unitary


def cumulative_product(propagators: np.ndarray) -> np.ndarray:
    cumulative = np.empty((len(propagators) + 1,) + propagators.shape[1:], dtype=complex)
    cumulative[0] = np.eye(propagators.shape[-1])
    for j, propagator in enumerate(propagators):
        cumulative[j + 1] = propagator @ cumulative[j]
    return cumulative


def slice_propagators(params: SystemParams, pulse: PulseSequence) -> np.ndarray:
    _check_finite(pulse)
    _, _, propagators = diagonalize(slice_hamiltonians(params, pulse), pulse.dt)
    return propagators


def propagate(params: SystemParams, pulse: PulseSequence) -> np.ndarray:
    """Evolution operator U(t_g) of a piecewise-constant pulse

    U = U_{N-1} ··· U_1 U_0 with U_j = exp(-i·(drift + Ω_X[j]·Hx + Ω_Y[j]·Hy)·dt),
    each slice exponentiated exactly through its eigendecomposition.

    Parameters
    ----------
    params : SystemParams
    pulse : PulseSequence

    Returns
    -------
    unitary : (9, 9) np.ndarray

    Raises
    ------
    ValueError
        When the pulse contains non-finite samples.
    """
    return _ordered_product(slice_propagators(params, pulse))


def cumulative_propagators(params: SystemParams, pulse: PulseSequence) -> np.ndarray:
    """U(t) after every slice, starting with U(0) = 1

    Returns
    -------
    unitaries : (num_samples + 1, 9, 9) np.ndarray
    """
    return cumulative_product(slice_propagators(params, pulse))


def initial_state(initial: InitialState) -> np.ndarray:
    """Normalized 9-vector from a basis index, a basis label (e.g. "01") or a vector"""
    if isinstance(initial, str):
        if initial not in BASIS_LABELS:
            raise ValueError(
                f"Unknown basis state '{initial}' (expected one of {', '.join(BASIS_LABELS)})."
            )
        initial = BASIS_LABELS.index(initial)

    if isinstance(initial, (int, np.integer)):
        if not 0 <= initial < DIMENSION:
            raise ValueError(f"Basis index must be in [0, {DIMENSION}) (got {initial}).")
        state = np.zeros(DIMENSION, dtype=complex)
        state[initial] = 1.0
        return state

    state = np.asarray(initial, dtype=complex)
    if state.shape != (DIMENSION,):
        raise ValueError(f"Initial state must have shape ({DIMENSION},) (got {state.shape}).")
    norm = np.linalg.norm(state)
    if abs(norm - 1.0) > 1e-8:
        raise ValueError(f"Initial state must be normalized (got norm {norm:.12g}).")
    return state


def propagate_trajectory(
    params: SystemParams, pulse: PulseSequence, initial: InitialState
) -> np.ndarray:
    """Basis-state populations after every slice

    Parameters
    ----------
    params : SystemParams
    pulse : PulseSequence
    initial : int, str or (9, ) array-like
        Basis index, basis label such as "01", or normalized state vector.

    Returns
    -------
    populations : (num_samples + 1, 9) np.ndarray
        Row j holds |<b|U(j·dt)|ψ0>|² for the 9 basis states b.
    """
    state = initial_state(initial)
    states = cumulative_propagators(params, pulse) @ state
    return np.abs(states) ** 2


def refine(pulse: PulseSequence, refinement: int) -> PulseSequence:
    """Resample a pulse on a grid `refinement` times finer

    Envelopes are linearly interpolated between midpoint samples and held
    constant before the first and after the last one.
    """
    if refinement < 1:
        raise ValueError(f"`refinement` must be a positive integer (got {refinement}).")
    dt = pulse.dt / refinement
    times = (np.arange(pulse.num_samples * refinement) + 0.5) * dt
    return PulseSequence(
        dt=dt,
        omega_x=np.interp(times, pulse.times, pulse.omega_x),
        omega_y=np.interp(times, pulse.times, pulse.omega_y),
    )


def oracle_propagate(
    params: SystemParams, pulse: PulseSequence, refinement: int = 10
) -> np.ndarray:
    """Reference evolution operator on a refined time grid

    Parameters
    ----------
    params : SystemParams
    pulse : PulseSequence
    refinement : int, optional
        Number of sub-steps per original time step (at least 2). Defaults to 10.
    """
    if refinement < 2:
        raise ValueError(f"`refinement` must be at least 2 (got {refinement}).")
    return propagate(params, refine(pulse, refinement))


def propagate_interaction(params: SystemParams, pulse: PulseSequence) -> np.ndarray:
    """Evolution operator in the interaction frame of the drift

    Same slice product as `propagate`, with the interaction-frame Hamiltonian
    sampled at the midpoints. In the limit dt → 0 it equals
    exp(+i·drift·t_g)·propagate(params, pulse).
    """
    _check_finite(pulse)
    hamiltonians = np.stack(
        [
            build_interaction_hamiltonian(params, omega_c, t)
            for omega_c, t in zip(pulse.omega_c, pulse.times)
        ]
    )
    _, _, propagators = diagonalize(hamiltonians, pulse.dt)
    return _ordered_product(propagators)


def is_unitary(unitary: np.ndarray, atol: float = 1e-10) -> bool:
    """Check ‖U†U - 1‖_max < atol"""
    identity = np.eye(unitary.shape[-1])
    return bool(np.max(np.abs(unitary.conj().T @ unitary - identity)) < atol)
