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

"""Spectral analysis of sampled control envelopes"""

import math
from dataclasses import dataclass
from typing import Dict, Optional, Text

import numpy as np

from crowdpulse.core.model import SystemParams, mhz_to_angular
from crowdpulse.core.propagation import PulseSequence


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Discrete-time Fourier transform of both quadratures

    Parameters
    ----------
    nu : (num_frequencies, ) np.ndarray
        Angular frequencies (rad/ns).
    x, y : (num_frequencies, ) np.ndarray
        Complex amplitudes of Ω_X and Ω_Y.
    """

    nu: np.ndarray
    x: np.ndarray
    y: np.ndarray

    def magnitude(self) -> np.ndarray:
        """Combined magnitude sqrt(|X|² + |Y|²)"""
        return np.hypot(np.abs(self.x), np.abs(self.y))

    def rows(self):
        for nu, x, y in zip(self.nu, self.x, self.y):
            yield nu, abs(x), abs(y), x.real, x.imag, y.real, y.imag


def dtft(
    pulse: PulseSequence, freq_grid: np.ndarray, chunk_size: int = 256
) -> Spectrum:
    """Direct evaluation of X(ν) = Σ_j Ω[j]·exp(-iν·t_j)·dt

    Works on arbitrary frequency grids, including exact detunings that FFT
    bins would miss.

    Parameters
    ----------
    pulse : PulseSequence
    freq_grid : array-like
        Angular frequencies (rad/ns).
    chunk_size : int, optional
        Number of frequencies evaluated at once. Defaults to 256.
    """
    nu = np.atleast_1d(np.asarray(freq_grid, dtype=float))
    if nu.size == 0:
        raise ValueError("Frequency grid must not be empty.")

    samples = np.stack([pulse.omega_x, pulse.omega_y]).astype(complex)
    amplitudes = np.empty((2, len(nu)), dtype=complex)
    for start in range(0, len(nu), chunk_size):
        chunk = nu[start : start + chunk_size]
        kernel = np.exp(-1j * np.outer(pulse.times, chunk)) * pulse.dt
        amplitudes[:, start : start + chunk_size] = samples @ kernel

    return Spectrum(nu=nu, x=amplitudes[0], y=amplitudes[1])


def detuning_lines(params: SystemParams) -> Dict[Text, float]:
    """Energy splittings expected in the spectrum of an optimized pulse"""
    return {
        "delta": params.delta,
        "delta_minus_anharm": params.delta - params.anharm,
        "anharm": params.anharm,
        "two_delta_minus_anharm": 2.0 * params.delta - params.anharm,
    }


def frequency_grid(
    params: Optional[SystemParams] = None,
    nu_max: float = mhz_to_angular(800.0),
    num_points: int = 2000,
) -> np.ndarray:
    """Frequency grid symmetric about 0

    Parameters
    ----------
    params : SystemParams, optional
        When given, ±δ, ±Δ, ±(δ-Δ) and ±(2δ-Δ) are inserted in the grid.
    nu_max : float, optional
        Largest frequency (rad/ns). Defaults to 2π·0.8 GHz.
    num_points : int, optional
        Number of regularly spaced points in [0, nu_max]. Defaults to 2000.
    """
    positive = np.linspace(0.0, nu_max, num_points + 1)
    if params is not None:
        lines = np.abs(list(detuning_lines(params).values()))
        positive = np.union1d(positive, lines[lines <= nu_max])
    return np.concatenate([-positive[:0:-1], positive])


@dataclass(frozen=True)
class SpectralLine:
    nu: float
    peak_nu: float
    magnitude: float
    is_peak: bool
    above_median: bool

    @property
    def detected(self) -> bool:
        return self.is_peak and self.above_median


def spectral_signature(
    spectrum: Spectrum,
    params: SystemParams,
    nu_max: float = mhz_to_angular(800.0),
    window: float = mhz_to_angular(10.0),
) -> Dict[Text, SpectralLine]:
    """Look for local maxima of the spectrum at the system detunings

    A line is detected when the largest magnitude within ±`window` of the
    detuning is a strict local maximum of the grid (not on the window edge)
    and exceeds the median magnitude over [0, `nu_max`].
    """
    magnitude = spectrum.magnitude()
    in_band = (spectrum.nu >= 0.0) & (spectrum.nu <= nu_max)
    if not np.any(in_band):
        raise ValueError(f"Spectrum has no frequency in [0, {nu_max:g}] rad/ns.")
    median = float(np.median(magnitude[in_band]))

    lines = dict()
    for name, nu in detuning_lines(params).items():
        nu = abs(nu)
        candidates = np.flatnonzero(np.abs(spectrum.nu - nu) <= window)
        if len(candidates) == 0:
            lines[name] = SpectralLine(nu, math.nan, math.nan, False, False)
            continue
        best = candidates[np.argmax(magnitude[candidates])]
        is_peak = (
            0 < best < len(magnitude) - 1
            and best not in (candidates[0], candidates[-1])
            and magnitude[best] > magnitude[best - 1]
            and magnitude[best] > magnitude[best + 1]
        )
        lines[name] = SpectralLine(
            nu=nu,
            peak_nu=float(spectrum.nu[best]),
            magnitude=float(magnitude[best]),
            is_peak=bool(is_peak),
            above_median=bool(magnitude[best] > median),
        )
    return lines


@dataclass(frozen=True)
class DragFit:
    beta: float
    r_squared: float


def drag_proportionality(pulse: PulseSequence) -> DragFit:
    """Least-squares fit of Ω_Y ≈ -Ω̇_X/β

    Returns the fitted divisor β and the coefficient of determination of
    the fit (1 for an exact DRAG quadrature).
    """
    derivative = np.gradient(pulse.omega_x, pulse.dt)
    norm = float(np.dot(derivative, derivative))
    if norm == 0.0:
        return DragFit(beta=math.inf, r_squared=math.nan)

    slope = float(np.dot(derivative, pulse.omega_y)) / norm
    residual = pulse.omega_y - slope * derivative
    total = float(np.sum((pulse.omega_y - np.mean(pulse.omega_y)) ** 2))
    r_squared = 1.0 - float(np.dot(residual, residual)) / total if total > 0.0 else math.nan
    beta = -1.0 / slope if slope != 0.0 else math.inf
    return DragFit(beta=beta, r_squared=r_squared)
