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
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crowdpulse.core.model import (
    SpectralCrowdingWarning,
    SystemParams,
    basis_index,
    build_drift,
)
from crowdpulse.core.propagation import (
    PulseSequence,
    cumulative_propagators,
    initial_state,
    is_unitary,
    oracle_propagate,
    propagate,
    propagate_interaction,
    propagate_trajectory,
    refine,
)
from crowdpulse.pulses.analytic import (
    AnalyticPulseSpec,
    normalize_area,
    render,
    sideband_preset,
)


@pytest.fixture()
def gaussian():
    # fixed amplitude, so that pulses rendered at different time steps sample
    # the same envelope
    return AnalyticPulseSpec("gaussian", gate_time=17.0, amplitude=0.4)


def test_pulse_sequence_validation():
    with pytest.raises(ValueError):
        PulseSequence(dt=0.0, omega_x=[1.0], omega_y=[0.0])
    with pytest.raises(ValueError):
        PulseSequence(dt=0.1, omega_x=[1.0, 2.0], omega_y=[0.0])
    with pytest.raises(ValueError):
        PulseSequence(dt=0.1, omega_x=[], omega_y=[])
    with pytest.raises(ValueError):
        PulseSequence(dt=0.1, omega_x=[[1.0]], omega_y=[[0.0]])


def test_pulse_sequence_is_read_only():
    pulse = PulseSequence.zeros(4, 0.5)
    with pytest.raises(ValueError):
        pulse.omega_x[0] = 1.0


def test_pulse_sequence_times():
    pulse = PulseSequence.from_complex(0.5, [1.0 + 2.0j, 3.0, -1.0j])
    np.testing.assert_allclose(pulse.times, [0.25, 0.75, 1.25])
    assert pulse.gate_time == pytest.approx(1.5)
    np.testing.assert_array_equal(pulse.omega_y, [2.0, 0.0, -1.0])

    longer = pulse.concatenate(PulseSequence.zeros(2, 0.5))
    assert longer.num_samples == 5
    with pytest.raises(ValueError):
        pulse.concatenate(PulseSequence.zeros(2, 0.25))


def test_zero_pulse_is_free_evolution(params):
    pulse = PulseSequence.zeros(100, 0.1)
    expected = np.diag(np.exp(-1j * np.diag(build_drift(params)) * 10.0))
    np.testing.assert_allclose(propagate(params, pulse), expected, atol=1e-12)


def test_rabi_flip(decoupled):
    gate_time = 20.0
    pulse = PulseSequence(
        dt=0.1, omega_x=np.full(200, math.pi / gate_time), omega_y=np.zeros(200)
    )
    unitary = propagate(decoupled, pulse)
    for j2 in (0, 1):
        element = unitary[basis_index(1, j2), basis_index(0, j2)]
        assert abs(element) == pytest.approx(1.0, abs=1e-12)
        assert element == pytest.approx(-1j, abs=1e-12)


def test_propagate_rejects_non_finite_samples(params):
    pulse = PulseSequence(dt=0.1, omega_x=[0.0, float("nan")], omega_y=[0.0, 0.0])
    with pytest.raises(ValueError):
        propagate(params, pulse)


@settings(max_examples=20, deadline=None)
@given(
    samples=st.lists(
        st.tuples(
            st.floats(min_value=-3.0, max_value=3.0),
            st.floats(min_value=-3.0, max_value=3.0),
        ),
        min_size=1,
        max_size=30,
    ),
    dt=st.floats(min_value=0.01, max_value=1.0),
)
def test_propagate_is_unitary(samples, dt):
    omega_x, omega_y = np.array(samples).T
    pulse = PulseSequence(dt=dt, omega_x=omega_x, omega_y=omega_y)
    assert is_unitary(propagate(SystemParams(), pulse), atol=1e-10)


sample_pairs = st.lists(
    st.tuples(
        st.floats(min_value=-2.0, max_value=2.0),
        st.floats(min_value=-2.0, max_value=2.0),
    ),
    min_size=1,
    max_size=20,
)


def as_pulse(pairs, dt: float) -> PulseSequence:
    omega_x, omega_y = np.array(pairs).T
    return PulseSequence(dt=dt, omega_x=omega_x, omega_y=omega_y)


@settings(max_examples=25, deadline=None)
@given(first=sample_pairs, second=sample_pairs, dt=st.floats(min_value=0.01, max_value=0.5))
def test_propagate_composes(first, second, dt):
    params = SystemParams()
    a, b = as_pulse(first, dt), as_pulse(second, dt)
    np.testing.assert_allclose(
        propagate(params, a.concatenate(b)),
        propagate(params, b) @ propagate(params, a),
        atol=1e-12,
    )


@settings(max_examples=25, deadline=None)
@given(
    omega_x=st.lists(st.floats(min_value=-2.0, max_value=2.0), min_size=1, max_size=20),
    dt=st.floats(min_value=0.01, max_value=0.5),
)
def test_time_reversal_without_drift(omega_x, dt):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", SpectralCrowdingWarning)
        params = SystemParams(delta=0.0, anharm=0.0)
    omega_x = np.array(omega_x)
    forward = PulseSequence(dt=dt, omega_x=omega_x, omega_y=np.zeros_like(omega_x))
    backward = PulseSequence(dt=dt, omega_x=-omega_x, omega_y=np.zeros_like(omega_x))
    np.testing.assert_allclose(
        propagate(params, backward), propagate(params, forward).conj().T, atol=1e-12
    )


def test_cumulative_propagators(params):
    pulse = render(sideband_preset(params, 5.0), 0.05, params)
    cumulative = cumulative_propagators(params, pulse)
    assert cumulative.shape == (pulse.num_samples + 1, 9, 9)
    np.testing.assert_allclose(cumulative[0], np.eye(9))
    np.testing.assert_allclose(cumulative[-1], propagate(params, pulse), atol=1e-12)


def test_second_order_convergence(params, gaussian):
    reference = propagate(params, render(gaussian, 0.00125))
    coarse = np.max(np.abs(propagate(params, render(gaussian, 0.02)) - reference))
    fine = np.max(np.abs(propagate(params, render(gaussian, 0.01)) - reference))
    assert 3.0 < coarse / fine < 5.0


def test_oracle_propagate(params):
    spec = normalize_area(sideband_preset(params, 17.0), params, 0.01)
    pulse = render(spec, 0.01, params)
    oracle = oracle_propagate(params, pulse, refinement=10)
    assert is_unitary(oracle)
    assert np.max(np.abs(oracle - propagate(params, pulse))) < 1e-6
    with pytest.raises(ValueError):
        oracle_propagate(params, pulse, refinement=1)


def test_refine_constant_pulse():
    pulse = PulseSequence(dt=0.2, omega_x=np.full(5, 0.7), omega_y=np.full(5, -0.1))
    refined = refine(pulse, 4)
    assert refined.num_samples == 20
    assert refined.dt == pytest.approx(0.05)
    np.testing.assert_allclose(refined.omega_x, 0.7)
    np.testing.assert_allclose(refined.omega_y, -0.1)


def test_frames_agree(params):
    pulse = render(sideband_preset(params, 17.0), 0.01, params)
    drift = np.diag(build_drift(params))

    def frame_error(dt):
        pulse = render(sideband_preset(params, 17.0), dt, params)
        lab = propagate(params, pulse)
        rotated = np.diag(np.exp(1j * drift * pulse.gate_time)) @ lab
        return np.max(np.abs(propagate_interaction(params, pulse) - rotated))

    assert is_unitary(propagate_interaction(params, pulse))
    coarse, fine = frame_error(0.02), frame_error(0.01)
    assert fine < 5e-3
    assert 3.0 < coarse / fine < 5.0


def test_initial_state():
    np.testing.assert_array_equal(initial_state("01"), np.eye(9)[1])
    np.testing.assert_array_equal(initial_state(4), np.eye(9)[4])
    superposition = (np.eye(9)[0] + 1j * np.eye(9)[3]) / math.sqrt(2.0)
    np.testing.assert_allclose(initial_state(superposition), superposition)

    with pytest.raises(ValueError):
        initial_state("03")
    with pytest.raises(ValueError):
        initial_state(9)
    with pytest.raises(ValueError):
        initial_state(np.ones(9))


def test_propagate_trajectory(params):
    pulse = render(sideband_preset(params, 17.0), 0.05, params)
    populations = propagate_trajectory(params, pulse, "01")
    assert populations.shape == (pulse.num_samples + 1, 9)
    np.testing.assert_array_equal(populations[0], np.eye(9)[1])
    np.testing.assert_allclose(populations.sum(axis=1), 1.0, atol=1e-10)
