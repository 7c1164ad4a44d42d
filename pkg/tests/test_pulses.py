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

import numpy as np
import pytest

from crowdpulse.pulses.analytic import (
    PI_PULSE_AREA,
    AnalyticPulseSpec,
    AreaNormalizationError,
    PulseFamily,
    drag_beta_menu,
    drag_residual_coefficients,
    envelope,
    normalize_area,
    pulse_area,
    render,
    sideband_preset,
)


def test_spec_defaults():
    spec = AnalyticPulseSpec("drag", 12.0)
    assert spec.family is PulseFamily.DRAG
    assert spec.sigma == pytest.approx(2.0)
    assert spec.amplitude == 1.0

    for kwargs in ({"gate_time": 0.0}, {"gate_time": 10.0, "sigma": 0.0}):
        with pytest.raises(ValueError):
            AnalyticPulseSpec("gaussian", **kwargs)
    with pytest.raises(ValueError):
        AnalyticPulseSpec("square", 10.0)


def test_resolve(params):
    assert AnalyticPulseSpec("drag", 10.0).resolve(params).drag_beta == params.anharm
    sideband = AnalyticPulseSpec("sideband", 10.0).resolve(params)
    assert sideband.drag_beta == 2.0 * params.anharm
    assert sideband.sideband_freq == 0.5 * params.delta

    gaussian = AnalyticPulseSpec("gaussian", 10.0)
    assert gaussian.resolve(None) is gaussian
    with pytest.raises(ValueError):
        AnalyticPulseSpec("drag", 10.0).resolve(None)


def test_sideband_preset(params):
    spec = sideband_preset(params, 17.0)
    assert spec.sigma == pytest.approx(17.0 / 6.0)
    assert spec.sideband_depth == 1.0
    assert spec.sideband_freq == pytest.approx(0.5 * params.delta)
    assert spec.drag_beta == pytest.approx(2.0 * params.anharm)


def test_envelope_derivative(params):
    spec = sideband_preset(params, 17.0)
    t = np.linspace(0.5, 16.5, 7)
    h = 1e-5
    _, derivative = envelope(spec, t)
    numerical = (envelope(spec, t + h)[0] - envelope(spec, t - h)[0]) / (2.0 * h)
    np.testing.assert_allclose(derivative, numerical, rtol=1e-6, atol=1e-9)


def test_render_grid():
    pulse = render(AnalyticPulseSpec("gaussian", 17.0), 0.01)
    assert pulse.num_samples == 1700
    assert pulse.gate_time == pytest.approx(17.0, abs=1e-12)

    pulse = render(AnalyticPulseSpec("gaussian", 1.0), 0.3)
    assert pulse.num_samples == 3
    assert pulse.dt == pytest.approx(1.0 / 3.0)

    with pytest.raises(ValueError):
        render(AnalyticPulseSpec("gaussian", 1.0), 0.0)


def test_gaussian_is_not_offset():
    spec = AnalyticPulseSpec("gaussian", 12.0)
    pulse = render(spec, 0.01)
    offset = 6.0 - 0.005
    assert pulse.omega_x[0] == pytest.approx(math.exp(-0.5 * (offset / 2.0) ** 2))
    np.testing.assert_array_equal(pulse.omega_y, 0.0)


@pytest.mark.parametrize("family", ["gaussian", "drag", "sideband"])
def test_symmetry(family, params):
    pulse = render(AnalyticPulseSpec(family, 17.0), 0.01, params)
    np.testing.assert_allclose(pulse.omega_x, pulse.omega_x[::-1], rtol=1e-12)
    np.testing.assert_allclose(pulse.omega_y, -pulse.omega_y[::-1], atol=1e-15)


def test_drag_quadrature(params):
    pulse = render(AnalyticPulseSpec("drag", 17.0), 0.01, params)
    derivative = np.gradient(pulse.omega_x, pulse.dt)
    np.testing.assert_allclose(
        -params.anharm * pulse.omega_y[1:-1],
        derivative[1:-1],
        atol=1e-4 * np.max(np.abs(derivative)),
    )


def test_infinite_beta_disables_quadrature(params):
    pulse = render(AnalyticPulseSpec("drag", 17.0, drag_beta=math.inf), 0.01, params)
    np.testing.assert_array_equal(pulse.omega_y, 0.0)


@pytest.mark.parametrize("family", ["gaussian", "drag", "sideband"])
def test_normalize_area(family, params):
    spec = normalize_area(AnalyticPulseSpec(family, 17.0), params, 0.01)
    pulse = render(spec, 0.01)
    area = pulse_area(pulse)
    assert area.real == pytest.approx(PI_PULSE_AREA, abs=1e-9)
    assert abs(area.imag) < 1e-9

    again = normalize_area(spec, params, 0.01)
    assert again.amplitude == pytest.approx(spec.amplitude, rel=1e-10)


def test_normalize_constant_pulse():
    spec = AnalyticPulseSpec("gaussian", 20.0, sigma=math.inf)
    spec = normalize_area(spec, None, 0.1)
    assert spec.amplitude == pytest.approx(math.pi / 20.0, rel=1e-10)


def test_normalize_vanishing_area():
    # depth 1 at zero frequency cancels the envelope
    spec = AnalyticPulseSpec(
        "sideband", 10.0, sideband_freq=0.0, sideband_depth=1.0, drag_beta=math.inf
    )
    with pytest.raises(AreaNormalizationError):
        normalize_area(spec, None, 0.01)


def test_drag_residual_coefficients(params):
    at_anharm = drag_residual_coefficients(params.anharm, params)
    assert at_anharm.qubit1_12 == 0.0
    assert next(iter(at_anharm.ranking())) == "qubit1_12"

    assert drag_residual_coefficients(params.delta, params).qubit2_12 == 0.0
    at_difference = drag_residual_coefficients(params.delta - params.anharm, params)
    assert at_difference.qubit2_01 == pytest.approx(0.0, abs=1e-15)

    coefficients = drag_residual_coefficients(params.delta, params, eta=0.5)
    assert coefficients.qubit2_02 == pytest.approx(
        0.25 * params.coupling(2, 2) * params.anharm / (8.0 * params.delta**2)
    )

    with pytest.raises(ValueError):
        drag_residual_coefficients(0.0, params)


def test_drag_beta_menu(params):
    menu = drag_beta_menu(params)
    assert set(menu) == {"anharm", "delta", "delta_minus_anharm"}
    assert menu["delta_minus_anharm"] == pytest.approx(params.delta - params.anharm)
