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

from crowdpulse.core.model import (
    BASIS_LABELS,
    COMPUTATIONAL_STATES,
    DetuningTable,
    SpectralCrowdingWarning,
    SystemParams,
    angular_to_mhz,
    basis_index,
    build_control_generators,
    build_drift,
    build_interaction_hamiltonian,
    is_hermitian,
    mhz_to_angular,
)


def test_unit_conversion():
    assert mhz_to_angular(1000.0) == pytest.approx(2.0 * math.pi)
    assert angular_to_mhz(mhz_to_angular(45.0)) == pytest.approx(45.0)


def test_basis_index():
    assert basis_index(1, 1) == 4
    assert BASIS_LABELS[basis_index(2, 0)] == "20"
    assert COMPUTATIONAL_STATES == tuple(
        basis_index(j1, j2) for j1 in (0, 1) for j2 in (0, 1)
    )
    with pytest.raises(ValueError):
        basis_index(3, 0)


def test_default_params(params):
    assert params.delta == pytest.approx(2.0 * math.pi * 0.045)
    assert params.anharm == pytest.approx(-2.0 * math.pi * 0.350)
    assert params.coupling(1, 1) == 1.0
    assert params.coupling(2, 2) == pytest.approx(math.sqrt(2.0))


def test_per_qubit_couplings():
    params = SystemParams(couplings=[[1.0, 1.5], [0.8, 1.2]])
    assert params.coupling(1, 2) == 1.5
    assert params.coupling(2, 1) == 0.8


@pytest.mark.parametrize(
    "kwargs",
    [
        {"delta": float("nan")},
        {"anharm": float("inf")},
        {"couplings": [1.0, 2.0, 3.0]},
        {"couplings": [1.0, float("nan")]},
        {"levels": 4},
    ],
)
def test_invalid_params(kwargs):
    with pytest.raises(ValueError):
        SystemParams(**kwargs)


def test_crowding_warnings():
    with pytest.warns(SpectralCrowdingWarning):
        SystemParams.from_mhz(delta_mhz=400.0, anharm_mhz=-350.0)
    with pytest.warns(SpectralCrowdingWarning):
        SystemParams.from_mhz(delta_mhz=45.0, anharm_mhz=350.0)


def test_params_to_dict(params):
    data = params.to_dict()
    assert data["delta_mhz"] == pytest.approx(45.0)
    assert data["anharm_mhz"] == pytest.approx(-350.0)
    assert data["lambda"][1] == [1.0, pytest.approx(math.sqrt(2.0))]


def test_detuning_table(params):
    table = DetuningTable.from_params(params)
    assert table.transition(1, 1) == 0.0
    assert table.transition(1, 2) == params.anharm
    assert table.transition(2, 1) == pytest.approx(params.delta - params.anharm)
    assert table.transition(2, 2) == params.delta
    np.testing.assert_allclose(
        table.ladder_energies(2),
        [0.0, params.delta - params.anharm, 2 * params.delta - params.anharm],
    )
    assert len(list(table.transitions())) == 4


def test_drift_diagonal(params):
    drift = build_drift(params)
    assert np.count_nonzero(drift - np.diag(np.diag(drift))) == 0

    energies = np.diag(drift).real
    two_pi = 2.0 * math.pi
    assert energies[basis_index(0, 0)] == 0.0
    assert energies[basis_index(0, 2)] == pytest.approx(two_pi * 0.440)
    assert energies[basis_index(1, 1)] == pytest.approx(two_pi * 0.395)
    assert energies[basis_index(2, 0)] == pytest.approx(-two_pi * 0.350)


def test_drift_vanishes_without_detunings():
    with pytest.warns(SpectralCrowdingWarning):
        params = SystemParams(delta=0.0, anharm=0.0)
    assert np.count_nonzero(build_drift(params)) == 0


def test_control_generators(params):
    hx, hy = build_control_generators(params)
    assert is_hermitian(hx)
    assert is_hermitian(hy)

    assert hx[basis_index(1, 0), basis_index(0, 0)] == pytest.approx(0.5)
    assert hx[basis_index(0, 2), basis_index(0, 1)] == pytest.approx(0.5 * math.sqrt(2.0))
    assert hy[basis_index(1, 0), basis_index(0, 0)] == pytest.approx(0.5j)
    assert hy[basis_index(0, 0), basis_index(1, 0)] == pytest.approx(-0.5j)
    # a single drive only changes one ladder at a time
    assert hx[basis_index(1, 1), basis_index(0, 0)] == 0.0


def test_interaction_hamiltonian_at_origin(params):
    hx, hy = build_control_generators(params)
    omega_x, omega_y = 0.3, -0.2
    hamiltonian = build_interaction_hamiltonian(params, omega_x + 1j * omega_y, 0.0)
    np.testing.assert_allclose(hamiltonian, omega_x * hx + omega_y * hy, atol=1e-15)


def test_interaction_hamiltonian_is_rotated_control(params):
    hx, hy = build_control_generators(params)
    omega_x, omega_y, t = 0.4, 0.1, 7.3
    frame = np.diag(np.exp(1j * np.diag(build_drift(params)) * t))
    expected = frame @ (omega_x * hx + omega_y * hy) @ frame.conj().T

    hamiltonian = build_interaction_hamiltonian(params, omega_x + 1j * omega_y, t)
    assert is_hermitian(hamiltonian)
    assert np.count_nonzero(np.diag(hamiltonian)) == 0
    np.testing.assert_allclose(hamiltonian, expected, atol=1e-12)


def test_interaction_hamiltonian_rejects_non_finite_time(params):
    with pytest.raises(ValueError):
        build_interaction_hamiltonian(params, 1.0, float("nan"))
