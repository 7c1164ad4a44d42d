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


import json
import math

import numpy as np
import pytest

from crowdpulse.core.io import (
    PARAMS_DEFAULTS,
    load_pulse,
    params_from_config,
    read_json,
    save_params,
    save_pulse,
    write_json,
)
from crowdpulse.core.propagation import PulseSequence
from crowdpulse.utils.version import VersionMismatchWarning, check_version


@pytest.fixture()
def pulse():
    rng = np.random.default_rng(0)
    return PulseSequence(dt=0.01, omega_x=rng.normal(size=50), omega_y=rng.normal(size=50))


def test_default_params():
    params = params_from_config()
    assert params.delta == pytest.approx(2.0 * math.pi * 0.045)
    assert params.coupling(2, 2) == pytest.approx(math.sqrt(2.0))
    assert PARAMS_DEFAULTS["omega1_ghz"] == 5.508


def test_params_override():
    params = params_from_config({"delta_mhz": 30.0, "lambda": [[1.0, 1.3], [0.9, 1.2]]})
    assert params.delta == pytest.approx(2.0 * math.pi * 0.030)
    assert params.anharm == pytest.approx(-2.0 * math.pi * 0.350)
    assert params.coupling(2, 1) == 0.9


def test_params_file(tmp_path):
    path = tmp_path / "params.json"
    path.write_text(json.dumps({"anharm_mhz": -300.0}))
    assert params_from_config(path).anharm == pytest.approx(-2.0 * math.pi * 0.300)

    with pytest.raises(ValueError):
        params_from_config(tmp_path / "missing.json")
    with pytest.raises(ValueError):
        params_from_config({"detuning": 45.0})


def test_saved_params_can_be_reloaded(params, tmp_path):
    path = tmp_path / "params.json"
    save_params(params, path)
    reloaded = params_from_config(read_json(path))
    assert reloaded.delta == pytest.approx(params.delta, rel=1e-15)
    assert reloaded.anharm == pytest.approx(params.anharm, rel=1e-15)
    assert reloaded.couplings == params.couplings


@pytest.mark.parametrize("suffix", [".csv", ".json"])
def test_pulse_files(pulse, tmp_path, suffix):
    path = tmp_path / f"pulse{suffix}"
    save_pulse(pulse, path)
    loaded = load_pulse(path)
    assert loaded.dt == pulse.dt
    np.testing.assert_array_equal(loaded.omega_x, pulse.omega_x)
    np.testing.assert_array_equal(loaded.omega_y, pulse.omega_y)


def test_pulse_csv_header(pulse, tmp_path):
    path = tmp_path / "pulse.csv"
    save_pulse(pulse, path)
    assert path.read_text().splitlines()[0] == "t_ns,omega_x,omega_y"

    path.write_text("time,x,y\n0.005,1.0,0.0\n")
    with pytest.raises(ValueError):
        load_pulse(path)


def test_json_artifacts(tmp_path):
    path = tmp_path / "artifact.json"
    write_json(path, {"alpha": float("nan"), "values": np.arange(3), "z": 1 + 2j})
    raw = json.loads(path.read_text())
    assert "crowdpulse" in raw
    assert raw["alpha"] is None
    assert raw["z"] == {"re": 1.0, "im": 2.0}

    data = read_json(path)
    assert "crowdpulse" not in data
    assert data["values"] == [0, 1, 2]

    path.write_text("{not json")
    with pytest.raises(ValueError):
        read_json(path)


def test_json_version_tag_is_reserved(tmp_path):
    path = tmp_path / "artifact.json"
    with pytest.raises(ValueError):
        write_json(path, {"crowdpulse": "0.0.1", "value": 1})
    assert not path.exists()


def test_version_mismatch(tmp_path):
    path = tmp_path / "artifact.json"
    path.write_text(json.dumps({"crowdpulse": "99.0.0", "value": 1}))
    with pytest.warns(VersionMismatchWarning):
        assert read_json(path) == {"value": 1}


def test_check_version():
    with pytest.warns(VersionMismatchWarning):
        check_version("crowdpulse", "1.0.0", "2.0.0")
    with pytest.warns(VersionMismatchWarning):
        check_version("crowdpulse", "1.3.0", "1.2.0")
    with pytest.warns(VersionMismatchWarning):
        check_version("crowdpulse", "unknown", "1.2.0")
