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

"""
# Reading and writing crowdpulse artifacts

Parameter and optimizer configurations are JSON files loaded through
OmegaConf and merged over documented defaults:

    {"delta_mhz": 45.0, "anharm_mhz": -350.0, "lambda": [1.0, 1.4142135623730951]}

Pulses are stored either as CSV (header `t_ns,omega_x,omega_y`, midpoint
times) or as JSON ({"dt": ..., "omega_x": [...], "omega_y": [...]}). Every
JSON artifact records the crowdpulse version it was written with.
"""

import csv
import json
import math
from pathlib import Path
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Text, Union

import numpy as np
from omegaconf import DictConfig, OmegaConf
from omegaconf.errors import OmegaConfBaseException

from crowdpulse.core.model import SystemParams
from crowdpulse.core.propagation import PulseSequence
from crowdpulse.utils.version import check_version

PathLike = Union[Text, Path]

# lab-frame frequencies are accepted for reference only
PARAMS_DEFAULTS = {
    "delta_mhz": 45.0,
    "anharm_mhz": -350.0,
    "lambda": [1.0, math.sqrt(2.0)],
    "omega1_ghz": 5.508,
    "omega2_ghz": 5.5903,
}

PULSE_CSV_HEADER = ("t_ns", "omega_x", "omega_y")

# 17 significant digits round-trip any float64
FLOAT_FORMAT = "%.17g"


def _version() -> Text:
    from crowdpulse import __version__

    return __version__


def load_config(
    config: Union[PathLike, Mapping, None], defaults: Mapping, what: Text = "Configuration"
) -> DictConfig:
    """Merge a JSON file (or mapping) over `defaults`

    Parameters
    ----------
    config : str, Path, mapping or None
        Path to a JSON file, an in-memory mapping, or None for defaults only.
    defaults : mapping
        Default values. Keys missing from `defaults` are rejected.
    what : str, optional
        Used in error messages.

    Raises
    ------
    ValueError
        Unreadable file or unknown keys.
    """
    base = OmegaConf.create(dict(defaults))
    OmegaConf.set_struct(base, True)

    if config is None:
        return base

    try:
        if isinstance(config, Mapping):
            override = OmegaConf.create(dict(config))
        else:
            override = OmegaConf.load(Path(config))
        return OmegaConf.merge(base, override)
    except (OmegaConfBaseException, OSError) as e:
        raise ValueError(f"{what} could not be loaded from {config}: {e}") from e


def params_from_config(config: Union[PathLike, Mapping, None] = None) -> SystemParams:
    """Load system parameters

    Parameters
    ----------
    config : str, Path, mapping or None
        JSON file or mapping with keys `delta_mhz`, `anharm_mhz` and `lambda`.
        `lambda` is either a [λ1, λ2] pair shared by both qubits or one pair per
        qubit. Missing keys take their default value.
    """
    merged = OmegaConf.to_container(
        load_config(config, PARAMS_DEFAULTS, what="System parameters"), resolve=True
    )
    return SystemParams.from_mhz(
        delta_mhz=float(merged["delta_mhz"]),
        anharm_mhz=float(merged["anharm_mhz"]),
        couplings=merged["lambda"],
    )


def save_params(params: SystemParams, path: PathLike):
    write_json(path, params.to_dict())


def save_pulse(pulse: PulseSequence, path: PathLike):
    """Write a pulse as CSV or JSON, depending on the file extension"""
    path = Path(path)
    if path.suffix == ".json":
        write_json(
            path,
            {
                "dt": pulse.dt,
                "omega_x": pulse.omega_x.tolist(),
                "omega_y": pulse.omega_y.tolist(),
            },
        )
        return

    np.savetxt(
        path,
        np.column_stack([pulse.times, pulse.omega_x, pulse.omega_y]),
        delimiter=",",
        header=",".join(PULSE_CSV_HEADER),
        comments="",
        fmt=FLOAT_FORMAT,
    )


def load_pulse(path: PathLike) -> PulseSequence:
    """Read a pulse written by `save_pulse`

    For CSV files the time step is recovered from the first midpoint time.
    """
    path = Path(path)
    if path.suffix == ".json":
        data = read_json(path)
        try:
            return PulseSequence(
                dt=float(data["dt"]), omega_x=data["omega_x"], omega_y=data["omega_y"]
            )
        except KeyError as e:
            raise ValueError(f"{path} is missing pulse field {e}.") from e

    with open(path, mode="r", encoding="utf-8") as f:
        header = f.readline().strip()
    if tuple(header.split(",")) != PULSE_CSV_HEADER:
        raise ValueError(
            f"{path} does not look like a pulse file (expected header "
            f"'{','.join(PULSE_CSV_HEADER)}', got '{header}')."
        )

    samples = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    if samples.shape[0] == 0:
        raise ValueError(f"{path} does not contain any sample.")
    times, omega_x, omega_y = samples.T
    return PulseSequence(dt=2.0 * times[0], omega_x=omega_x, omega_y=omega_y)


def _jsonable(value: Any) -> Any:
    if isinstance(value, Mapping):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return _jsonable(value.tolist())
    if isinstance(value, (np.floating, float)):
        # JSON has no NaN
        return float(value) if math.isfinite(value) else None
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, complex):
        return {"re": _jsonable(value.real), "im": _jsonable(value.imag)}
    return value


def write_json(path: PathLike, payload: Mapping):
    """Write `payload` as JSON, tagged with the crowdpulse version

    Raises
    ------
    ValueError
        When `payload` has a "crowdpulse" key, which holds the version tag.
    """
    payload = _jsonable(payload)
    if "crowdpulse" in payload:
        raise ValueError(
            "\"crowdpulse\" is reserved for the version tag of JSON artifacts."
        )
    data = {"crowdpulse": _version(), **payload}
    with open(path, mode="w", encoding="utf-8") as f:
        json.dump(data, f, indent=2)
        f.write("\n")


def read_json(path: PathLike, what: Text = "Artifact") -> Dict:
    """Read a JSON artifact, warning when it was written by another version"""
    try:
        with open(path, mode="r", encoding="utf-8") as f:
            data = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise ValueError(f"Could not read {path}: {e}") from e

    theirs = data.pop("crowdpulse", None)
    if theirs is not None:
        check_version("crowdpulse", theirs, _version(), what=what)
    return data


def _format(value: Any) -> Text:
    if isinstance(value, (float, np.floating)):
        return FLOAT_FORMAT % value
    if value is None:
        return ""
    return str(value)


def write_csv(path: PathLike, header: Sequence[Text], rows: Iterable[Sequence[Any]]):
    """Write rows with full float precision"""
    with open(path, mode="w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_format(value) for value in row])


def read_csv(path: PathLike) -> List[Dict[Text, Text]]:
    with open(path, mode="r", encoding="utf-8", newline="") as f:
        return list(csv.DictReader(f))


def parse_float(text: Optional[Text]) -> float:
    """Inverse of the CSV float formatting; empty cells are NaN"""
    return float(text) if text else float("nan")
