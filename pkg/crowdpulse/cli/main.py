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

"""Command line interface

    crowdpulse simulate --family sideband --gate-time 17
    crowdpulse sweep --family gaussian --start 30 --stop 60 --step 0.5 --out gaussian.csv
    crowdpulse protocol --family sideband --start 12 --stop 25 --out protocol.json
    crowdpulse optimize --gate-time 4 --out trace.json --pulse-out grape.csv
    crowdpulse dtft --pulse grape.csv --out spectrum.csv
    crowdpulse trace --family sideband --gate-time 17 --initial 01 --out populations.csv
    crowdpulse constraints --family sideband --gate-time 17

Every command accepts --params (JSON system parameters), --dt (ns) and --out.
Exit codes: 0 on success, 1 on invalid input, 2 when no usable gate time is found.
"""

import contextlib
import math
from dataclasses import replace
from pathlib import Path
from typing import List, Optional

import typer
from rich.console import Console
from rich.table import Table

from crowdpulse.analysis.magnus import fourier_constraints, magnus_theta1_diag01
from crowdpulse.core.fidelity import FidelityReport, apply_frame_correction, gate_fidelity
from crowdpulse.core.io import load_pulse, params_from_config, save_pulse, write_csv, write_json
from crowdpulse.core.model import SystemParams, angular_to_mhz, mhz_to_angular
from crowdpulse.core.propagation import PulseSequence
from crowdpulse.pipelines.grape import GrapeConfig, optimize, optimize_many
from crowdpulse.pipelines.protocol import NoUsableGateTimeError, protocol_run
from crowdpulse.pipelines.sweep import (
    family_spec,
    gate_time_grid,
    simulate,
    sweep_drag_menu,
    sweep_gate_time,
    trace_populations,
)
from crowdpulse.pipelines.utils.hook import ProgressHook
from crowdpulse.pulses.analytic import PulseFamily, normalize_area, render
from crowdpulse.utils.signal import dtft as compute_dtft
from crowdpulse.utils.signal import frequency_grid, spectral_signature

app = typer.Typer(help="Single-qubit pulses for spectrally crowded transmons.")
console = Console()

PARAMS = typer.Option(None, "--params", help="JSON file with delta_mhz, anharm_mhz, lambda.")
DT = typer.Option(0.01, "--dt", help="Time step (ns).")
OUT = typer.Option(None, "--out", help="Output file.")

# packaged defaults, also usable as templates for --params and --config
CONFIG_DIR = Path(__file__).parent / "config"


@contextlib.contextmanager
def _exit_codes():
    try:
        yield
    except NoUsableGateTimeError as e:
        console.print(f"[red]{e}[/red]")
        raise typer.Exit(code=2)
    except (ValueError, OSError) as e:
        console.print(f"[red]Error: {e}[/red]")
        raise typer.Exit(code=1)


def _system_params(path: Optional[Path]) -> SystemParams:
    return params_from_config(path or CONFIG_DIR / "params.json")


def _report_table(title: str, report: FidelityReport) -> Table:
    table = Table(title=title)
    table.add_column("quantity")
    table.add_column("value", justify="right")
    for name, value in report.errors().items():
        table.add_row(name.replace("err_", "1 - "), f"{value:.3e}")
    table.add_row("alpha (rad)", f"{report.alpha:.6f}")
    table.add_row("gamma (rad)", f"{report.gamma:.6f}")
    table.add_row("leakage", f"{report.leakage:.3e}")
    return table


def _analytic_pulse(
    params: SystemParams,
    family: PulseFamily,
    gate_time: float,
    dt: float,
    beta_mhz: Optional[float],
) -> PulseSequence:
    beta = None if beta_mhz is None else mhz_to_angular(beta_mhz)
    spec = normalize_area(family_spec(family, gate_time, params, drag_beta=beta), params, dt)
    return render(spec, dt, params)


def _pulse(
    params: SystemParams,
    pulse_path: Optional[Path],
    family: PulseFamily,
    gate_time: Optional[float],
    dt: float,
    beta_mhz: Optional[float],
) -> PulseSequence:
    if pulse_path is not None:
        return load_pulse(pulse_path)
    if gate_time is None:
        raise ValueError("Either --pulse or --gate-time is required.")
    return _analytic_pulse(params, family, gate_time, dt, beta_mhz)


@app.command("simulate")
def simulate_(
    family: PulseFamily = typer.Option(PulseFamily.SIDEBAND, "--family"),
    gate_time: float = typer.Option(17.0, "--gate-time", help="Gate time (ns)."),
    beta_mhz: Optional[float] = typer.Option(None, "--beta-mhz", help="DRAG divisor β/2π (MHz)."),
    correct: bool = typer.Option(False, "--correct", help="Also report the frame-corrected Φ."),
    params: Optional[Path] = PARAMS,
    dt: float = DT,
    out: Optional[Path] = OUT,
    pulse_out: Optional[Path] = typer.Option(
        None, "--pulse-out", help="Rendered pulse (CSV/JSON)."
    ),
):
    """Simulate one area-normalized analytic pulse"""
    with _exit_codes():
        system = _system_params(params)
        beta = None if beta_mhz is None else mhz_to_angular(beta_mhz)
        spec = family_spec(family, gate_time, system, drag_beta=beta)
        pulse, unitary, report = simulate(spec, system, dt)
        console.print(_report_table(f"{family.value} pulse, t_g = {gate_time:g} ns", report))

        payload = {"report": report.to_dict(), "spec": normalize_area(spec, system, dt).to_dict()}
        if correct and math.isfinite(report.alpha):
            corrected = apply_frame_correction(unitary, report.alpha, report.gamma)
            payload["corrected_phi"] = gate_fidelity(corrected)
            console.print(f"frame-corrected Φ = {payload['corrected_phi']:.9f}")

        if out is not None:
            write_json(out, payload)
            typer.echo(f"Report written to {out}")
        if pulse_out is not None:
            save_pulse(pulse, pulse_out)
            typer.echo(f"Pulse written to {pulse_out}")


@app.command("render")
def render_(
    family: PulseFamily = typer.Option(PulseFamily.SIDEBAND, "--family"),
    gate_time: float = typer.Option(17.0, "--gate-time", help="Gate time (ns)."),
    beta_mhz: Optional[float] = typer.Option(None, "--beta-mhz", help="DRAG divisor β/2π (MHz)."),
    params: Optional[Path] = PARAMS,
    dt: float = DT,
    out: Path = typer.Option(..., "--out", help="Pulse file (CSV or JSON)."),
):
    """Write an area-normalized analytic pulse"""
    with _exit_codes():
        pulse = _analytic_pulse(_system_params(params), family, gate_time, dt, beta_mhz)
        save_pulse(pulse, out)
        typer.echo(f"{pulse.num_samples} samples written to {out}")


@app.command()
def sweep(
    family: PulseFamily = typer.Option(PulseFamily.SIDEBAND, "--family"),
    start: float = typer.Option(10.0, "--start", help="Shortest gate time (ns)."),
    stop: float = typer.Option(30.0, "--stop", help="Longest gate time (ns)."),
    step: float = typer.Option(0.5, "--step", help="Gate time step (ns)."),
    beta_mhz: Optional[float] = typer.Option(None, "--beta-mhz", help="DRAG divisor β/2π (MHz)."),
    drag_menu: bool = typer.Option(
        False, "--drag-menu", help="Sweep DRAG with β ∈ {Δ, δ, δ-Δ} and the pointwise minimum."
    ),
    workers: Optional[int] = typer.Option(None, "--workers", help="Worker processes."),
    params: Optional[Path] = PARAMS,
    dt: float = DT,
    out: Optional[Path] = OUT,
):
    """Fidelity errors and phases as a function of gate time"""
    with _exit_codes():
        system = _system_params(params)
        gate_times = gate_time_grid(start, stop, step)

        with ProgressHook(transient=True) as hook:
            if drag_menu:
                sweeps = sweep_drag_menu(system, gate_times, dt, num_workers=workers, hook=hook)
            else:
                beta = None if beta_mhz is None else mhz_to_angular(beta_mhz)
                sweeps = {
                    family.value: sweep_gate_time(
                        family,
                        system,
                        gate_times,
                        dt,
                        num_workers=workers,
                        hook=hook,
                        drag_beta=beta,
                    )
                }

        table = Table(title="Best gate time per sweep")
        for column in ("sweep", "t_g (ns)", "1 - Φ_avg", "1 - Φ"):
            table.add_column(column)
        for name, result in sweeps.items():
            best = result.best()
            values = best.values()
            table.add_row(name, f"{best.gate_time:g}", f"{values[4]:.3e}", f"{values[1]:.3e}")
        console.print(table)

        if out is not None:
            for name, result in sweeps.items():
                path = out if len(sweeps) == 1 else out.with_name(f"{out.stem}_{name}{out.suffix}")
                result.to_csv(path)
                typer.echo(f"Sweep written to {path}")


@app.command()
def protocol(
    family: PulseFamily = typer.Option(PulseFamily.SIDEBAND, "--family"),
    start: float = typer.Option(12.0, "--start", help="Shortest gate time (ns)."),
    stop: float = typer.Option(25.0, "--stop", help="Longest gate time (ns)."),
    points: int = typer.Option(27, "--points", help="Coarse grid size."),
    workers: Optional[int] = typer.Option(None, "--workers", help="Worker processes."),
    params: Optional[Path] = PARAMS,
    dt: float = DT,
    out: Optional[Path] = OUT,
):
    """Calibrate gate time, amplitude and phase offsets of a pulse family"""
    with _exit_codes():
        system = _system_params(params)
        with ProgressHook(transient=True) as hook:
            recommendation = protocol_run(
                system, family, (start, stop), dt, num_points=points, num_workers=workers, hook=hook
            )

        console.print(
            _report_table(
                f"{family.value} pulse, t_g* = {recommendation.gate_time:.4f} ns",
                recommendation.report,
            )
        )
        console.print(f"A_π = {recommendation.amplitude:.9f} rad/ns")

        if out is not None:
            write_json(out, recommendation.to_dict())
            typer.echo(f"Recommendation written to {out}")


@app.command("optimize")
def optimize_(
    gate_time: List[float] = typer.Option([4.0], "--gate-time", help="Gate time(s) (ns)."),
    config: Optional[Path] = typer.Option(None, "--config", help="GRAPE configuration (JSON)."),
    objective: Optional[str] = typer.Option(None, "--objective", help="'full' or 'average'."),
    penalty: Optional[float] = typer.Option(None, "--penalty", help="Boundary penalty weight."),
    iterations: Optional[int] = typer.Option(None, "--iterations", help="Maximum iterations."),
    goal: Optional[float] = typer.Option(None, "--goal", help="Stop at this fidelity."),
    seed: Optional[int] = typer.Option(None, "--seed"),
    workers: Optional[int] = typer.Option(None, "--workers", help="Worker processes."),
    params: Optional[Path] = PARAMS,
    dt: Optional[float] = typer.Option(None, "--dt", help="Time step (ns). Defaults to 0.01."),
    out: Optional[Path] = OUT,
    pulse_out: Optional[Path] = typer.Option(
        None, "--pulse-out", help="Optimized pulse (CSV/JSON)."
    ),
):
    """Optimize a pulse with GRAPE for one or several gate times"""
    with _exit_codes():
        system = _system_params(params)
        base = GrapeConfig.from_config(
            config or CONFIG_DIR / "grape.json",
            dt=dt,
            objective=objective,
            penalty_weight=penalty,
            max_iterations=iterations,
            fidelity_goal=goal,
            seed=seed,
        )
        configs = [replace(base, gate_time=t) for t in gate_time]

        if len(configs) == 1:
            with ProgressHook(transient=True) as hook:
                traces = [optimize(system, None, configs[0], hook=hook)]
        else:
            traces = optimize_many(system, configs, num_workers=workers)

        table = Table(title="GRAPE")
        for column in ("t_g (ns)", "dt (ns)", "iterations", "Φ", "Φ_avg", "stop"):
            table.add_column(column)
        for trace in traces:
            table.add_row(
                f"{trace.config.gate_time:g}",
                f"{trace.config.dt:g}",
                str(trace.iterations),
                f"{trace.report.phi:.7f}",
                f"{trace.report.phi_avg:.7f}",
                trace.stop_reason,
            )
        console.print(table)

        for trace in traces:
            suffix = "" if len(traces) == 1 else f"_{trace.config.gate_time:g}ns"
            if out is not None:
                path = out.with_name(f"{out.stem}{suffix}{out.suffix}")
                write_json(path, trace.to_dict())
                typer.echo(f"Trace written to {path}")
            if pulse_out is not None:
                path = pulse_out.with_name(f"{pulse_out.stem}{suffix}{pulse_out.suffix}")
                save_pulse(trace.pulse, path)
                typer.echo(f"Pulse written to {path}")


@app.command()
def dtft(
    pulse: Optional[Path] = typer.Option(None, "--pulse", help="Pulse file (CSV/JSON)."),
    family: PulseFamily = typer.Option(PulseFamily.SIDEBAND, "--family"),
    gate_time: Optional[float] = typer.Option(None, "--gate-time", help="Gate time (ns)."),
    beta_mhz: Optional[float] = typer.Option(None, "--beta-mhz", help="DRAG divisor β/2π (MHz)."),
    nu_max_mhz: float = typer.Option(800.0, "--nu-max-mhz", help="Largest frequency ν/2π (MHz)."),
    points: int = typer.Option(2000, "--points", help="Grid points in [0, ν_max]."),
    params: Optional[Path] = PARAMS,
    dt: float = DT,
    out: Optional[Path] = OUT,
):
    """Spectrum of a pulse, with its content at the system detunings"""
    with _exit_codes():
        system = _system_params(params)
        samples = _pulse(system, pulse, family, gate_time, dt, beta_mhz)
        nu_max = mhz_to_angular(nu_max_mhz)
        spectrum = compute_dtft(samples, frequency_grid(system, nu_max=nu_max, num_points=points))

        table = Table(title="Spectral lines")
        for column in ("line", "ν/2π (MHz)", "peak at (MHz)", "|X|", "detected"):
            table.add_column(column)
        for name, line in spectral_signature(spectrum, system, nu_max=nu_max).items():
            table.add_row(
                name,
                f"{angular_to_mhz(line.nu):.1f}",
                f"{angular_to_mhz(line.peak_nu):.1f}",
                f"{line.magnitude:.3e}",
                "yes" if line.detected else "no",
            )
        console.print(table)

        if out is not None:
            header = ("nu", "abs_x", "abs_y", "re_x", "im_x", "re_y", "im_y")
            write_csv(out, header, spectrum.rows())
            typer.echo(f"Spectrum written to {out}")


@app.command()
def trace(
    pulse: Optional[Path] = typer.Option(None, "--pulse", help="Pulse file (CSV/JSON)."),
    family: PulseFamily = typer.Option(PulseFamily.SIDEBAND, "--family"),
    gate_time: Optional[float] = typer.Option(None, "--gate-time", help="Gate time (ns)."),
    beta_mhz: Optional[float] = typer.Option(None, "--beta-mhz", help="DRAG divisor β/2π (MHz)."),
    initial: str = typer.Option("01", "--initial", help="Initial basis state, e.g. 01."),
    params: Optional[Path] = PARAMS,
    dt: float = DT,
    out: Optional[Path] = OUT,
):
    """Populations of all basis states during a pulse"""
    with _exit_codes():
        system = _system_params(params)
        samples = _pulse(system, pulse, family, gate_time, dt, beta_mhz)
        populations = trace_populations(samples, system, initial)
        console.print(
            f"final qubit-2 |2> population: {populations.qubit2_leakage()[-1]:.3e}"
        )
        if out is not None:
            populations.to_csv(out)
            typer.echo(f"Populations written to {out}")


@app.command()
def constraints(
    pulse: Optional[Path] = typer.Option(None, "--pulse", help="Pulse file (CSV/JSON)."),
    family: PulseFamily = typer.Option(PulseFamily.SIDEBAND, "--family"),
    gate_time: Optional[float] = typer.Option(None, "--gate-time", help="Gate time (ns)."),
    beta_mhz: Optional[float] = typer.Option(None, "--beta-mhz", help="DRAG divisor β/2π (MHz)."),
    params: Optional[Path] = PARAMS,
    dt: float = DT,
    out: Optional[Path] = OUT,
):
    """Zeroth-order Magnus residuals and the first-order <01|Θ1|01> element"""
    with _exit_codes():
        system = _system_params(params)
        samples = _pulse(system, pulse, family, gate_time, dt, beta_mhz)
        residuals = fourier_constraints(samples, system)
        theta1 = magnus_theta1_diag01(samples, system)

        table = Table(title="Magnus constraints")
        table.add_column("residual")
        table.add_column("value", justify="right")
        for name, value in residuals.to_dict().items():
            table.add_row(name, f"{value:.3e}")
        table.add_row("<01|Θ1|01>", f"{theta1:.3e}")
        console.print(table)

        if out is not None:
            write_json(out, {"residuals": residuals.to_dict(), "theta1_diag01": theta1})
            typer.echo(f"Residuals written to {out}")


def main():
    app()


if __name__ == "__main__":
    main()
