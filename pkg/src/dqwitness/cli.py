"""Command-line pipeline: bounds, witness, simulate, figure.

Subcommands
-----------
bounds    print the ceiling decomposition for the resolved parameters
witness   ingest a measurement CSV, run the stability gate, emit the report
simulate  write a trajectory CSV (zq_signal, dq_signal, open_trajectory)
figure    write figure data (bpp_curve plus the trajectory kinds)

Exit codes: 0 nothing excluded (or non-witness subcommand success), 1 error,
2 classically inexplicable, 3 witness positive but loophole open.  Parameter
precedence is defaults < config file < command-line flags; the config file is
flat `key = value` text with the keys omega_d_hz, omega_d_static_hz,
temperature_k, mixing_time_s, tau_c_s, larmor_hz.  Identical inputs produce
byte-identical reports and figure files.
"""

from __future__ import annotations

import argparse
import json
import sys
from math import pi
from pathlib import Path
from typing import TextIO

import numpy as np

from .algebra import build_two_spin_operators
from .bounds import (
    PhysicalParams,
    dipolar_energy,
    epsilon_th,
    eta_seq,
    witness,
)
from .dynamics import Trajectory, StateVector, build_su11_rep, hyperbolic_signal, propagate
from .errors import DqwitnessError, UnsupportedKind
from .measurement import (
    DEFAULT_CV_THRESHOLD,
    DEFAULT_DEV_THRESHOLD,
    GateResult,
    MeasurementSeries,
    ingest,
    stability_gate,
)
from .thermal import DensityMatrix, OpenTrajectory, default_thermal_model, evolve_master

TOOL_NAME = "dqwitness"
TOOL_VERSION = "0.1.0"

CONFIG_KEYS = (
    "omega_d_hz",
    "omega_d_static_hz",
    "temperature_k",
    "mixing_time_s",
    "tau_c_s",
    "larmor_hz",
)

DEFAULT_CONFIG = {
    "omega_d_hz": 10e3,
    "omega_d_static_hz": 5.0,
    "temperature_k": 310.0,
    "mixing_time_s": 5e-3,
    "tau_c_s": 1e-9,
    "larmor_hz": 400e6,
}

EXIT_BY_VERDICT = {
    "not_excluded": 0,
    "classically_inexplicable": 2,
    "loophole_open": 3,
}

FIGURE_KINDS = ("bpp_curve", "zq_signal", "dq_signal", "open_trajectory")
SIMULATE_KINDS = ("zq_signal", "dq_signal", "open_trajectory")

BPP_SAMPLES = 300
BPP_X_MAX = 5.0


def parse_config_file(path: str | Path) -> dict[str, float]:
    """Flat `key = value` file; '#' starts a comment, keys must be known."""
    values: dict[str, float] = {}
    for line_no, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ValueError(f"{path}:{line_no}: expected `key = value`")
        key = key.strip()
        if key not in CONFIG_KEYS:
            raise ValueError(f"{path}:{line_no}: unknown key {key!r}")
        try:
            values[key] = float(value.strip().strip("\"'"))
        except ValueError:
            raise ValueError(f"{path}:{line_no}: non-numeric value for {key!r}") from None
    return values


def resolve_params(args: argparse.Namespace) -> PhysicalParams:
    """Defaults, overridden by config file, overridden by explicit flags."""
    settings = dict(DEFAULT_CONFIG)
    if getattr(args, "config", None):
        settings.update(parse_config_file(args.config))
    for key in CONFIG_KEYS:
        flag_value = getattr(args, key, None)
        if flag_value is not None:
            settings[key] = flag_value
    return PhysicalParams.from_hz(
        omega_d_hz=settings["omega_d_hz"],
        omega_d_static_hz=settings["omega_d_static_hz"],
        temperature_k=settings["temperature_k"],
        mixing_time_s=settings["mixing_time_s"],
        tau_c_s=settings["tau_c_s"],
        larmor_hz=settings["larmor_hz"],
    )


def _params_echo(params: PhysicalParams) -> dict:
    return {
        "omega_d_rad_s": params.omega_d,
        "omega_d_hz": params.omega_d / (2 * pi),
        "omega_d_static_rad_s": params.omega_d_static,
        "omega_d_static_hz": params.omega_d_static / (2 * pi),
        "temperature_k": params.temperature,
        "mixing_time_s": params.mixing_time,
        "tau_c_s": params.tau_c,
        "larmor_rad_s": params.omega_0,
        "larmor_hz": params.omega_0 / (2 * pi),
    }


def _sig4(x: float) -> str:
    return f"{x:.4g}"


def _dump_json(doc: dict, destination: str | None) -> None:
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if destination:
        Path(destination).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


# -- report assembly ---------------------------------------------------------

def build_report(
    params: PhysicalParams,
    series: MeasurementSeries,
    gate: GateResult,
) -> tuple[dict, int]:
    """Witness report document and its exit code.

    The measured fraction is the series maximum (the transient burst peak),
    taken directly from the f_dq column.
    """
    peak_index = int(np.argmax(series.f_dq))
    f_dq_peak = float(series.f_dq[peak_index])
    report = witness(f_dq_peak, params, gate.status)
    doc = {
        "tool": {"name": TOOL_NAME, "version": TOOL_VERSION},
        "parameters": _params_echo(params),
        "gate": {
            "status": gate.status,
            "t2_cv": gate.t2_cv,
            "max_rel_deviation": gate.max_rel_deviation,
            "mt_cv": gate.mt_cv,
            "cv_threshold": gate.cv_threshold,
            "dev_threshold": gate.dev_threshold,
            "mt_gate_applied": gate.mt_cv is not None,
        },
        "witness": {
            "epsilon_th": report.epsilon_th,
            "eta_seq": report.eta_seq,
            "f_class_max": report.f_class_max,
            "f_dq_measured": report.f_dq_measured,
            "w_th": report.w_th,
            "gate_status": report.gate_status,
            "verdict": report.verdict,
            "certifiable": gate.status == "stable",
        },
        "series": {
            "rows": len(series),
            "skipped": list(series.skipped),
            "f_dq_source": "f_dq",
            "peak_time_s": float(series.times[peak_index]),
        },
        "summary": (
            f"w_th = {_sig4(report.w_th)} "
            f"(f_dq {_sig4(report.f_dq_measured)} vs classical max "
            f"{_sig4(report.f_class_max)}, gate {gate.status}): {report.verdict}"
        ),
    }
    return doc, EXIT_BY_VERDICT[report.verdict]


def run_witness(
    params: PhysicalParams,
    series: MeasurementSeries,
    cv_threshold: float = DEFAULT_CV_THRESHOLD,
    dev_threshold: float = DEFAULT_DEV_THRESHOLD,
    destination: str | None = None,
) -> tuple[dict, int]:
    """Gate the series, evaluate the witness, write the report document."""
    gate = stability_gate(series, cv_threshold=cv_threshold, dev_threshold=dev_threshold)
    doc, code = build_report(params, series, gate)
    _dump_json(doc, destination)
    return doc, code


# -- trajectory and figure emission ------------------------------------------

def _open_destination(destination) -> tuple[TextIO, bool]:
    if destination is None:
        return sys.stdout, False
    if hasattr(destination, "write"):
        return destination, False
    return open(destination, "w", encoding="utf-8", newline=""), True


def _write_columns(stream: TextIO, header: list[str], columns: list[np.ndarray]) -> None:
    stream.write(",".join(header) + "\n")
    for row in zip(*columns):
        stream.write(",".join(repr(float(v)) for v in row) + "\n")


def write_trajectory_csv(traj: Trajectory, destination) -> None:
    """Columns: time_s, then one column per observable."""
    stream, owned = _open_destination(destination)
    try:
        keys = list(traj.expectations)
        columns = [traj.times] + [np.real(traj.expectations[k]) for k in keys]
        _write_columns(stream, ["time_s"] + keys, columns)
    finally:
        if owned:
            stream.close()


def write_open_trajectory_csv(traj: OpenTrajectory, destination) -> None:
    """Columns: time_s, relative_entropy, dq_amplitude, pair_correlation."""
    stream, owned = _open_destination(destination)
    try:
        _write_columns(
            stream,
            ["time_s", "relative_entropy", "dq_amplitude", "pair_correlation"],
            [traj.times, traj.relative_entropies, traj.dq_amplitudes, traj.pair_correlations],
        )
    finally:
        if owned:
            stream.close()


def zq_exchange_trajectory(
    j_coupling: float = 2 * pi * 10.0,
    n_periods: float = 10.0,
    samples: int = 1001,
) -> Trajectory:
    """Flip-flop exchange <S0(t)> from the up-down state under J(S+ + S-).

    The observable oscillates as cos(2Jt)/2, so one period is pi/J seconds.
    """
    ops = build_two_spin_operators()
    h = j_coupling * (ops["S+"].entries + ops["S-"].entries)
    if j_coupling != 0:
        t_max = n_periods * pi / abs(j_coupling)
    else:
        t_max = 1.0
    times = np.linspace(0.0, t_max, samples)
    psi0 = StateVector.basis_state(4, 1)  # |up down>
    return propagate(h, psi0, times, [ops["S0"]])


def dq_pair_trajectory(
    k: float = 0.5,
    g: float = 1.0,
    t_max: float = 2.0,
    samples: int = 201,
) -> Trajectory:
    """Vacuum pair signal on the truncated ladder, auto-escalated."""
    rep = build_su11_rep(k, 64)
    times = np.linspace(0.0, t_max, samples)
    return hyperbolic_signal(rep, g, times)


def open_system_trajectory(
    params: PhysicalParams,
    base_rate: float = 1.0,
    t_max: float = 5.0,
    samples: int = 101,
) -> OpenTrajectory:
    """Maximally mixed two-spin state relaxing under the default bath model."""
    model = default_thermal_model(
        omega0=params.omega_0,
        omega_d=params.omega_d,
        temperature=params.temperature,
        base_rate=base_rate,
    )
    times = np.linspace(0.0, t_max, samples)
    return evolve_master(model, DensityMatrix.maximally_mixed(4), times)


def bpp_curve() -> tuple[np.ndarray, np.ndarray]:
    """Normalized spectral-density profile on a 300-point grid of spacing 1/60.

    The grid starts at 0 and steps by 5/300 so that x = 1 (the peak, value
    exactly 1) is a grid point; the open right end just misses x = 5.
    """
    x = np.arange(BPP_SAMPLES) * BPP_X_MAX / BPP_SAMPLES
    return x, 2.0 * x / (1.0 + x * x)


def emit_figure_data(kind: str, params: PhysicalParams, destination, **options) -> None:
    """Write deterministic CSV data for one figure kind.

    Kinds: bpp_curve (x, normalized density), zq_signal and dq_signal
    (closed-system trajectories), open_trajectory (bath relaxation record).
    Keyword options are forwarded to the corresponding builder.
    """
    if kind == "bpp_curve":
        x, y = bpp_curve()
        stream, owned = _open_destination(destination)
        try:
            _write_columns(stream, ["x", "j_normalized"], [x, y])
        finally:
            if owned:
                stream.close()
    elif kind == "zq_signal":
        write_trajectory_csv(zq_exchange_trajectory(**options), destination)
    elif kind == "dq_signal":
        write_trajectory_csv(dq_pair_trajectory(**options), destination)
    elif kind == "open_trajectory":
        write_open_trajectory_csv(open_system_trajectory(params, **options), destination)
    else:
        raise UnsupportedKind(f"unknown figure kind {kind!r}; expected one of {FIGURE_KINDS}")


# -- argument parsing ---------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage problems are exit code 1, not 2
        raise DqwitnessError(f"argument error: {message}")


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="flat key = value parameter file")
    parser.add_argument("--output", help="write output to this path instead of stdout")
    parser.add_argument("--omega-d-hz", dest="omega_d_hz", type=float)
    parser.add_argument("--omega-d-static-hz", dest="omega_d_static_hz", type=float)
    parser.add_argument("--temperature-k", dest="temperature_k", type=float)
    parser.add_argument("--mixing-time-s", dest="mixing_time_s", type=float)
    parser.add_argument("--tau-c-s", dest="tau_c_s", type=float)
    parser.add_argument("--larmor-hz", dest="larmor_hz", type=float)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog=TOOL_NAME, description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_bounds = sub.add_parser("bounds", help="print the classical ceiling decomposition")
    _add_common_flags(p_bounds)

    p_witness = sub.add_parser("witness", help="evaluate the witness on a measurement CSV")
    _add_common_flags(p_witness)
    p_witness.add_argument("--input", required=True, help="measurement CSV path")
    p_witness.add_argument(
        "--cv-threshold", dest="cv_threshold", type=float, default=DEFAULT_CV_THRESHOLD
    )
    p_witness.add_argument(
        "--dev-threshold", dest="dev_threshold", type=float, default=DEFAULT_DEV_THRESHOLD
    )

    p_sim = sub.add_parser("simulate", help="write a trajectory CSV")
    _add_common_flags(p_sim)
    p_sim.add_argument("--kind", required=True, help=f"one of {SIMULATE_KINDS}")

    p_fig = sub.add_parser("figure", help="write figure data CSV")
    _add_common_flags(p_fig)
    p_fig.add_argument("--kind", required=True, help=f"one of {FIGURE_KINDS}")
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except DqwitnessError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help
        return 0 if exc.code in (0, None) else 1
    try:
        if args.command == "bounds":
            params = resolve_params(args)
            doc = {
                "tool": {"name": TOOL_NAME, "version": TOOL_VERSION},
                "parameters": _params_echo(params),
                "bounds": {
                    "epsilon_th": epsilon_th(params),
                    "eta_seq": eta_seq(params),
                    "f_class_max": epsilon_th(params) + eta_seq(params),
                    "hbar_omega_d_joule": dipolar_energy(params),
                },
            }
            _dump_json(doc, args.output)
            return 0
        if args.command == "witness":
            params = resolve_params(args)
            series = ingest(args.input)
            _, code = run_witness(
                params,
                series,
                cv_threshold=args.cv_threshold,
                dev_threshold=args.dev_threshold,
                destination=args.output,
            )
            return code
        if args.command == "simulate":
            if args.kind not in SIMULATE_KINDS:
                raise UnsupportedKind(
                    f"unknown simulation kind {args.kind!r}; expected one of {SIMULATE_KINDS}"
                )
            emit_figure_data(args.kind, resolve_params(args), args.output)
            return 0
        if args.command == "figure":
            emit_figure_data(args.kind, resolve_params(args), args.output)
            return 0
        raise UnsupportedKind(f"unknown command {args.command!r}")
    except DqwitnessError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
