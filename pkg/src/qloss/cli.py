"""Command-line front end: run trajectories, report the measure, self-validate.

Subcommands:

* ``run``      -- sample a trajectory, write the CSV time series, the JSON
                  report and a summary figure.
* ``measure``  -- print the JSON non-Markovianity report only.
* ``validate`` -- run the oracle cross-checks and print a per-check table.

Rate functions are given as ``const:<a>``, ``sin:<a>,<w>`` (a*sin(w*t)),
``dcos:<a>,<b>,<w>`` (a*exp(-b*t)*cos(w*t)) or ``table:<path>`` (two-column
CSV of (t, gamma) samples).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from .channels import (
    ChannelModel,
    RateFunction,
    StepSizeError,
    amplitude_damping_channel,
    dephasing_channel,
    evolve_bell,
    integrate_bell_grid,
    pauli_channel,
)
from .states import StateValidationError
from .witness import (
    DEFAULT_DERIV_THRESHOLD,
    NonMarkovReport,
    Trajectory,
    analytic_verdict,
    default_horizon,
    measure,
    sample_trajectory,
)

CSV_HEADER = "t,L_Q,S_e,I_c,I_mutual,N_Q,dLQ_dt"
_RATE_KINDS = ("const", "sin", "dcos", "table")


class CLIError(Exception):
    """Unusable configuration; reported on stderr with a nonzero exit."""


def parse_rate(text: str) -> RateFunction:
    """Parse one rate specification string."""
    kind, sep, rest = text.partition(":")
    if not sep or kind not in _RATE_KINDS:
        raise CLIError(
            f"unknown rate specification {text!r}; expected const:<a>, sin:<a>,<w>, "
            "dcos:<a>,<b>,<w> or table:<path>"
        )
    if kind == "table":
        return _load_rate_table(rest)
    try:
        params = [float(p) for p in rest.split(",")] if rest else []
    except ValueError:
        raise CLIError(f"non-numeric parameter in rate specification {text!r}")
    expected = {"const": 1, "sin": 2, "dcos": 3}[kind]
    if len(params) != expected:
        raise CLIError(f"rate kind {kind!r} takes {expected} parameter(s), got {len(params)}")
    if kind == "const":
        return RateFunction.constant(params[0])
    if kind == "sin":
        return RateFunction.sinusoid(params[0], params[1])
    return RateFunction.damped_cosine(params[0], params[1], params[2])


def _load_rate_table(path_text: str) -> RateFunction:
    path = Path(path_text)
    try:
        raw = path.read_text()
    except OSError as exc:
        raise CLIError(f"cannot read rate table {path_text!r}: {exc}")
    times, values = [], []
    for line_no, line in enumerate(raw.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise CLIError(f"{path_text}:{line_no}: expected two comma-separated columns")
        try:
            times.append(float(parts[0]))
            values.append(float(parts[1]))
        except ValueError:
            if line_no == 1:
                continue  # header row
            raise CLIError(f"{path_text}:{line_no}: non-numeric entry")
    try:
        return RateFunction.tabulated(times, values)
    except ValueError as exc:
        raise CLIError(f"bad rate table {path_text!r}: {exc}")


def _split_rate_specs(text: str) -> list[str]:
    """Split a comma-joined list of rate specs, keeping numeric parameters.

    ``const:1,const:1,dcos:2,0.1,2`` splits into three specs: a new spec
    starts at every token carrying a known kind prefix.
    """
    specs: list[str] = []
    for token in text.split(","):
        head = token.partition(":")[0]
        if head in _RATE_KINDS:
            specs.append(token)
        elif specs:
            specs[-1] += "," + token
        else:
            raise CLIError(f"rate list {text!r} must start with a rate kind")
    return specs


def _build_channel(args) -> tuple[ChannelModel, str, dict]:
    model = args.model
    if model == "dephasing":
        if not args.rate:
            raise CLIError("model 'dephasing' needs --rate")
        channel = dephasing_channel(parse_rate(args.rate))
        return channel, model, {"rate": args.rate}
    if model == "amplitude-damping":
        if args.width is None or args.gamma0 is None:
            raise CLIError("model 'amplitude-damping' needs --lambda and --gamma0")
        try:
            channel = amplitude_damping_channel(args.width, args.gamma0)
        except ValueError as exc:
            raise CLIError(str(exc))
        return channel, model, {"lambda": args.width, "gamma0": args.gamma0}
    if model == "pauli":
        if not args.rates:
            raise CLIError("model 'pauli' needs --rates with three rate specifications")
        specs = _split_rate_specs(args.rates)
        if len(specs) != 3:
            raise CLIError(f"model 'pauli' needs exactly three rates, got {len(specs)}")
        channel = pauli_channel(*(parse_rate(s) for s in specs))
        return channel, model, {"rates": specs}
    raise CLIError(f"unknown model {model!r}")


def _resolve_run_params(args, channel) -> tuple[float, int, float]:
    t_max = args.t_max if args.t_max is not None else default_horizon(channel)
    if t_max <= 0:
        raise CLIError(f"--t-max must be positive, got {t_max!r}")
    if args.steps < 3:
        raise CLIError(f"--steps must be at least 3, got {args.steps}")
    if args.threshold <= 0:
        raise CLIError(f"--threshold must be positive, got {args.threshold!r}")
    return float(t_max), int(args.steps), float(args.threshold)


def _sample_or_explain(channel, model: str, t_max: float, steps: int) -> Trajectory:
    try:
        return sample_trajectory(channel, t_max, steps)
    except StateValidationError as exc:
        verdict = analytic_verdict(channel, t_max)
        raise CLIError(
            f"{exc}\nthe configured {model} map is not completely positive over the "
            f"sampled window, so no loss trajectory exists; analytic verdict: {verdict}"
        )


def _csv_lines(traj: Trajectory):
    yield CSV_HEADER
    for snap, rate in zip(traj.snapshots, traj.loss_rate):
        fields = (
            snap.t,
            snap.quantum_loss,
            snap.s_exchange,
            snap.coherent_info,
            snap.mutual_info,
            snap.quantum_noise,
            rate,
        )
        yield ",".join(f"{value:.12g}" for value in fields)


def report_to_dict(
    report: NonMarkovReport, model: str, params: dict, t_max: float, steps: int
) -> dict:
    return {
        "model": model,
        "params": params,
        "t_max": t_max,
        "steps": steps,
        "measure": report.measure,
        "magnitude": report.magnitude,
        "markovian": report.markovian,
        "analytic_verdict": report.analytic_verdict,
        "intervals": [
            {"start": iv.start, "end": iv.end, "drop": iv.drop} for iv in report.intervals
        ],
    }


def _write_text(path: Path, text: str, what: str) -> None:
    try:
        path.write_text(text)
    except OSError as exc:
        raise CLIError(f"cannot write {what} to {path}: {exc}")


def cmd_run(args) -> int:
    channel, model, params = _build_channel(args)
    t_max, steps, threshold = _resolve_run_params(args, channel)
    traj = _sample_or_explain(channel, model, t_max, steps)
    report = measure(traj, threshold)
    payload = report_to_dict(report, model, params, t_max, steps)

    csv_text = "\n".join(_csv_lines(traj)) + "\n"
    out_path = Path(args.out) if args.out else None
    if out_path is None:
        sys.stdout.write(csv_text)
    else:
        _write_text(out_path, csv_text, "trajectory CSV")
        print(f"wrote trajectory CSV to {out_path}", file=sys.stderr)

    report_path = Path(args.report) if args.report else (
        out_path.with_suffix(".json") if out_path else None
    )
    if report_path is not None:
        _write_text(report_path, json.dumps(payload, indent=2) + "\n", "JSON report")
        print(f"wrote report to {report_path}", file=sys.stderr)

    fig_path = Path(args.fig) if args.fig else (
        out_path.with_suffix(".png") if out_path else None
    )
    if fig_path is not None and not args.no_figures:
        from .plotting import render_trajectory_figure

        try:
            render_trajectory_figure(traj, report, fig_path)
        except OSError as exc:
            raise CLIError(f"cannot write figure to {fig_path}: {exc}")
        print(f"wrote figure to {fig_path}", file=sys.stderr)
    return 0


def cmd_measure(args) -> int:
    channel, model, params = _build_channel(args)
    t_max, steps, threshold = _resolve_run_params(args, channel)
    traj = _sample_or_explain(channel, model, t_max, steps)
    report = measure(traj, threshold)
    payload = report_to_dict(report, model, params, t_max, steps)
    print(json.dumps(payload, indent=2))
    return 0


def _verdict_configs():
    c = RateFunction.constant
    return [
        ("dephasing constant", dephasing_channel(c(1.0)), 5.0, 1001),
        ("dephasing sinusoid 2 periods", dephasing_channel(RateFunction.sinusoid(1.0, 1.0)),
         4 * math.pi, 2001),
        ("dephasing sinusoid 1 period", dephasing_channel(RateFunction.sinusoid(1.0, 1.0)),
         2 * math.pi, 1001),
        ("amplitude damping weak", amplitude_damping_channel(4.0, 1.0), 10.0, 1001),
        ("amplitude damping strong", amplitude_damping_channel(0.2, 2.0), 30.0, 2001),
        ("amplitude damping critical", amplitude_damping_channel(2.0, 1.0), 10.0, 1001),
        ("pauli constant symmetric", pauli_channel(c(1.0), c(1.0), c(1.0)), 5.0, 1001),
        ("pauli constant mixed", pauli_channel(c(1.0), c(0.5), c(0.25)), 5.0, 1001),
        ("pauli oscillating axis",
         pauli_channel(c(1.0), c(1.0), RateFunction.damped_cosine(2.0, 0.1, 2.0)), 10.0, 2001),
    ]


def _oracle_configs():
    c = RateFunction.constant
    return [
        ("dephasing", dephasing_channel(c(1.0)), (0.5, 1.0)),
        ("amplitude damping", amplitude_damping_channel(4.0, 1.0), (1.0, 2.0)),
        ("pauli", pauli_channel(c(1.0), c(0.7), c(0.4)), (0.5, 1.0)),
    ]


def cmd_validate(args) -> int:
    step = args.step
    checks: list[tuple[str, float, float]] = []

    for name, channel, times in _oracle_configs():
        try:
            integrated = integrate_bell_grid(channel, times, step)
            deviation = max(
                float(np.abs(rho - evolve_bell(channel, t)).max())
                for rho, t in zip(integrated, times)
            )
        except StepSizeError:
            deviation = float("inf")
        checks.append((f"{name} closed form vs integrator", deviation, 1e-6))

    trajectories = [
        sample_trajectory(dephasing_channel(RateFunction.sinusoid(1.0, 1.0)), 2 * math.pi, 801),
        sample_trajectory(amplitude_damping_channel(0.2, 2.0), 15.0, 801),
        sample_trajectory(
            pauli_channel(
                RateFunction.constant(1.0),
                RateFunction.constant(1.0),
                RateFunction.constant(1.0),
            ),
            5.0,
            801,
        ),
    ]
    duality = 0.0
    conservation = 0.0
    loss_bound = 0.0
    info_bound = 0.0
    for traj in trajectories:
        residual = np.abs(traj.mutual_info_rate + traj.loss_rate)[1:-1]
        scale = np.maximum(1.0, np.abs(traj.loss_rate)[1:-1])
        duality = max(duality, float((residual / scale).max()))
        conservation = max(conservation, float(np.abs(traj.mutual_info + traj.loss - 2.0).max()))
        for snap in traj.snapshots:
            cap = 2.0 * min(1.0, snap.s_exchange)
            loss_bound = max(loss_bound, -snap.quantum_loss, snap.quantum_loss - cap)
            info_cap = 2.0 * min(snap.s_system, snap.s_ancilla)
            info_bound = max(info_bound, -snap.mutual_info, snap.mutual_info - info_cap)
    checks.append(("loss-rate duality dI/dt = -dL/dt", duality, 1e-7))
    checks.append(("correlation conservation I + L = 2", conservation, 1e-9))
    checks.append(("loss bound 0 <= L <= 2 min(S0, Se)", loss_bound, 1e-9))
    checks.append(("mutual information bound", info_bound, 1e-9))

    disagreements = 0
    for name, channel, t_max, n_points in _verdict_configs():
        traj = sample_trajectory(channel, t_max, n_points)
        report = measure(traj)
        if report.numeric_verdict != report.analytic_verdict:
            disagreements += 1
            print(
                f"verdict mismatch for {name}: numeric {report.numeric_verdict}, "
                f"analytic {report.analytic_verdict}",
                file=sys.stderr,
            )
    checks.append(("analytic vs numeric verdicts (9 configs)", float(disagreements), 0.5))

    all_ok = True
    width = max(len(name) for name, _, _ in checks)
    print(f"{'check':<{width}}  {'max deviation':>14}  {'tolerance':>10}  status")
    for name, deviation, tol in checks:
        ok = deviation <= tol
        all_ok &= ok
        print(f"{name:<{width}}  {deviation:>14.3e}  {tol:>10.1e}  {'PASS' if ok else 'FAIL'}")
    return 0 if all_ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qloss",
        description="Detect and quantify non-Markovianity of qubit channels via quantum loss.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_model_options(p):
        p.add_argument("--model", required=True,
                       choices=["dephasing", "amplitude-damping", "pauli"])
        p.add_argument("--rate", help="rate specification for the dephasing model")
        p.add_argument("--rates", help="three comma-joined rate specifications for the pauli model")
        p.add_argument("--lambda", dest="width", type=float,
                       help="spectral width of the Lorentzian bath")
        p.add_argument("--gamma0", type=float, help="coupling constant of the Lorentzian bath")
        p.add_argument("--t-max", type=float, default=None,
                       help="sampling horizon (default: 20 / dominant rate)")
        p.add_argument("--steps", type=int, default=2001, help="number of grid points")
        p.add_argument("--threshold", type=float, default=DEFAULT_DERIV_THRESHOLD,
                       help="loss-rate threshold separating decrease from roundoff")

    run = sub.add_parser("run", help="sample a trajectory and write CSV/JSON/figure artifacts")
    add_model_options(run)
    run.add_argument("--out", help="trajectory CSV path (default: stdout)")
    run.add_argument("--report", help="JSON report path (default: CSV path with .json)")
    run.add_argument("--fig", help="figure path (default: CSV path with .png)")
    run.add_argument("--no-figures", action="store_true", help="skip figure rendering")
    run.set_defaults(func=cmd_run)

    meas = sub.add_parser("measure", help="print the JSON non-Markovianity report")
    add_model_options(meas)
    meas.set_defaults(func=cmd_measure)

    val = sub.add_parser("validate", help="run the oracle cross-checks")
    val.add_argument("--step", type=float, default=1e-3,
                     help="integrator step for the closed-form checks")
    val.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CLIError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (StateValidationError, StepSizeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
