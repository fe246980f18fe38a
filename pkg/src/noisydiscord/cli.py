"""Command line entry point.

Exit codes: 0 success, 2 configuration or validation error, 1 anything else.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .noisedyn import ConfigError
from .scenarios import commands, plotting
from .scenarios.config import parse_config

EXIT_OK, EXIT_INTERNAL, EXIT_CONFIG = 0, 1, 2

_FAMILIES = {"phialphaplus": "phi_alpha_plus", "psialphaplus": "psi_alpha_plus"}
_NOISE_CASES = {
    "transverse": "transverse",
    "transverseonly": "transverse",
    "collective": "collective",
}


def _norm(text: str) -> str:
    return text.replace("_", "").replace("-", "").lower()


def _choice(table):
    def parse(text):
        try:
            return table[_norm(text)]
        except KeyError:
            raise argparse.ArgumentTypeError(
                f"{text!r} is not one of {sorted(set(table.values()))}"
            ) from None

    return parse


def _emit_extras(args, csv_path, draw, columns, xlabel):
    if not (args.plot or args.gnuplot):
        return
    if csv_path is None:
        raise ConfigError("--plot/--gnuplot need an output path (--out)")
    if args.plot:
        fig = draw(plotting.figure_path(csv_path))
        print(f"figure: {fig}", file=sys.stderr)
    if args.gnuplot:
        script = plotting.figure_path(csv_path, ".gp")
        script.write_text(plotting.gnuplot_script(csv_path, columns, xlabel), encoding="utf-8")
        print(f"gnuplot script: {script}", file=sys.stderr)


def _evolve(args):
    cfg = parse_config(args.config)
    out = args.out or cfg.output_path
    traj, records = commands.run_trajectory(cfg)
    text = commands.evolve_csv(traj.times, records, out)
    if out is None:
        sys.stdout.write(text)
    _emit_extras(
        args,
        out,
        lambda p: plotting.plot_trajectory(traj.times, records, p, title=str(cfg.initial_state)),
        ["qd", "eof", "cc"],
        "omega t",
    )


def _steady(args):
    sys.stdout.write(commands.format_record(commands.cmd_steady(parse_config(args.config))))


def _table1(args):
    entries = commands.table1()
    sys.stdout.write(commands.format_table1(entries))
    commands.table1_csv(entries, args.out)
    if args.plot:
        fig = plotting.plot_table1(entries, plotting.figure_path(args.out))
        print(f"figure: {fig}", file=sys.stderr)


def _report_scan(args, result, title):
    text = commands.scan_csv(result, args.out)
    summary = sys.stdout if args.out else sys.stderr
    if args.out is None:
        sys.stdout.write(text)
    qd = result.column("qd")
    print(f"max qd = {qd.max():.6f} at {result.parameter} = {result.values[qd.argmax()]:.6f}", file=summary)
    for px, py in result.peaks:
        print(f"peak: {result.parameter} = {px:.4f}, qd = {py:.6f}", file=summary)
    _emit_extras(
        args,
        args.out,
        lambda p: plotting.plot_scan(result, p, title=title),
        ["qd", "eof"],
        result.parameter,
    )


def _scan_alpha(args):
    result = commands.cmd_scan_alpha(args.family, args.noise, args.points)
    _report_scan(args, result, f"{args.family}, {args.noise} noise")


def _scan_beta(args):
    _report_scan(args, commands.cmd_scan_beta(args.points), "beta states, collective noise")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="noisydiscord",
        description="Two qubits under global/local classical white noise.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def figure_flags(p):
        p.add_argument("--plot", action="store_true", help="also render a PNG next to the CSV")
        p.add_argument("--gnuplot", action="store_true", help="also write a gnuplot script")

    p = sub.add_parser("evolve", help="integrate the master equation, CSV of measures vs time")
    p.add_argument("--config", required=True, type=Path)
    p.add_argument("--out", type=Path, help="CSV path (default: config 'output', else stdout)")
    figure_flags(p)
    p.set_defaults(func=_evolve)

    p = sub.add_parser("steady", help="closed-form steady state measures")
    p.add_argument("--config", required=True, type=Path)
    p.set_defaults(func=_steady)

    p = sub.add_parser("table1", help="steady-state table against printed values")
    p.add_argument("--out", type=Path, default=Path("table1.csv"))
    p.add_argument("--plot", action="store_true")
    p.set_defaults(func=_table1)

    p = sub.add_parser("scan-alpha", help="steady measures over the Bell-like alpha family")
    p.add_argument("--family", type=_choice(_FAMILIES), default="psi_alpha_plus")
    p.add_argument("--noise", type=_choice(_NOISE_CASES), default="transverse")
    p.add_argument("--points", type=int, default=501)
    p.add_argument("--out", type=Path)
    figure_flags(p)
    p.set_defaults(func=_scan_alpha)

    p = sub.add_parser("scan-beta", help="collective-noise steady measures over beta states")
    p.add_argument("--points", type=int, default=101)
    p.add_argument("--out", type=Path)
    figure_flags(p)
    p.set_defaults(func=_scan_beta)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except ValueError as exc:  # ConfigError, DomainError, StructureError, StepSizeError
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {exc!r}", file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
