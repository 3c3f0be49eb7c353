"""Command-line front end: ``ecmpower {predict,scale,energy,fit,report}``.

Exit codes: 0 success, 2 input error, 3 model-domain error.
"""
from __future__ import annotations

import argparse
import math
import sys
import warnings
from pathlib import Path

from . import fit as fitmod
from .ecm import predict, to_performance
from .errors import DomainError, EcmPowerError, InputError
from .files import dump_params, load_kernel, load_machine, load_measurements, load_params
from .machine import frequency_grid
from .power import energy_surface, race_to_idle_verdict, validate_params
from .report import (energy_table, prediction_csv, prediction_table, scaling_csv,
                     scaling_table, surface_csv)
from .scaling import ScalingModel


def _range(text: str):
    try:
        lo, hi = (int(x) for x in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo:hi, got {text!r}") from None
    if lo < 1 or hi < lo:
        raise argparse.ArgumentTypeError(f"bad core range {text!r}")
    return lo, hi


def _grid(text: str):
    try:
        lo, hi, step = (float(x) for x in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo:hi:step, got {text!r}") from None
    return lo, hi, step


def _float(text: str):
    return math.inf if text.lower() in ("inf", "infinity") else float(text)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--machine", default="sandy-bridge-ep",
                        help="machine file or bundled name (default: %(default)s)")
    common.add_argument("--out", default=".", help="directory for CSV output (default: .)")
    common.add_argument("--format", choices=("table", "csv", "both"), default="both",
                        help="table to stdout, CSV files, or both (default)")

    model = argparse.ArgumentParser(add_help=False)
    model.add_argument("--kernel", required=True, help="kernel file or bundled name")
    model.add_argument("--level", default="memory",
                       help="level holding the data set: L1, L2, L3 or memory")
    model.add_argument("--hypothesis", choices=("no_overlap", "single_ported", "full_overlap"),
                       help="overlap hypothesis for rates (default: kernel-specific)")

    p = argparse.ArgumentParser(prog="ecmpower", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("predict", parents=[common, model], help="single-core ECM timeline")
    sp.add_argument("--freq", type=float, help="clock in GHz (default: base frequency)")

    sp = sub.add_parser("scale", parents=[common, model], help="multicore scaling and t_s")
    sp.add_argument("--freq", type=float, help="clock in GHz (default: base frequency)")
    sp.add_argument("--cores", type=_range, help="core range lo:hi (default: 1:N)")

    for name, help_ in (("energy", "energy-to-solution surface"),
                        ("report", "predict + scale + energy into one directory")):
        sp = sub.add_parser(name, parents=[common, model], help=help_)
        sp.add_argument("--params", required=(name == "energy"),
                        help="power parameter file (W0, W1, W2) or bundled name")
        sp.add_argument("--freq", type=float, help="clock for predict/scale (report only)")
        sp.add_argument("--freq-grid", type=_grid, help="lo:hi:step in GHz (default: machine range, 0.1)")
        sp.add_argument("--cores", type=_range, help="core range lo:hi (default: 1:N)")
        sp.add_argument("--work", type=float, default=1.0, help="problem size in work items")
        sp.add_argument("--p0", type=_float, help="override single-core rate at base clock (items/s)")
        sp.add_argument("--pmax", type=_float, help="override saturated rate (items/s, or inf)")

    sp = sub.add_parser("fit", parents=[common], help="fit power parameters to measurements")
    sp.add_argument("--measurements", required=True, help="measurement CSV")
    sp.add_argument("--restrict-cores", type=int,
                    help="use only points with at most this many cores in the core-count fit")
    sp.add_argument("--name", help="name stored in the parameter file")
    return p


def _emit(args, text_table, files):
    """Print the table and/or write CSV files per ``--format``."""
    if args.format in ("table", "both"):
        sys.stdout.write(text_table)
    if args.format in ("csv", "both"):
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        for name, content in files:
            (out / name).write_text(content)
            print(f"wrote {out / name}")


def _setup(args):
    machine = load_machine(args.machine)
    kernel = load_kernel(args.kernel)
    if args.level not in machine.level_names:
        raise InputError(f"--level must be one of {', '.join(machine.level_names)}")
    return machine, kernel


def cmd_predict(args) -> int:
    machine, kernel = _setup(args)
    f = machine.base_frequency if args.freq is None else args.freq
    pred = predict(kernel, machine, args.level, f)
    perf = to_performance(pred, kernel, f, args.hypothesis)
    stem = f"{kernel.name}-{args.level}-{f:g}GHz"
    _emit(args, prediction_table(pred, kernel, perf), [(f"{stem}-timeline.csv", prediction_csv(pred))])
    return 0


def _scaling(args, machine, kernel, f):
    model = ScalingModel.from_ecm(kernel, machine, args.level, f, args.hypothesis)
    cores = args.cores or (1, machine.cores)
    if cores[1] > machine.cores:
        raise InputError(f"--cores upper bound exceeds the {machine.cores} cores of {machine.name}")
    return model, cores


def cmd_scale(args) -> int:
    machine, kernel = _setup(args)
    f = machine.base_frequency if args.freq is None else args.freq
    model, cores = _scaling(args, machine, kernel, f)
    stem = f"{kernel.name}-{args.level}-{f:g}GHz"
    _emit(args, scaling_table(model, kernel, machine, cores),
          [(f"{stem}-scaling.csv", scaling_csv(model, kernel, machine, cores))])
    return 0


def _energy(args, machine, kernel):
    params = load_params(args.params)
    base = ScalingModel.from_ecm(kernel, machine, args.level, machine.base_frequency,
                                 args.hypothesis)
    model = ScalingModel(base.P0 if args.p0 is None else args.p0,
                         base.Pmax if args.pmax is None else args.pmax,
                         machine.cores, machine.base_frequency)
    lo, hi = machine.frequency_range
    grid = frequency_grid(*(args.freq_grid or (lo, hi, 0.1)))
    cores = args.cores or (1, machine.cores)
    if cores[1] > machine.cores:
        raise InputError(f"--cores upper bound exceeds the {machine.cores} cores of {machine.name}")
    analysis = energy_surface(params, model, grid, range(cores[0], cores[1] + 1), args.work,
                              machine.frequency_range)
    f_top = max(grid)
    verdicts = [(t, race_to_idle_verdict(params, model, f_top, t))
                for t in range(cores[0], cores[1] + 1)]
    table = energy_table(analysis, params, model, kernel, verdicts)
    issues = validate_params(params)
    if issues:
        table += "".join(f"  warning: {w}\n" for w in issues)
    return analysis, table


def cmd_energy(args) -> int:
    machine, kernel = _setup(args)
    analysis, table = _energy(args, machine, kernel)
    _emit(args, table, [(f"{kernel.name}-{args.level}-energy.csv", surface_csv(analysis, kernel))])
    return 0


def cmd_fit(args) -> int:
    series = load_measurements(args.measurements)
    freq_sweep, core_sweep = fitmod.split_sweeps(series)
    if freq_sweep is None and core_sweep is None:
        raise DomainError("measurements contain neither a frequency sweep nor a core-count sweep")
    lines = [f"Power fit: {args.measurements}" + (f" ({series.code})" if series.code else "")]
    files = []
    quad = lin = None
    if freq_sweep is not None:
        quad = fitmod.fit_quadratic_in_frequency(freq_sweep)
        se = quad.result.stderr
        lines += [f"  W(f) at t = {quad.cores} cores: W0 = {quad.W0:.4f} +- {se[0]:.2g} W, "
                  f"w1 = {quad.w1:.4f} +- {se[1]:.2g} W/GHz, w2 = {quad.w2:.4f} +- {se[2]:.2g} W/GHz^2",
                  f"    residual RMS = {quad.result.residual_rms:.3g} W over "
                  f"{len(freq_sweep.points)} points"]
    if core_sweep is not None:
        lin = fitmod.fit_linear_in_cores(core_sweep, args.restrict_cores)
        used = "all points" if args.restrict_cores is None else f"t <= {args.restrict_cores}"
        lines += [f"  W(t) at f = {lin.frequency:g} GHz ({used}): W0 = {lin.W0:.4f} W, "
                  f"{lin.per_core:.4f} W per active core",
                  f"    residual RMS = {lin.result.residual_rms:.3g} W"]
    if quad is not None:
        params = fitmod.decompose_per_core(quad.W0, quad.w1, quad.w2, quad.cores)
        lines.append(f"  per-core parameters: W0 = {params.W0:.4f} W, W1 = {params.W1:.4f} W/GHz, "
                     f"W2 = {params.W2:.4f} W/GHz^2")
        name = args.name or series.code or Path(args.measurements).stem
        notes = f"fitted from {Path(args.measurements).name} at t = {quad.cores}"
        files.append((f"{name}-params.yml", dump_params(params, name, notes)))
    else:
        lines.append("  no frequency sweep: W1/W2 cannot be separated, no parameter file written")
    if quad is not None and lin is not None:
        note = fitmod.reconcile(quad.W0, lin.W0)
        lines.append("  " + (note or f"baseline estimates agree within "
                                     f"{fitmod.RECONCILE_THRESHOLD:.0%}"))
    _emit(args, "\n".join(lines) + "\n", files)
    return 0


def cmd_report(args) -> int:
    machine, kernel = _setup(args)
    f = machine.base_frequency if args.freq is None else args.freq
    pred = predict(kernel, machine, args.level, f)
    perf = to_performance(pred, kernel, f, args.hypothesis)
    model, cores = _scaling(args, machine, kernel, f)
    stem = f"{kernel.name}-{args.level}-{f:g}GHz"
    text = prediction_table(pred, kernel, perf) + "\n" + scaling_table(model, kernel, machine, cores)
    files = [(f"{stem}-timeline.csv", prediction_csv(pred)),
             (f"{stem}-scaling.csv", scaling_csv(model, kernel, machine, cores))]
    if args.params:
        analysis, table = _energy(args, machine, kernel)
        text += "\n" + table
        files.append((f"{kernel.name}-{args.level}-energy.csv", surface_csv(analysis, kernel)))
    files.append((f"{kernel.name}-{args.level}-report.txt", text))
    _emit(args, text, files)
    return 0


COMMANDS = {"predict": cmd_predict, "scale": cmd_scale, "energy": cmd_energy,
            "fit": cmd_fit, "report": cmd_report}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            code = COMMANDS[args.command](args)
        for w in caught:
            print(f"warning: {w.message}", file=sys.stderr)
        return code
    except EcmPowerError as e:
        print(f"ecmpower {args.command}: error: {e}", file=sys.stderr)
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
