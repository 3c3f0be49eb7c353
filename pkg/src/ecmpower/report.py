"""Human-readable tables and plot-ready CSV text for the CLI."""
from __future__ import annotations

import math
import re

from .ecm import HYPOTHESES, EcmPrediction, round_half_up
from .kernel import KernelDescription
from .scaling import roofline, saturation_point, scaling_curve

_TITLES = {"no_overlap": "no overlap", "single_ported": "single-ported",
           "full_overlap": "full overlap"}


def num(x) -> str:
    """Stable CSV number formatting (10 significant digits)."""
    if x is None:
        return ""
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if math.isnan(x):
        return "nan"
    s = format(x, ".10g")
    return "0" if s == "-0" else s


def unit_slug(label: str) -> str:
    """Column-safe form of a rate label, e.g. 'MLUP/s' -> 'MLUP_per_s'."""
    return re.sub(r"[^A-Za-z0-9]+", "_", label.replace("/", "_per_")).strip("_")


def csv_text(header, rows) -> str:
    lines = [",".join(header)]
    lines += [",".join(v if isinstance(v, str) else num(v) for v in row) for row in rows]
    return "\n".join(lines) + "\n"


def prediction_csv(pred: EcmPrediction) -> str:
    rows = []
    for i, c in enumerate(pred.contributions):
        rows.append([c.label, c.cycles] + [pred.starts[h][i] for h in HYPOTHESES])
    return csv_text(["contribution", "cycles", "start_no_overlap", "start_single_ported",
                     "start_full"], rows)


def prediction_table(pred: EcmPrediction, kernel: KernelDescription, perf=None) -> str:
    out = [f"ECM prediction: {pred.kernel} on {pred.machine}, data in {pred.dataset_level}, "
           f"{pred.frequency:g} GHz, unit of work = {pred.unit_of_work} iterations"]
    width = max(len(c.label) for c in pred.contributions)
    out.append(f"  {'contribution':<{max(width, 12)}}  {'cycles':>9}  "
               + "  ".join(f"{'start ' + _TITLES[h]:>21}" for h in HYPOTHESES))
    for i, c in enumerate(pred.contributions):
        res = "{" + ",".join(sorted(c.resources)) + "}"
        starts = "  ".join(f"{pred.starts[h][i]:>18.1f} cy" for h in HYPOTHESES)
        out.append(f"  {c.label:<{max(width, 12)}}  {c.cycles:>6.1f} cy  {starts}   {res}")
    out.append("  totals (rounded half up):")
    for h in HYPOTHESES:
        mark = "  <- model default" if h == pred.default_hypothesis else ""
        out.append(f"    {_TITLES[h]:<14} {round_half_up(pred.total(h)):>6d} cy "
                   f"({pred.total(h):.2f} cy){mark}")
    if pred.core_overlappable:
        out.append(f"  data delays hidden behind in-core execution: "
                   f"{round_half_up(pred.hidden_data_cycles)} cy")
    if kernel.core_cycles_provenance:
        out.append(f"  core cycles supplied: {kernel.core_cycles_provenance}")
    if perf is not None:
        out.append(f"  performance ({_TITLES[pred.default_hypothesis]}): {perf}")
    return "\n".join(out) + "\n"


def _roofline_rate(kernel, machine, frequency, t):
    if not kernel.flops_per_scalar_iteration > 0:
        return None
    return roofline(kernel, machine, frequency, t).rate


def scaling_csv(model, kernel, machine, cores) -> str:
    metric = kernel.work_metric
    slug = unit_slug(metric.label)
    rows = []
    for t, p in scaling_curve(model):
        if t < cores[0] or t > cores[1]:
            continue
        bound = _roofline_rate(kernel, machine, model.frequency, t)
        rows.append([t, metric.to_label(p), None if bound is None else metric.to_label(bound)])
    return csv_text(["t_cores", f"P_pred_{slug}", f"P_roofline_{slug}"], rows)


def scaling_table(model, kernel, machine, cores) -> str:
    metric = kernel.work_metric
    sp = saturation_point(model)
    out = [f"Multicore scaling: {kernel.name} on {machine.name} at {model.frequency:g} GHz "
           f"(dnu = {model.delta_nu:+.3f})",
           f"  single-core P0 = {metric.to_label(model.P0 * (1 + model.delta_nu)):.4g} "
           f"{metric.label}, saturated Pmax = {metric.to_label(model.Pmax):.4g} {metric.label}"]
    if math.isinf(sp.continuous):
        out.append(f"  no saturation: scales to all {machine.cores} cores")
    else:
        out.append(f"  saturation point t_s = {sp.continuous:.2f} -> {sp.cores} cores")
    out.append(f"  {'t':>3}  {'P pred':>12}  {'roofline':>12}   [{metric.label}]")
    for t, p in scaling_curve(model):
        if t < cores[0] or t > cores[1]:
            continue
        bound = _roofline_rate(kernel, machine, model.frequency, t)
        b = "n/a" if bound is None else f"{metric.to_label(bound):.4g}"
        out.append(f"  {t:>3}  {metric.to_label(p):>12.4g}  {b:>12}")
    return "\n".join(out) + "\n"


def surface_csv(analysis, kernel) -> str:
    rows = [[f, t, w, kernel.work_metric.to_label(p), e, c]
            for f, t, w, p, e, c in analysis.rows()]
    return csv_text(["f_GHz", "t", "W_watts", "P_rate", "E_joules", "C_joule_seconds"], rows)


def energy_table(analysis, params, scaling, kernel, verdicts) -> str:
    metric = kernel.work_metric
    f_best, t_best = analysis.argmin
    out = [f"Energy to solution: {kernel.name}, W0 = {params.W0:g} W, W1 = {params.W1:g} W/GHz, "
           f"W2 = {params.W2:g} W/GHz^2 (per core)",
           f"  P0 = {metric.to_label(scaling.P0):.4g} {metric.label} at {scaling.base_frequency:g} GHz, "
           f"Pmax = {metric.to_label(scaling.Pmax):.4g} {metric.label}",
           f"  minimum energy: {analysis.E_min:.4g} J at f = {f_best:g} GHz, t = {t_best} cores "
           f"(cost C = {analysis.cost_C:.4g} J*s)",
           "  saturation point per clock:"]
    for f, ts in analysis.t_s.items():
        if math.isinf(ts):
            out.append(f"    {f:5.2f} GHz: none")
        else:
            out.append(f"    {f:5.2f} GHz: t_s = {ts:.2f} cores")
    out.append("  energy-optimal clock per core count (unsaturated regime):")
    for t, fo in analysis.f_opt.items():
        flag = f" (clamped, unconstrained {fo.unclamped:.4g} GHz)" if fo.clamped else ""
        out.append(f"    t = {t}: f_opt = {fo.value:.3g} GHz{flag}")
    out.append("  race-to-idle verdict:")
    for t, v in verdicts:
        out.append(f"    t = {t}: {v}")
    out.append("  note: package power only; DRAM adds roughly 2-9 W per socket. "
               "Extrapolating W to f = 0 is rough.")
    return "\n".join(out) + "\n"
