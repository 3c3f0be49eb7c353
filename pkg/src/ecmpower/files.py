"""Readers and writers for machine, kernel, power-parameter and measurement files.

Machine, kernel and parameter files are single YAML documents with a fixed
set of keys; unknown keys are rejected with the file and line that holds
them.  Names without a path separator resolve to the bundled files first.
"""
from __future__ import annotations

import csv
import io
import os
from importlib import resources
from pathlib import Path

import yaml

from .errors import InputError
from .kernel import STREAM_KINDS, KernelDescription, StreamSpec, WorkMetric
from .machine import CacheLevel, MachineDescription, normalize_table, validate_machine


class _Map(dict):
    line = None
    key_lines: dict = {}


class _Loader(yaml.SafeLoader):
    pass


def _construct_map(loader, node):
    loader.flatten_mapping(node)
    m = _Map()
    m.line = node.start_mark.line + 1
    m.key_lines = {}
    for key_node, value_node in node.value:
        key = loader.construct_object(key_node, deep=True)
        if key in m:
            raise yaml.constructor.ConstructorError(
                None, None, f"duplicate key {key!r}", key_node.start_mark)
        m[key] = loader.construct_object(value_node, deep=True)
        m.key_lines[key] = key_node.start_mark.line + 1
    return m


_Loader.add_constructor(yaml.resolver.BaseResolver.DEFAULT_MAPPING_TAG, _construct_map)


def bundled_dir(kind: str) -> Path:
    return Path(str(resources.files("ecmpower") / kind))


def bundled_names(kind: str) -> list:
    return sorted(p.stem for p in bundled_dir(kind).glob("*.yml"))


def resolve(name: str, kind: str) -> Path:
    """Map a bundled name (``sandy-bridge-ep``) or a path to an existing file."""
    p = Path(name)
    if p.is_file():
        return p
    if os.sep not in name and "/" not in name:
        for cand in (bundled_dir(kind) / name, bundled_dir(kind) / f"{name}.yml"):
            if cand.is_file():
                return cand
    raise InputError(f"no such {kind[:-1]} file or bundled name: {name!r}"
                     f" (bundled: {', '.join(bundled_names(kind))})")


def _parse(text: str, path) -> _Map:
    try:
        doc = yaml.load(text, Loader=_Loader)
    except yaml.MarkedYAMLError as e:
        line = e.problem_mark.line + 1 if e.problem_mark else None
        raise InputError(e.problem or str(e), path, line) from None
    except yaml.YAMLError as e:
        raise InputError(str(e), path) from None
    if not isinstance(doc, _Map):
        raise InputError("expected a key-value document", path, 1)
    return doc


class _Reader:
    """Typed field access on a parsed mapping with file/line aware errors."""

    def __init__(self, m: _Map, path, allowed, required=()):
        self.m, self.path = m, path
        for key in m:
            if key not in allowed:
                raise InputError(f"unknown key {key!r}", path, m.key_lines.get(key))
        for key in required:
            if key not in m:
                raise InputError(f"missing required key {key!r}", path, m.line)

    def line(self, key):
        return self.m.key_lines.get(key, self.m.line)

    def fail(self, key, msg):
        raise InputError(f"{key}: {msg}", self.path, self.line(key))

    def get(self, key, default=None):
        return self.m.get(key, default)

    def num(self, key, default=None):
        v = self.m.get(key, default)
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            self.fail(key, f"expected a number, got {v!r}")
        return float(v)

    def int(self, key, default=None):
        v = self.m.get(key, default)
        if isinstance(v, bool) or not isinstance(v, int):
            self.fail(key, f"expected an integer, got {v!r}")
        return v

    def bool(self, key, default=False):
        v = self.m.get(key, default)
        if not isinstance(v, bool):
            self.fail(key, f"expected true/false, got {v!r}")
        return v

    def str(self, key, default=""):
        v = self.m.get(key, default)
        if v is None:
            return ""
        if not isinstance(v, str):
            self.fail(key, f"expected text, got {v!r}")
        return v

    def sub(self, key, value, allowed, required=()):
        if not isinstance(value, _Map):
            self.fail(key, "expected a key-value block")
        return _Reader(value, self.path, allowed, required)

    def bandwidth(self, key):
        v = self.m.get(key)
        if v is None:
            return None
        if isinstance(v, dict):
            try:
                return normalize_table(v.items())
            except (TypeError, ValueError):
                self.fail(key, "table must map GHz to GB/s")
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            self.fail(key, f"expected GB/s or a GHz -> GB/s table, got {v!r}")
        return float(v)


MACHINE_KEYS = ("name", "cores", "base_frequency", "frequency_range", "cache_levels",
                "memory_bandwidth", "peak_flops_per_cycle_per_core", "load_width",
                "store_width", "notes")
LEVEL_KEYS = ("name", "line_size", "bus_width_to_upper", "duplex", "single_ported")


def parse_machine(text: str, path="<string>") -> MachineDescription:
    r = _Reader(_parse(text, path), path, MACHINE_KEYS, MACHINE_KEYS[:-1])
    fr = r.get("frequency_range")
    if not (isinstance(fr, list) and len(fr) == 2
            and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in fr)):
        r.fail("frequency_range", "expected [low, high] in GHz")
    levels_raw = r.get("cache_levels")
    if not isinstance(levels_raw, list):
        r.fail("cache_levels", "expected a list of levels")
    levels = []
    for raw in levels_raw:
        lr = r.sub("cache_levels", raw, LEVEL_KEYS, ("name",))
        levels.append(CacheLevel(
            name=lr.str("name"),
            line_size=lr.int("line_size", 64),
            bus_width_to_upper=lr.num("bus_width_to_upper", 32.0),
            duplex=lr.str("duplex", "half"),
            single_ported=lr.bool("single_ported", True),
        ))
    machine = MachineDescription(
        name=r.str("name"),
        cores=r.int("cores"),
        base_frequency=r.num("base_frequency"),
        frequency_range=(float(fr[0]), float(fr[1])),
        cache_levels=tuple(levels),
        memory_bandwidth=r.bandwidth("memory_bandwidth"),
        peak_flops_per_cycle_per_core=r.num("peak_flops_per_cycle_per_core"),
        load_width=r.num("load_width"),
        store_width=r.num("store_width"),
        notes=r.str("notes"),
    )
    problems = validate_machine(machine)
    if problems:
        raise InputError("invalid machine: " + "; ".join(map(str, problems)), path, r.m.line)
    return machine


def load_machine(name: str) -> MachineDescription:
    path = resolve(name, "machines")
    return parse_machine(path.read_text(), path)


KERNEL_KEYS = ("name", "comment", "unit_of_work", "streams", "flops_per_scalar_iteration",
               "core_cycles", "core_overlappable", "memory_bandwidth_override", "work_metric")
STREAM_KEYS = ("name", "kind", "count", "bytes_per_scalar_iteration", "nontemporal")
SUPPLIED_KEYS = ("supplied", "provenance")
METRIC_KEYS = ("label", "iterations_per_item", "scale")


def parse_kernel(text: str, path="<string>") -> KernelDescription:
    r = _Reader(_parse(text, path), path, KERNEL_KEYS, ("name", "streams",
                                                        "flops_per_scalar_iteration"))
    streams = []
    raw_streams = r.get("streams")
    if not isinstance(raw_streams, list):
        r.fail("streams", "expected a list of streams")
    for raw in raw_streams:
        sr = r.sub("streams", raw, STREAM_KEYS, ("name", "kind"))
        kind = sr.str("kind")
        if kind not in STREAM_KINDS:
            sr.fail("kind", f"must be one of {', '.join(STREAM_KINDS)}")
        nontemporal = sr.bool("nontemporal", False)
        if nontemporal and kind != "store":
            sr.fail("nontemporal", "only store streams can be nontemporal")
        count = sr.int("count", 1)
        if count < 0:
            sr.fail("count", "must be >= 0")
        streams.append(StreamSpec(sr.str("name"), kind, count,
                                  sr.num("bytes_per_scalar_iteration", 8.0), nontemporal))

    supplied, provenance = None, ""
    cc = r.get("core_cycles", "counted")
    if isinstance(cc, dict):
        cr = r.sub("core_cycles", cc, SUPPLIED_KEYS, ("supplied",))
        supplied = cr.num("supplied")
        if supplied < 0:
            cr.fail("supplied", "must be >= 0")
        provenance = cr.str("provenance")
    elif cc != "counted":
        r.fail("core_cycles", "expected 'counted' or {supplied: <cycles>, provenance: <text>}")

    metric = WorkMetric()
    if "work_metric" in r.m:
        mr = r.sub("work_metric", r.get("work_metric"), METRIC_KEYS, ("label",))
        metric = WorkMetric(mr.str("label"), mr.num("iterations_per_item", 1.0),
                            mr.num("scale", 1e6))

    unit = r.get("unit_of_work")
    if unit is not None:
        unit = r.int("unit_of_work")
        if unit <= 0:
            r.fail("unit_of_work", "must be positive")
    flops = r.num("flops_per_scalar_iteration")
    if flops < 0:
        r.fail("flops_per_scalar_iteration", "must be >= 0")
    return KernelDescription(
        name=r.str("name"),
        streams=tuple(streams),
        flops_per_scalar_iteration=flops,
        unit_of_work=unit,
        supplied_core_cycles=supplied,
        core_cycles_provenance=provenance,
        core_overlappable=r.bool("core_overlappable", False),
        memory_bandwidth_override=r.bandwidth("memory_bandwidth_override"),
        work_metric=metric,
        comment=r.str("comment"),
    )


def load_kernel(name: str) -> KernelDescription:
    path = resolve(name, "kernels")
    return parse_kernel(path.read_text(), path)


PARAM_KEYS = ("name", "W0", "W1", "W2", "notes")


def parse_params(text: str, path="<string>"):
    from .power import PowerParameters

    r = _Reader(_parse(text, path), path, PARAM_KEYS, ("W0", "W1", "W2"))
    return PowerParameters(r.num("W0"), r.num("W1"), r.num("W2"))


def load_params(path):
    p = Path(path)
    if not p.is_file():
        bundled = bundled_dir("data") / f"{path}.yml"
        if "/" in str(path) or not bundled.is_file():
            raise InputError(f"no such parameters file: {path}")
        p = bundled
    return parse_params(p.read_text(), p)


def dump_params(params, name="", notes="") -> str:
    doc = {"name": name, "W0": float(params.W0), "W1": float(params.W1),
           "W2": float(params.W2)}
    if notes:
        doc["notes"] = notes
    return ("# power model: W(f,t) = W0 + (W1*f + W2*f^2)*t  "
            "[W, W/GHz per core, W/GHz^2 per core]\n"
            + yaml.safe_dump(doc, sort_keys=False, default_flow_style=False))


MEASUREMENT_HEADER = ("frequency_ghz", "cores", "power_w")


def parse_measurements(text: str, path="<string>"):
    """Parse a measurement CSV; ``# key: value`` comment lines become metadata."""
    from .fit import MeasurementPoint, MeasurementSeries

    meta, rows = {}, []
    header = None
    for lineno, raw in enumerate(io.StringIO(text), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if ":" in body:
                k, v = body.split(":", 1)
                meta.setdefault(k.strip().lower(), v.strip())
            continue
        cells = [c.strip() for c in next(csv.reader([line]))]
        if header is None:
            if tuple(cells[:3]) != MEASUREMENT_HEADER or len(cells) > 4 or (
                    len(cells) == 4 and cells[3] != "performance"):
                raise InputError("header must be frequency_ghz,cores,power_w[,performance]",
                                 path, lineno)
            header = cells
            continue
        if len(cells) != len(header):
            raise InputError(f"expected {len(header)} fields, got {len(cells)}", path, lineno)
        try:
            f = float(cells[0])
            t = int(cells[1])
            w = float(cells[2])
            perf = float(cells[3]) if len(cells) == 4 and cells[3] != "" else None
        except ValueError as e:
            raise InputError(f"bad number ({e})", path, lineno) from None
        if not f > 0:
            raise InputError("frequency_ghz must be positive", path, lineno)
        if t < 1:
            raise InputError("cores must be >= 1", path, lineno)
        if not w > 0:
            raise InputError("power_w must be positive", path, lineno)
        rows.append(MeasurementPoint(f, t, w, perf))
    if header is None:
        raise InputError("missing header line", path)
    if not rows:
        raise InputError("no data rows", path)
    smt = meta.get("smt", "false").lower() in ("1", "true", "yes")
    return MeasurementSeries(tuple(rows), code=meta.get("code", ""), smt=smt,
                             notes=meta.get("notes", ""))


def load_measurements(path):
    p = Path(path)
    if not p.is_file():
        bundled = bundled_dir("data") / f"{path}.csv"
        if "/" in str(path) or not bundled.is_file():
            raise InputError(f"no such measurement file: {path}")
        p = bundled
    return parse_measurements(p.read_text(), p)
