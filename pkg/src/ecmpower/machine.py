"""Machine descriptions and bandwidth/frequency/cycle unit conversions.

Bandwidths are decimal (1 GB/s = 1e9 byte/s), frequencies are in GHz, so
``GB/s / GHz`` is directly bytes per cycle.
"""
from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from typing import Sequence, Tuple, Union

from .errors import DomainError

# (GHz, GB/s) pairs, sorted by frequency
BandwidthTable = Tuple[Tuple[float, float], ...]
Bandwidth = Union[float, BandwidthTable]

DUPLEX_MODES = ("half", "full")


@dataclass(frozen=True)
class CacheLevel:
    name: str
    line_size: int = 64
    bus_width_to_upper: float = 32.0  # bytes/cy toward the level closer to the registers
    duplex: str = "half"
    single_ported: bool = True

    def cycles_per_line(self) -> int:
        """Cycles to move one line across the bus to the upper level (one direction)."""
        return math.ceil(self.line_size / self.bus_width_to_upper)


@dataclass(frozen=True)
class Violation:
    field: str
    rule: str

    def __str__(self):
        return f"{self.field}: {self.rule}"


@dataclass(frozen=True)
class MachineDescription:
    name: str
    cores: int
    base_frequency: float
    frequency_range: Tuple[float, float]
    cache_levels: Tuple[CacheLevel, ...]
    memory_bandwidth: Bandwidth
    peak_flops_per_cycle_per_core: float
    load_width: float
    store_width: float
    notes: str = field(default="", compare=False)

    @property
    def line_size(self) -> int:
        return self.cache_levels[0].line_size

    @property
    def level_names(self) -> Tuple[str, ...]:
        return tuple(lvl.name for lvl in self.cache_levels) + ("memory",)

    def level(self, name: str) -> CacheLevel:
        for lvl in self.cache_levels:
            if lvl.name == name:
                return lvl
        raise DomainError(f"unknown cache level {name!r}; known: {', '.join(self.level_names)}")

    def bandwidth_at(self, frequency: float) -> float:
        return lookup_bandwidth(self.memory_bandwidth, frequency)

    def peak_performance(self, frequency: float, cores: int = 1) -> float:
        """Arithmetic peak in GF/s."""
        return cores * frequency * self.peak_flops_per_cycle_per_core

    def in_range(self, frequency: float) -> bool:
        lo, hi = self.frequency_range
        return lo - 1e-12 <= frequency <= hi + 1e-12


def lookup_bandwidth(bandwidth: Bandwidth, frequency: float) -> float:
    """Resolve a scalar bandwidth or a (GHz -> GB/s) step table at ``frequency``.

    Table lookups take the nearest entry at or below ``frequency``; above the
    largest entry the largest entry holds, below the smallest the smallest does.
    """
    if isinstance(bandwidth, (int, float)):
        return float(bandwidth)
    freqs = [f for f, _ in bandwidth]
    i = bisect.bisect_right(freqs, frequency + 1e-12) - 1
    return float(bandwidth[max(i, 0)][1])


def normalize_table(pairs) -> BandwidthTable:
    return tuple(sorted((float(f), float(bw)) for f, bw in pairs))


def effective_bits_per_cycle(bandwidth: float, frequency: float) -> float:
    """Bandwidth in GB/s expressed as bits transferred per core cycle at ``frequency`` GHz."""
    if not bandwidth > 0 or not frequency > 0:
        raise DomainError(
            f"bandwidth and frequency must be positive (got {bandwidth} GB/s, {frequency} GHz)")
    return bandwidth * 8.0 / frequency


def machine_balance(machine: MachineDescription, frequency: float) -> float:
    """Single-core machine balance in bytes/flop."""
    if not frequency > 0:
        raise DomainError(f"frequency must be positive, got {frequency}")
    return machine.bandwidth_at(frequency) / (frequency * machine.peak_flops_per_cycle_per_core)


def _is_pow2(n) -> bool:
    return isinstance(n, int) and n > 0 and n & (n - 1) == 0


def validate_machine(machine: MachineDescription) -> list:
    """Return the list of invariant violations; empty means valid."""
    out = []
    if not isinstance(machine.cores, int) or machine.cores < 1:
        out.append(Violation("cores", "must be an integer >= 1"))
    lo, hi = machine.frequency_range
    if not lo > 0:
        out.append(Violation("frequency_range", "lower bound must be positive"))
    if lo > hi:
        out.append(Violation("frequency_range", "must be ordered [low, high]"))
    elif not lo <= machine.base_frequency <= hi:
        out.append(Violation("base_frequency", "must lie within frequency_range"))
    if not machine.base_frequency > 0:
        out.append(Violation("base_frequency", "must be positive"))
    if isinstance(machine.memory_bandwidth, (int, float)):
        if not machine.memory_bandwidth > 0:
            out.append(Violation("memory_bandwidth", "must be positive"))
    else:
        if not machine.memory_bandwidth:
            out.append(Violation("memory_bandwidth", "table must not be empty"))
        for f, bw in machine.memory_bandwidth:
            if not (f > 0 and bw > 0):
                out.append(Violation("memory_bandwidth", f"table entry ({f}, {bw}) must be positive"))
    if not machine.cache_levels:
        out.append(Violation("cache_levels", "at least one level required"))
    names = [lvl.name for lvl in machine.cache_levels]
    if len(set(names)) != len(names) or "memory" in names:
        out.append(Violation("cache_levels", "level names must be unique and not 'memory'"))
    sizes = {lvl.line_size for lvl in machine.cache_levels}
    if len(sizes) > 1:
        out.append(Violation("cache_levels", "all levels must share one line size"))
    for i, lvl in enumerate(machine.cache_levels):
        where = f"cache_levels[{i}]"
        if not _is_pow2(lvl.line_size):
            out.append(Violation(f"{where}.line_size", "must be a positive power of two"))
        if not lvl.bus_width_to_upper > 0:
            out.append(Violation(f"{where}.bus_width_to_upper", "must be positive"))
        if lvl.duplex not in DUPLEX_MODES:
            out.append(Violation(f"{where}.duplex", "must be 'half' or 'full'"))
    for name in ("peak_flops_per_cycle_per_core", "load_width", "store_width"):
        if not getattr(machine, name) > 0:
            out.append(Violation(name, "must be positive"))
    return out


def frequency_grid(lo: float, hi: float, step: float) -> Sequence[float]:
    """Inclusive grid lo..hi, rounded to 1 kHz to keep CSV output stable."""
    if step <= 0 or hi < lo:
        raise DomainError(f"bad frequency grid {lo}:{hi}:{step}")
    n = math.floor((hi - lo) / step + 1e-9)
    return [round(lo + i * step, 6) for i in range(n + 1)]
