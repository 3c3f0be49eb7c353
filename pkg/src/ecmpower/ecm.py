"""Single-core Execution-Cache-Memory predictions per unit of work.

A prediction is built from one in-core contribution and one transfer
contribution per boundary between the L1 cache and the level holding the
data set.  The three totals correspond to the overlap hypotheses:

* ``no_overlap``: everything serializes;
* ``single_ported``: contributions overlap iff they touch disjoint levels;
* ``full_overlap``: all transfers beyond L2 overlap, but the single-ported
  L1 still serializes core execution with the L1-L2 transfer.

A kernel flagged ``core_overlappable`` is not load/store bound, so its core
contribution occupies no level and can hide every transfer.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Dict, List, Tuple

from .errors import DomainError
from .kernel import KernelDescription, boundaries, boundary_label, core_cycles, data_volumes
from .machine import MachineDescription, effective_bits_per_cycle
from .schedule import Contribution, schedule_min_makespan

HYPOTHESES = ("no_overlap", "single_ported", "full_overlap")


def round_half_up(x: float) -> int:
    """Report rounding for cycle counts (23.5 -> 24); sums use unrounded values."""
    return int(math.floor(x + 0.5 + 1e-9))


@dataclass(frozen=True)
class EcmPrediction:
    kernel: str
    machine: str
    dataset_level: str
    frequency: float
    contributions: Tuple[Contribution, ...]
    total_no_overlap: float
    total_single_ported: float
    total_full_overlap: float
    starts: Dict[str, Tuple[float, ...]]
    unit_of_work: int
    bytes_per_unit: float  # traffic across the outermost active boundary
    core_overlappable: bool = False

    @property
    def core(self) -> float:
        return self.contributions[0].cycles

    @property
    def data_cycles(self) -> float:
        """Sum of all transfer contributions (data delays without overlap)."""
        return sum(c.cycles for c in self.contributions[1:])

    @property
    def hidden_data_cycles(self) -> float:
        """Data delays hidden behind in-core execution for overlappable kernels."""
        if not self.core_overlappable:
            return 0.0
        return min(self.data_cycles, self.core)

    @property
    def default_hypothesis(self) -> str:
        return "full_overlap" if self.core_overlappable else "no_overlap"

    def total(self, hypothesis: str = None) -> float:
        hypothesis = hypothesis or self.default_hypothesis
        if hypothesis not in HYPOTHESES:
            raise ValueError(f"unknown overlap hypothesis {hypothesis!r}")
        return getattr(self, "total_" + hypothesis)

    def cycles(self) -> Dict[str, float]:
        return {c.label: c.cycles for c in self.contributions}

    def rounded(self) -> Dict[str, int]:
        out = {c.label: round_half_up(c.cycles) for c in self.contributions}
        for h in HYPOTHESES:
            out[h] = round_half_up(self.total(h))
        return out


def _resource(level: str) -> str:
    return "Mem" if level == "memory" else level


def build_contributions(kernel: KernelDescription, machine: MachineDescription,
                        dataset_level: str, frequency: float) -> List[Contribution]:
    volumes = data_volumes(kernel, machine, dataset_level)
    first = machine.cache_levels[0].name
    contribs = [Contribution("core", core_cycles(kernel, machine),
                             frozenset() if kernel.core_overlappable else {first})]
    for upper, lower in boundaries(machine):
        label = boundary_label(upper, lower)
        lines = volumes[label]
        if machine.level_names.index(lower) > machine.level_names.index(dataset_level):
            break
        if lower == "memory":
            bits = lines * machine.line_size * 8
            cy = bits / effective_bits_per_cycle(kernel.bandwidth_at(machine, frequency), frequency)
        else:
            cy = lines * machine.level(lower).cycles_per_line()
        contribs.append(Contribution(label, float(cy), {_resource(upper), _resource(lower)}))
    return contribs


def predict(kernel: KernelDescription, machine: MachineDescription, dataset_level: str,
            frequency: float) -> EcmPrediction:
    """ECM cycle prediction per unit of work at ``frequency`` GHz."""
    if not frequency > 0:
        raise DomainError(f"frequency must be positive, got {frequency}")
    if not machine.in_range(frequency):
        lo, hi = machine.frequency_range
        warnings.warn(f"{frequency} GHz is outside the {machine.name} range [{lo}, {hi}] GHz",
                      stacklevel=2)
    contribs = build_contributions(kernel, machine, dataset_level, frequency)

    no_overlap = sum(c.cycles for c in contribs)
    serial_starts, t = [], 0.0
    for c in contribs:
        serial_starts.append(t)
        t += c.cycles

    # full overlap: the L1-bound part (core, L1-L2) serializes, the rest runs at t=0
    if kernel.core_overlappable:
        full = max(c.cycles for c in contribs)
        full_starts = [0.0] * len(contribs)
    else:
        l1_part = contribs[0].cycles + (contribs[1].cycles if len(contribs) > 1 else 0.0)
        full = max([l1_part] + [c.cycles for c in contribs[2:]])
        full_starts = [0.0] * len(contribs)
        if len(contribs) > 1:
            full_starts[1] = contribs[0].cycles

    sched = schedule_min_makespan(contribs)

    outer = contribs[-1].label if len(contribs) > 1 else None
    volumes = data_volumes(kernel, machine, dataset_level)
    bytes_per_unit = volumes[outer] * machine.line_size if outer else 0.0

    return EcmPrediction(
        kernel=kernel.name,
        machine=machine.name,
        dataset_level=dataset_level,
        frequency=frequency,
        contributions=tuple(contribs),
        total_no_overlap=no_overlap,
        total_single_ported=sched.makespan,
        total_full_overlap=full,
        starts={"no_overlap": tuple(serial_starts),
                "single_ported": tuple(sched.starts),
                "full_overlap": tuple(full_starts)},
        unit_of_work=kernel.units(machine),
        bytes_per_unit=float(bytes_per_unit),
        core_overlappable=kernel.core_overlappable,
    )


@dataclass(frozen=True)
class Performance:
    cycles: float
    bits_per_cycle: float
    bandwidth: float  # GB/s
    rate: float  # work items/s
    rate_label: str
    rate_scaled: float  # rate in the kernel's work-metric unit

    def __str__(self):
        return (f"{self.rate_scaled:.4g} {self.rate_label}, {self.bandwidth:.4g} GB/s "
                f"({self.bits_per_cycle:.4g} bits/cy)")


def to_performance(prediction: EcmPrediction, kernel: KernelDescription, frequency: float,
                   hypothesis: str = None) -> Performance:
    """Convert cycles per unit of work into bandwidth and work-metric rate."""
    cy = prediction.total(hypothesis)
    bits = prediction.bytes_per_unit * 8 / cy
    iterations_per_s = prediction.unit_of_work * frequency * 1e9 / cy
    rate = iterations_per_s / kernel.work_metric.iterations_per_item
    return Performance(cycles=cy, bits_per_cycle=bits, bandwidth=bits * frequency / 8,
                       rate=rate, rate_label=kernel.work_metric.label,
                       rate_scaled=kernel.work_metric.to_label(rate))
