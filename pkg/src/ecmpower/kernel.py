"""Loop kernel descriptions: per-unit-of-work streams, traffic volumes, core cycles."""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Dict, Optional, Tuple

from .errors import DomainError
from .machine import Bandwidth, MachineDescription, lookup_bandwidth

STREAM_KINDS = ("load", "store", "update")


@dataclass(frozen=True)
class StreamSpec:
    name: str
    kind: str
    count: int = 1
    bytes_per_scalar_iteration: float = 8.0
    nontemporal: bool = False

    def lines_in(self) -> int:
        """Inbound line transfers per stream and line of work (load or write-allocate)."""
        if self.kind == "store":
            return 0 if self.nontemporal else 1
        return 1

    def lines_out(self) -> int:
        return 0 if self.kind == "load" else 1


@dataclass(frozen=True)
class WorkMetric:
    label: str = "MIt/s"
    iterations_per_item: float = 1.0
    scale: float = 1e6  # items/s per label unit

    def to_label(self, items_per_second: float) -> float:
        return items_per_second / self.scale


@dataclass(frozen=True)
class KernelDescription:
    name: str
    streams: Tuple[StreamSpec, ...]
    flops_per_scalar_iteration: float
    unit_of_work: Optional[int] = None  # None: one line of doubles
    supplied_core_cycles: Optional[float] = None  # None: count from load/store widths
    core_cycles_provenance: str = ""
    core_overlappable: bool = False
    memory_bandwidth_override: Optional[Bandwidth] = None
    work_metric: WorkMetric = field(default_factory=WorkMetric)
    comment: str = field(default="", compare=False)

    @property
    def counted(self) -> bool:
        return self.supplied_core_cycles is None

    def units(self, machine: MachineDescription) -> int:
        """Scalar iterations in one modeled unit of work on ``machine``."""
        return self.unit_of_work or machine.line_size // 8

    def bandwidth_at(self, machine: MachineDescription, frequency: float) -> float:
        """Saturated memory bandwidth in GB/s, honoring a kernel override."""
        if self.memory_bandwidth_override is not None:
            return lookup_bandwidth(self.memory_bandwidth_override, frequency)
        return machine.bandwidth_at(frequency)

    def with_streams(self, streams) -> "KernelDescription":
        return replace(self, streams=tuple(streams))


def check_pairing(kernel: KernelDescription, machine: MachineDescription) -> None:
    """Raise unless every stream moves whole cache lines per unit of work."""
    units = kernel.units(machine)
    for s in kernel.streams:
        if s.kind not in STREAM_KINDS:
            raise DomainError(f"stream {s.name!r}: unknown kind {s.kind!r}")
        if s.count < 0:
            raise DomainError(f"stream {s.name!r}: negative count")
        nbytes = units * s.bytes_per_scalar_iteration
        if nbytes % machine.line_size:
            raise DomainError(
                f"stream {s.name!r}: {nbytes:g} bytes per unit of work is not a whole "
                f"number of {machine.line_size}-byte lines")


def core_cycles(kernel: KernelDescription, machine: MachineDescription) -> float:
    """In-core cycles per unit of work.

    Counted kernels take the larger of the load-port and store-port demand,
    each rounded up to whole cycles; loads and stores issue concurrently.
    """
    if not kernel.counted:
        return float(kernel.supplied_core_cycles)
    if not kernel.streams:
        raise DomainError(f"kernel {kernel.name!r}: counted core cycles need at least one stream")
    units = kernel.units(machine)
    load_bytes = sum(s.count * s.bytes_per_scalar_iteration * units
                     for s in kernel.streams if s.kind in ("load", "update"))
    store_bytes = sum(s.count * s.bytes_per_scalar_iteration * units
                      for s in kernel.streams if s.kind in ("store", "update"))
    return float(max(math.ceil(load_bytes / machine.load_width),
                     math.ceil(store_bytes / machine.store_width)))


def boundaries(machine: MachineDescription) -> Tuple[Tuple[str, str], ...]:
    """Adjacent (upper, lower) level pairs from L1 outward, ending at memory."""
    names = machine.level_names
    return tuple(zip(names[:-1], names[1:]))


def boundary_label(upper: str, lower: str) -> str:
    return f"{upper}-{'Mem' if lower == 'memory' else lower}"


def data_volumes(kernel: KernelDescription, machine: MachineDescription,
                 dataset_level: str) -> Dict[str, int]:
    """Line transfers per unit of work across each boundary, keyed like ``"L1-L2"``.

    Boundaries below ``dataset_level`` carry zero traffic.
    """
    names = machine.level_names
    if dataset_level not in names:
        raise DomainError(f"unknown dataset level {dataset_level!r}; known: {', '.join(names)}")
    check_pairing(kernel, machine)
    depth = names.index(dataset_level)
    units = kernel.units(machine)
    per_boundary = 0
    for s in kernel.streams:
        lines = s.count * int(units * s.bytes_per_scalar_iteration) // machine.line_size
        per_boundary += lines * (s.lines_in() + s.lines_out())
    return {boundary_label(up, lo): (per_boundary if i < depth else 0)
            for i, (up, lo) in enumerate(boundaries(machine))}


def memory_bytes_per_iteration(kernel: KernelDescription) -> float:
    """Bytes moved to/from memory per scalar iteration, write-allocates included."""
    return sum(s.count * s.bytes_per_scalar_iteration * (s.lines_in() + s.lines_out())
               for s in kernel.streams)


def code_balance(kernel: KernelDescription) -> float:
    """Memory traffic per flop in bytes/flop."""
    if not kernel.flops_per_scalar_iteration > 0:
        raise DomainError(f"kernel {kernel.name!r} has no flops; code balance undefined")
    return memory_bytes_per_iteration(kernel) / kernel.flops_per_scalar_iteration
