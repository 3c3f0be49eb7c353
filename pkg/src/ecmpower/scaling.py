"""Multicore scaling with bandwidth saturation, and the roofline bound."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, NamedTuple, Tuple

from .ecm import predict, to_performance
from .errors import DomainError
from .kernel import KernelDescription, code_balance
from .machine import MachineDescription

_REL = 1e-9


@dataclass(frozen=True)
class ScalingModel:
    """P(t) = min((1 + dnu) t P0, Pmax) with dnu = frequency/base_frequency - 1.

    Rates are work items per second; ``Pmax`` may be ``math.inf`` for codes
    without a shared bottleneck.
    """
    P0: float
    Pmax: float
    cores: int
    base_frequency: float
    frequency: float = None

    def __post_init__(self):
        if self.frequency is None:
            object.__setattr__(self, "frequency", self.base_frequency)
        if not self.P0 > 0 or not self.Pmax > 0:
            raise DomainError(f"P0 and Pmax must be positive (got {self.P0}, {self.Pmax})")
        if self.cores < 1:
            raise DomainError(f"cores must be >= 1, got {self.cores}")
        if not self.base_frequency > 0 or not self.frequency > 0:
            raise DomainError("frequencies must be positive")

    @property
    def delta_nu(self) -> float:
        return self.frequency / self.base_frequency - 1.0

    def at(self, frequency: float) -> "ScalingModel":
        return ScalingModel(self.P0, self.Pmax, self.cores, self.base_frequency, frequency)

    def performance(self, t: float) -> float:
        return min((1.0 + self.delta_nu) * t * self.P0, self.Pmax)

    def saturated(self, t: float) -> bool:
        """Strictly beyond the saturation point; the boundary counts as unsaturated."""
        return (1.0 + self.delta_nu) * t * self.P0 > self.Pmax * (1 + _REL)

    @classmethod
    def from_ecm(cls, kernel: KernelDescription, machine: MachineDescription,
                 dataset_level: str = "memory", frequency: float = None,
                 hypothesis: str = None) -> "ScalingModel":
        """Derive P0 and Pmax from an ECM prediction at ``frequency``.

        P0 is normalized so that (1 + dnu) P0 equals the single-core ECM rate at
        ``frequency``; that keeps frequency-dependent memory cycles exact at the
        chosen clock.  Pmax is the saturated bandwidth over the traffic per work
        item; data sets in cache have no shared limit (Pmax = inf).
        """
        f0 = machine.base_frequency
        frequency = f0 if frequency is None else frequency
        pred = predict(kernel, machine, dataset_level, frequency)
        perf = to_performance(pred, kernel, frequency, hypothesis)
        p0 = perf.rate / (frequency / f0)
        if dataset_level == "memory":
            items_per_unit = pred.unit_of_work / kernel.work_metric.iterations_per_item
            bytes_per_item = pred.bytes_per_unit / items_per_unit
            pmax = kernel.bandwidth_at(machine, frequency) * 1e9 / bytes_per_item
        else:
            pmax = math.inf
        return cls(p0, pmax, machine.cores, f0, frequency)


def scaling_curve(model: ScalingModel) -> List[Tuple[int, float]]:
    return [(t, model.performance(t)) for t in range(1, model.cores + 1)]


class SaturationPoint(NamedTuple):
    continuous: float
    cores: int


def saturation_point(model: ScalingModel) -> SaturationPoint:
    """Continuous saturation point and the smallest whole core count reaching it.

    An exactly integral t_s maps to itself: that core count just saturates.
    """
    ts = model.Pmax / ((1.0 + model.delta_nu) * model.P0)
    if math.isinf(ts):
        return SaturationPoint(ts, model.cores)
    n = math.ceil(ts * (1 - _REL))
    return SaturationPoint(ts, min(max(n, 1), model.cores))


class RooflineBound(NamedTuple):
    gflops: float
    rate: float  # work items/s
    limiter: str  # "compute" or "memory"


def roofline(kernel: KernelDescription, machine: MachineDescription, frequency: float,
             cores: int = None) -> RooflineBound:
    """min(peak, bandwidth / code balance) for ``cores`` active cores."""
    cores = machine.cores if cores is None else cores
    balance = code_balance(kernel)
    peak = machine.peak_performance(frequency, cores)
    memory = kernel.bandwidth_at(machine, frequency) / balance if balance > 0 else math.inf
    gflops = min(peak, memory)
    flops_per_item = kernel.flops_per_scalar_iteration * kernel.work_metric.iterations_per_item
    return RooflineBound(gflops, gflops * 1e9 / flops_per_item,
                         "memory" if memory < peak else "compute")
