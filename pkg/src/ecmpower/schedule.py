"""Minimum-makespan scheduling of ECM contributions under resource conflicts.

Two contributions may run concurrently iff their resource sets are disjoint.
The exact search lives in a compiled extension when one was built, otherwise
in the pure-Python twin; set ``ECMPOWER_PURE_PYTHON=1`` to force the latter.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from typing import FrozenSet, List, NamedTuple, Sequence

from . import _schedule_py
from .errors import DomainError

MAX_EXACT = 12

try:
    if os.environ.get("ECMPOWER_PURE_PYTHON"):
        raise ImportError("pure Python requested")
    from . import _schedule as _native
    BACKEND = "compiled"
except ImportError:
    _native = None
    BACKEND = "python"


@dataclass(frozen=True)
class Contribution:
    label: str
    cycles: float
    resources: FrozenSet[str]

    def __post_init__(self):
        object.__setattr__(self, "resources", frozenset(self.resources))

    def conflicts_with(self, other: "Contribution") -> bool:
        return bool(self.resources & other.resources)


class Schedule(NamedTuple):
    makespan: float
    starts: List[float]


def _encode(contributions):
    n = len(contributions)
    conflicts = []
    for i, a in enumerate(contributions):
        m = 0
        for j, b in enumerate(contributions):
            if i != j and a.conflicts_with(b):
                m |= 1 << j
        conflicts.append(m)
    names = sorted(set().union(*(c.resources for c in contributions))) if n else []
    resource_masks = []
    for r in names:
        m = 0
        for j, c in enumerate(contributions):
            if r in c.resources:
                m |= 1 << j
        resource_masks.append(m)
    return [float(c.cycles) for c in contributions], conflicts, resource_masks


def _check(contributions):
    for c in contributions:
        if c.cycles < 0:
            raise DomainError(f"contribution {c.label!r} has negative cycles ({c.cycles})")


def greedy_schedule(contributions: Sequence[Contribution]) -> Schedule:
    """Longest-first list scheduling with earliest-fit gap insertion.

    Each contribution, longest first (ties by position), starts at the earliest
    time where it overlaps no already-placed conflicting contribution, filling
    gaps when they are long enough.  Not exact in general; used as the initial
    bound for the exact search and as a cheap fallback.
    """
    _check(contributions)
    order = sorted(range(len(contributions)), key=lambda i: (-contributions[i].cycles, i))
    starts = [0.0] * len(contributions)
    placed = []
    for i in order:
        c = contributions[i]
        busy = sorted((starts[j], starts[j] + contributions[j].cycles)
                      for j in placed if c.conflicts_with(contributions[j]))
        t = 0.0
        for lo, hi in busy:
            if t + c.cycles <= lo + 1e-12:
                break
            t = max(t, hi)
        starts[i] = t
        placed.append(i)
    end = max((s + c.cycles for s, c in zip(starts, contributions)), default=0.0)
    return Schedule(end, starts)


def schedule_min_makespan(contributions: Sequence[Contribution], method: str = "exact",
                          backend: str = None) -> Schedule:
    """Minimum makespan over non-preemptive schedules; start times certify it."""
    contributions = list(contributions)
    greedy = greedy_schedule(contributions)
    if method == "greedy" or len(contributions) <= 1:
        return greedy
    if method != "exact":
        raise ValueError(f"unknown method {method!r}")
    if len(contributions) > MAX_EXACT:
        raise DomainError(
            f"exact scheduling supports at most {MAX_EXACT} contributions, got {len(contributions)}")
    args = _encode(contributions)
    impl = _pick(backend)
    makespan, starts = impl.min_makespan(*args, greedy.makespan, greedy.starts)
    return Schedule(makespan, list(starts))


def _pick(backend):
    if backend is None:
        return _native or _schedule_py
    if backend == "python":
        return _schedule_py
    if backend == "compiled":
        if _native is None:
            raise RuntimeError("compiled scheduling extension is not available")
        return _native
    raise ValueError(f"unknown backend {backend!r}")


def check_schedule(contributions: Sequence[Contribution], starts: Sequence[float],
                   tol: float = 1e-9) -> bool:
    """True iff no two conflicting contributions overlap in time."""
    for i, a in enumerate(contributions):
        for j in range(i + 1, len(contributions)):
            b = contributions[j]
            if not a.conflicts_with(b) or a.cycles == 0 or b.cycles == 0:
                continue
            if starts[i] < starts[j] + b.cycles - tol and starts[j] < starts[i] + a.cycles - tol:
                return False
    return True
