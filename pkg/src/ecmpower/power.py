"""Chip power model and closed-form energy-to-solution analytics.

Power with ``t`` active cores at clock ``f`` (GHz)::

    W(f, t) = W0 + (W1 f + W2 f^2) t

Performance follows the saturating scaling model, so energy per work item is
``E = W / P`` and the energy-delay cost is ``C = E / P``.  All functions
accept numpy arrays for ``f`` and ``t``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, NamedTuple, Sequence, Tuple

import numpy as np

from .errors import DomainError
from .scaling import ScalingModel, saturation_point


@dataclass(frozen=True)
class PowerParameters:
    W0: float  # W, baseline
    W1: float  # W/GHz per core
    W2: float  # W/GHz^2 per core

    def __post_init__(self):
        if not self.W0 > 0:
            raise DomainError(f"W0 must be positive, got {self.W0}")
        if self.W1 < 0 or self.W2 < 0:
            raise DomainError(f"W1 and W2 must be non-negative (got {self.W1}, {self.W2})")

    def chip(self, t: float) -> Tuple[float, float, float]:
        """Chip-level (W0, w1, w2) at ``t`` active cores."""
        return self.W0, self.W1 * t, self.W2 * t


def validate_params(params: PowerParameters) -> List[str]:
    """Soft issues worth reporting; hard violations raise at construction."""
    issues = []
    if params.W2 == 0:
        issues.append("W2 = 0: no finite energy-optimal frequency")
    if params.W1 == 0:
        issues.append("W1 = 0: the energy-delay cost derivative is only non-positive "
                      "where the model assumes W1 > 0")
    return issues


def _check_t(t, cores):
    t = np.asarray(t, dtype=float)
    if np.any(t < 0) or (cores is not None and np.any(t > cores)):
        raise DomainError(f"active cores out of range [0, {cores}]: {t}")


def power(params: PowerParameters, f, t, cores: int = None):
    """Chip power in W; ``t = 0`` or ``f = 0`` extrapolates to the baseline W0."""
    _check_t(t, cores)
    if np.any(np.asarray(f) < 0):
        raise DomainError(f"frequency must be non-negative, got {f}")
    return params.W0 + (params.W1 * f + params.W2 * f * f) * t


def performance(P0, Pmax, f0, f, t):
    """min((f/f0) t P0, Pmax) in work items/s."""
    return np.minimum(np.multiply(f / f0 * t, P0), Pmax)


def energy_to_solution(params: PowerParameters, P0, Pmax, f0, f, t, work=1.0):
    """Energy in J for ``work`` items (per item when ``work`` is 1)."""
    if not (P0 > 0 and Pmax > 0 and f0 > 0):
        raise DomainError("P0, Pmax and f0 must be positive")
    return power(params, f, t) / performance(P0, Pmax, f0, f, t) * work


def cost_energy_delay(params: PowerParameters, P0, Pmax, f0, f, t):
    """C = E / P in J*s per item squared (energy times runtime for unit work)."""
    p = performance(P0, Pmax, f0, f, t)
    return power(params, f, t) / (p * p)


class OptimalFrequency(NamedTuple):
    value: float  # GHz, clamped to the allowed range when one is given
    clamped: bool
    unclamped: float


def optimal_frequency(params: PowerParameters, t, frequency_range: Tuple[float, float] = None
                      ) -> OptimalFrequency:
    """Energy-optimal clock below saturation, sqrt(W0 / (W2 t)).

    With ``W2 = 0`` there is no finite optimum and the result is +inf (or the
    top of ``frequency_range``, flagged as clamped).  Above saturation the
    optimum is always the lowest available clock instead.
    """
    if t < 1:
        raise DomainError(f"t must be >= 1, got {t}")
    raw = math.inf if params.W2 == 0 else math.sqrt(params.W0 / (params.W2 * t))
    if frequency_range is None:
        return OptimalFrequency(raw, False, raw)
    lo, hi = frequency_range
    value = min(max(raw, lo), hi)
    return OptimalFrequency(value, value != raw, raw)


def energy_at_fopt(params: PowerParameters, P0, f0, t):
    """Minimum energy per item below saturation: (f0/P0)(2 sqrt(W0 W2 / t) + W1)."""
    return f0 / P0 * (2.0 * np.sqrt(params.W0 * params.W2 / t) + params.W1)


def performance_at_fopt(params: PowerParameters, P0, f0, t):
    """(P0/f0) sqrt(W0 t / W2), i.e. (f_opt/f0) t P0."""
    return P0 / f0 * np.sqrt(params.W0 * t / params.W2)


def race_to_idle_verdict(params: PowerParameters, scaling: ScalingModel, f: float, t: int) -> str:
    """Advice on the clock for ``t`` cores at ``f``: faster only pays below saturation and f_opt."""
    model = scaling.at(f)
    if model.saturated(t):
        return "saturated: lower the clock (and use no more than t_s cores)"
    fopt = optimal_frequency(params, t).value
    if f < fopt:
        return f"below f_opt = {fopt:.3g} GHz: a faster clock saves energy (race to idle)"
    if f > fopt:
        return f"above f_opt = {fopt:.3g} GHz: a slower clock saves energy"
    return "at f_opt"


@dataclass
class EnergyAnalysis:
    frequencies: np.ndarray  # GHz
    cores: np.ndarray
    W: np.ndarray  # [f, t] watts
    P: np.ndarray  # [f, t] items/s
    E: np.ndarray  # [f, t] joules for the given work
    C: np.ndarray  # [f, t] joule*seconds for the given work
    argmin: Tuple[float, int]
    E_min: float
    cost_C: float  # at the argmin
    t_s: Dict[float, float] = field(default_factory=dict)  # per frequency, continuous
    f_opt: Dict[int, OptimalFrequency] = field(default_factory=dict)  # per core count

    @property
    def f_opt_argmin(self) -> float:
        return self.argmin[0]

    def rows(self):
        for i, f in enumerate(self.frequencies):
            for j, t in enumerate(self.cores):
                yield float(f), int(t), self.W[i, j], self.P[i, j], self.E[i, j], self.C[i, j]


def energy_surface(params: PowerParameters, scaling: ScalingModel, frequencies: Sequence[float],
                   cores: Sequence[int], work: float = 1.0,
                   frequency_range: Tuple[float, float] = None) -> EnergyAnalysis:
    """Tabulate W, P, E and C over a (f, t) grid and locate the energy minimum.

    Ties resolve to the lowest frequency, then the fewest cores.
    """
    fs = np.asarray(sorted(set(float(f) for f in frequencies)))
    ts = np.asarray(sorted(set(int(t) for t in cores)))
    if fs.size == 0 or ts.size == 0:
        raise DomainError("frequency and core grids must be non-empty")
    if np.any(fs <= 0) or ts[0] < 1 or ts[-1] > scaling.cores:
        raise DomainError(f"grid outside f > 0, 1 <= t <= {scaling.cores}")
    F, T = np.meshgrid(fs, ts, indexing="ij")
    W = power(params, F, T)
    P = performance(scaling.P0, scaling.Pmax, scaling.base_frequency, F, T)
    E = W / P * work
    C = E / P
    i, j = np.unravel_index(int(np.argmin(E)), E.shape)
    return EnergyAnalysis(
        frequencies=fs, cores=ts, W=W, P=P, E=E, C=C,
        argmin=(float(fs[i]), int(ts[j])),
        E_min=float(E[i, j]),
        cost_C=float(C[i, j]),
        t_s={float(f): saturation_point(scaling.at(float(f))).continuous for f in fs},
        f_opt={int(t): optimal_frequency(params, int(t), frequency_range) for t in ts},
    )
