"""Least-squares estimation of power-model parameters from measurements."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .errors import FitError
from .power import PowerParameters

RECONCILE_THRESHOLD = 0.15


@dataclass(frozen=True)
class MeasurementPoint:
    frequency: float  # GHz
    active_cores: int
    power: float  # W
    performance: Optional[float] = None


@dataclass(frozen=True)
class MeasurementSeries:
    points: Tuple[MeasurementPoint, ...]
    code: str = ""
    smt: bool = False
    notes: str = ""

    def frequencies(self):
        return sorted({p.frequency for p in self.points})

    def core_counts(self):
        return sorted({p.active_cores for p in self.points})

    def at_cores(self, t: int) -> "MeasurementSeries":
        return MeasurementSeries(tuple(p for p in self.points if p.active_cores == t),
                                 self.code, self.smt, self.notes)

    def at_frequency(self, f: float) -> "MeasurementSeries":
        return MeasurementSeries(tuple(p for p in self.points if abs(p.frequency - f) < 1e-9),
                                 self.code, self.smt, self.notes)


@dataclass(frozen=True)
class FitResult:
    coefficients: Tuple[float, ...]  # ascending powers
    stderr: Tuple[float, ...]
    residuals: Tuple[float, ...]
    residual_rms: float


@dataclass(frozen=True)
class QuadraticFit:
    W0: float
    w1: float
    w2: float
    cores: int
    result: FitResult


@dataclass(frozen=True)
class LinearFit:
    W0: float
    per_core: float  # W per active core
    frequency: float
    result: FitResult


def polyfit(x, y, degree: int) -> FitResult:
    """Unweighted OLS fit of y = sum c_k x^k; raises FitError when rank deficient."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n, p = x.size, degree + 1
    if len(np.unique(x)) < p:
        raise FitError(f"need at least {p} distinct x values for a degree-{degree} fit, "
                       f"got {len(np.unique(x))}")
    X = np.vander(x, p, increasing=True)
    coef, _, rank, _ = np.linalg.lstsq(X, y, rcond=None)
    if rank < p:
        raise FitError("design matrix is rank deficient")
    resid = y - X @ coef
    rss = float(resid @ resid)
    if n > p:
        cov = rss / (n - p) * np.linalg.inv(X.T @ X)
        stderr = tuple(float(s) for s in np.sqrt(np.diag(cov)))
    else:
        stderr = (0.0,) * p
    return FitResult(tuple(float(c) for c in coef), stderr,
                     tuple(float(r) for r in resid), float(np.sqrt(rss / n)))


def fit_quadratic_in_frequency(series: MeasurementSeries) -> QuadraticFit:
    """Chip power vs clock, W(f) = W0 + w1 f + w2 f^2, at one core count."""
    counts = series.core_counts()
    if len(counts) != 1:
        raise FitError(f"frequency fit needs a single core count, got {counts}")
    r = polyfit([p.frequency for p in series.points], [p.power for p in series.points], 2)
    return QuadraticFit(*r.coefficients, cores=counts[0], result=r)


def fit_linear_in_cores(series: MeasurementSeries, restrict_to: int = None) -> LinearFit:
    """Chip power vs active cores, W(t) = W0 + c t, at one clock.

    ``restrict_to`` keeps only points with at most that many cores, e.g. the
    unsaturated points of a bandwidth-bound code.
    """
    freqs = series.frequencies()
    if len(freqs) != 1:
        raise FitError(f"core-count fit needs a single frequency, got {freqs}")
    pts = [p for p in series.points if restrict_to is None or p.active_cores <= restrict_to]
    if not pts:
        raise FitError(f"no points left with at most {restrict_to} cores")
    r = polyfit([p.active_cores for p in pts], [p.power for p in pts], 1)
    return LinearFit(r.coefficients[0], r.coefficients[1], freqs[0], r)


def decompose_per_core(W0_chip: float, w1: float, w2: float, t: int) -> PowerParameters:
    """Per-core W1, W2 from chip-level coefficients measured with ``t`` cores."""
    if t < 1:
        raise FitError(f"core count must be >= 1, got {t}")
    return PowerParameters(W0_chip, w1 / t, w2 / t)


def reconcile(W0_frequency: float, W0_cores: float, threshold: float = RECONCILE_THRESHOLD):
    """Note when the two baseline-power extrapolations disagree by more than ``threshold``."""
    ref = min(abs(W0_frequency), abs(W0_cores))
    spread = abs(W0_frequency - W0_cores) / ref if ref else float("inf")
    if spread <= threshold:
        return None
    return (f"baseline power estimates differ by {spread:.0%}: {W0_frequency:.1f} W from the "
            f"zero-frequency extrapolation vs {W0_cores:.1f} W from the zero-core "
            f"extrapolation; both are rough (about 23 vs 25 W is typical on Sandy Bridge)")


def split_sweeps(series: MeasurementSeries):
    """Pick the frequency sweep (most cores) and the core sweep (most common clock).

    Returns ``(freq_sweep, core_sweep)``; either may be None when the data does
    not contain a usable sweep.
    """
    freq_sweep = core_sweep = None
    if series.points:
        top = max(series.core_counts())
        s = series.at_cores(top)
        if len(s.frequencies()) >= 2:
            freq_sweep = s
        counts = Counter(round(p.frequency, 9) for p in series.points)
        f, _ = max(counts.items(), key=lambda kv: (len(series.at_frequency(kv[0]).core_counts()),
                                                    kv[0]))
        c = series.at_frequency(f)
        if len(c.core_counts()) >= 2:
            core_sweep = c
    return freq_sweep, core_sweep
