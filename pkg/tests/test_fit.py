import random

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from ecmpower import load_measurements
from ecmpower.errors import FitError
from ecmpower.fit import (MeasurementPoint, MeasurementSeries, decompose_per_core,
                          fit_linear_in_cores, fit_quadratic_in_frequency, polyfit, reconcile,
                          split_sweeps)
from ecmpower.power import power

FREQS = [round(1.2 + 0.1 * i, 1) for i in range(16)]


def series(points):
    return MeasurementSeries(tuple(MeasurementPoint(f, t, w) for f, t, w in points))


def normal_equations_oracle(x, y, degree):
    """Unweighted least squares at 50 digits via the normal equations."""
    with mpmath.workdps(50):
        X = mpmath.matrix([[mpmath.mpf(xi) ** k for k in range(degree + 1)] for xi in x])
        Y = mpmath.matrix([mpmath.mpf(v) for v in y])
        A = X.T * X
        coef = mpmath.lu_solve(A, X.T * Y)
        r = Y - X * coef
        s2 = sum(v * v for v in r) / (len(x) - degree - 1)
        inv = mpmath.inverse(A)
        se = [mpmath.sqrt(s2 * inv[k, k]) for k in range(degree + 1)]
        return [float(c) for c in coef], [float(s) for s in se]


def test_exact_quadratic_recovery():
    q = fit_quadratic_in_frequency(series([(f, 8, 23 + 0.5 * f + 9 * f * f) for f in FREQS]))
    assert q.W0 == pytest.approx(23, rel=1e-9)
    assert q.w1 == pytest.approx(0.5, rel=1e-9)
    assert q.w2 == pytest.approx(9, rel=1e-9)
    assert q.cores == 8 and q.result.residual_rms < 1e-9


def test_bundled_exact_file():
    q = fit_quadratic_in_frequency(load_measurements("synthetic-exact"))
    assert (q.W0, q.w1, q.w2) == (pytest.approx(23, rel=1e-9), pytest.approx(0.5, rel=1e-9),
                                  pytest.approx(9, rel=1e-9))


def test_noisy_fit_against_high_precision_oracle():
    rng = random.Random(42)
    x = FREQS * 2
    y = [23 + 0.5 * f + 9 * f * f + rng.uniform(-1, 1) for f in x]
    r = polyfit(x, y, 2)
    coef, se = normal_equations_oracle(x, y, 2)
    assert r.coefficients == pytest.approx(coef, rel=1e-8)
    assert r.stderr == pytest.approx(se, rel=1e-8)
    assert abs(r.coefficients[2] - 9) <= 2 * r.stderr[2]


def test_exact_line_and_restriction():
    lin = fit_linear_in_cores(series([(2.7, t, 25 + 8 * t) for t in range(1, 9)]))
    assert lin.W0 == pytest.approx(25, rel=1e-9) and lin.per_core == pytest.approx(8, rel=1e-9)
    # kinked series: 25 + 10 t up to t = 2, flat beyond (saturated)
    kinked = series([(2.7, t, 25 + 10 * min(t, 2)) for t in range(1, 9)])
    full = fit_linear_in_cores(kinked)
    early = fit_linear_in_cores(kinked, restrict_to=2)
    assert early.W0 == pytest.approx(25) and early.per_core == pytest.approx(10)
    # by hand: x = 1..8, y = 35, 45 x 7; slope = Sxy/Sxx = 35/42
    assert full.per_core == pytest.approx(35 / 42)
    assert full.per_core != pytest.approx(early.per_core)
    with pytest.raises(FitError):
        fit_linear_in_cores(kinked, restrict_to=0)


def test_rank_deficiency_and_mixed_series():
    with pytest.raises(FitError):
        fit_quadratic_in_frequency(series([(1.2, 8, 30), (2.0, 8, 50), (1.2, 8, 31)]))
    with pytest.raises(FitError):
        fit_quadratic_in_frequency(load_measurements("synthetic-two-freq"))
    with pytest.raises(FitError):
        fit_quadratic_in_frequency(series([(1.2, 4, 30), (2.0, 8, 50), (2.5, 8, 60)]))
    with pytest.raises(FitError):
        fit_linear_in_cores(series([(1.2, 4, 30), (2.0, 8, 50)]))


def test_decompose():
    p = decompose_per_core(23, 0.8, 9.6, 8)
    assert (p.W0, p.W1, p.W2) == (23, pytest.approx(0.1), pytest.approx(1.2))
    p = decompose_per_core(23, 0.8, 9.6, 1)
    assert (p.W0, p.W1, p.W2) == (23, 0.8, 9.6)
    with pytest.raises(FitError):
        decompose_per_core(23, 0.8, 9.6, 0)


def test_round_trip_through_power_model():
    pts = [(f, 8, 23 + 0.5 * f + 9 * f * f) for f in FREQS]
    q = fit_quadratic_in_frequency(series(pts))
    p = decompose_per_core(q.W0, q.w1, q.w2, q.cores)
    for f, t, w in pts:
        assert power(p, f, t) == pytest.approx(w, abs=1e-9)


def test_plausible_series():
    s = load_measurements("sandy-bridge-plausible")
    fs, cs = split_sweeps(s)
    q = fit_quadratic_in_frequency(fs)
    assert 7 <= q.w2 <= 10
    lin = fit_linear_in_cores(cs)
    assert lin.W0 == pytest.approx(25, abs=1.5)
    assert reconcile(q.W0, lin.W0) is None


def test_reconcile():
    assert reconcile(23.0, 25.0) is None
    note = reconcile(20.0, 25.0)
    assert note and "25%" in note


@given(st.floats(0.1, 100.0))
def test_scale_equivariance(k):
    rng = random.Random(1)
    y = [23 + 0.5 * f + 9 * f * f + rng.uniform(-1, 1) for f in FREQS]
    a = polyfit(FREQS, y, 2).coefficients
    b = polyfit(FREQS, [k * v for v in y], 2).coefficients
    assert b == pytest.approx([k * c for c in a], rel=1e-8)


def test_residuals_orthogonal_to_design():
    rng = random.Random(2)
    for degree in (1, 2):
        x = [rng.uniform(1, 3) for _ in range(20)]
        y = [rng.uniform(20, 100) for _ in x]
        r = polyfit(x, y, degree)
        X = np.vander(np.asarray(x), degree + 1, increasing=True)
        assert np.max(np.abs(X.T @ np.asarray(r.residuals))) < 1e-8
