import math
import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ecmpower import load_params
from ecmpower.errors import DomainError
from ecmpower.power import (PowerParameters, cost_energy_delay, energy_at_fopt, energy_surface,
                            energy_to_solution, optimal_frequency, performance,
                            performance_at_fopt, power, race_to_idle_verdict, validate_params)
from ecmpower.scaling import ScalingModel, saturation_point

params_st = st.builds(PowerParameters, W0=st.floats(1.0, 100.0), W1=st.floats(0.0, 5.0),
                      W2=st.floats(0.05, 5.0))


def test_power_examples():
    p = PowerParameters(23.0, 0.0, 1.2)
    assert power(p, 2.7, 8) == pytest.approx(92.984)
    assert power(p, 2.7, 0) == 23.0
    assert power(p, 0.0, 8) == 23.0
    with pytest.raises(DomainError):
        power(p, 2.7, 9, cores=8)
    with pytest.raises(DomainError):
        power(p, 2.7, -1)


def test_parameter_validation():
    with pytest.raises(DomainError):
        PowerParameters(0.0, 0.1, 1.0)
    with pytest.raises(DomainError):
        PowerParameters(20.0, -0.1, 1.0)
    assert validate_params(PowerParameters(20.0, 0.1, 1.0)) == []
    assert len(validate_params(PowerParameters(20.0, 0.0, 0.0))) == 2


def test_optimal_frequency_examples():
    p = PowerParameters(23.0, 0.0, 1.2)
    fo = optimal_frequency(p, 8)
    assert fo.value == pytest.approx(math.sqrt(23 / 9.6)) and round(fo.value, 3) == 1.548
    grid = np.arange(0.5, 4.0, 0.001)
    e = energy_to_solution(p, 1.0, math.inf, 2.7, grid, 8)
    assert abs(grid[np.argmin(e)] - fo.value) <= 0.001
    assert optimal_frequency(p, 32).value == pytest.approx(fo.value / 2)
    assert optimal_frequency(p, 4).value > fo.value


def test_optimal_frequency_clamping():
    p = PowerParameters(23.0, 0.0, 1.2)
    fo = optimal_frequency(p, 1, (1.2, 2.7))
    assert fo.clamped and fo.value == 2.7 and fo.unclamped > 4
    fo = optimal_frequency(p, 8, (1.2, 2.7))
    assert not fo.clamped
    flat = optimal_frequency(PowerParameters(23.0, 0.1, 0.0), 8, (1.2, 2.7))
    assert flat.clamped and flat.value == 2.7 and math.isinf(flat.unclamped)
    with pytest.raises(DomainError):
        optimal_frequency(p, 0)


def test_closed_forms_by_hand():
    assert energy_at_fopt(PowerParameters(1.0, 0.0, 1.0), 1.0, 1.0, 1) == pytest.approx(2.0)
    assert performance_at_fopt(PowerParameters(2.0, 0.0, 2.0), 3.0, 1.5, 1) == pytest.approx(2.0)


def test_fopt_energy_decreases_with_cores():
    p = PowerParameters(23.0, 0.1, 1.2)
    e = [energy_at_fopt(p, 1e9, 2.7, t) for t in range(1, 9)]
    assert all(b < a for a, b in zip(e, e[1:]))
    perf = [performance_at_fopt(p, 1e9, 2.7, t) for t in (1, 4, 16)]
    assert perf[1] / perf[0] == pytest.approx(2.0) and perf[2] / perf[1] == pytest.approx(2.0)


def test_closed_form_identities_random():
    rng = random.Random(5)
    for _ in range(200):
        p = PowerParameters(rng.uniform(1, 100), rng.uniform(0, 5), rng.uniform(0.05, 5))
        P0, f0, t = rng.uniform(1, 1e3), rng.uniform(1, 4), rng.randint(1, 32)
        fo = optimal_frequency(p, t).value
        e = energy_to_solution(p, P0, math.inf, f0, fo, t)
        assert energy_at_fopt(p, P0, f0, t) == pytest.approx(e, rel=1e-12)
        assert performance_at_fopt(p, P0, f0, t) == pytest.approx(fo / f0 * t * P0, rel=1e-12)


def test_energy_regimes():
    p = PowerParameters(40.0, 0.1, 1.0)
    # below saturation: W0 dominant, doubling t nearly halves E
    e1, e2 = (energy_to_solution(p, 1.0, math.inf, 2.0, 1.0, t) for t in (2, 4))
    assert 0.5 < e2 / e1 < 0.6
    # above saturation: E is linear in t with slope (W1 f + W2 f^2)/Pmax
    es = [energy_to_solution(p, 1.0, 2.0, 2.0, 2.0, t) for t in (4, 5, 6)]
    assert es[1] - es[0] == pytest.approx((0.1 * 2 + 4.0) / 2.0)
    assert es[2] - es[1] == pytest.approx(es[1] - es[0])
    base = PowerParameters(40.0, 0.0, 0.0)
    assert energy_to_solution(base, 2.0, 5.0, 2.0, 2.0, 2, work=10) == pytest.approx(40.0 / 4.0 * 10)
    with pytest.raises(DomainError):
        energy_to_solution(p, 0.0, 1.0, 2.0, 2.0, 1)


def test_cost_is_energy_over_performance():
    p = PowerParameters(30.0, 0.2, 1.0)
    c = cost_energy_delay(p, 3.0, 10.0, 2.0, 1.5, 2)
    e = energy_to_solution(p, 3.0, 10.0, 2.0, 1.5, 2)
    assert c == pytest.approx(e / performance(3.0, 10.0, 2.0, 1.5, 2))


@given(params_st, st.floats(0.1, 100.0), st.floats(1.0, 4.0), st.floats(0.5, 3.0),
       st.integers(1, 16))
def test_sign_properties(p, P0, f0, f, t):
    h = 1e-6
    E = lambda ff, tt: energy_to_solution(p, P0, math.inf, f0, ff, tt)
    assert E(f, t + h) < E(f, t - h)
    C = lambda ff: cost_energy_delay(p, P0, math.inf, f0, ff, t)
    assert C(f + h) < C(f - h)
    Pmax = (f / f0) * (t / 2) * P0  # t is beyond saturation
    Es = lambda tt: energy_to_solution(p, P0, Pmax, f0, f, tt)
    assert Es(t + h) > Es(t - h)


def test_cost_above_saturation_grid():
    p = PowerParameters(25.0, 0.3, 1.0)
    m = ScalingModel(1.0, 3.0, 8, 2.0)
    a = energy_surface(p, m, [1.0, 1.25, 1.5, 1.75, 2.0], range(1, 9))
    i, j = np.unravel_index(np.argmin(a.C), a.C.shape)
    # C is minimized at the lowest clock, on the saturation point
    f = a.frequencies[i]
    assert f == 1.0
    assert a.cores[j] == saturation_point(m.at(f)).cores


def test_surface_degenerate_grid():
    p = PowerParameters(23.0, 0.1, 1.2)
    m = ScalingModel(2.0, 5.0, 8, 2.7)
    a = energy_surface(p, m, [2.0], [3], work=7)
    assert a.E.shape == (1, 1)
    assert a.E_min == pytest.approx(energy_to_solution(p, 2.0, 5.0, 2.7, 2.0, 3, work=7))
    assert len(list(a.rows())) == 1
    with pytest.raises(DomainError):
        energy_surface(p, m, [], [1])
    with pytest.raises(DomainError):
        energy_surface(p, m, [2.0], [9])


def _scalar_argmin(p, m, fs, ts):
    best = None
    for f in sorted(fs):
        for t in sorted(ts):
            e = (p.W0 + (p.W1 * f + p.W2 * f * f) * t) / min(f / m.base_frequency * t * m.P0, m.Pmax)
            if best is None or e < best[0]:
                best = (e, f, t)
    return best


def test_surface_argmin_matches_scalar_scan():
    rng = random.Random(9)
    fs = [1.2 + 0.1 * i for i in range(16)]
    for _ in range(100):
        p = PowerParameters(rng.uniform(5, 60), rng.uniform(0, 2), rng.uniform(0.1, 3))
        m = ScalingModel(rng.uniform(0.5, 2), rng.choice([math.inf, rng.uniform(1, 12)]), 8, 2.7)
        a = energy_surface(p, m, fs, range(1, 9))
        e, f, t = _scalar_argmin(p, m, a.frequencies, a.cores)
        assert a.argmin == (pytest.approx(f), t)
        assert a.E_min == pytest.approx(e, rel=1e-12)
        ts = saturation_point(m.at(a.argmin[0])).continuous
        if math.isinf(m.Pmax):
            assert a.argmin[1] == 8
        else:
            # the optimum core count brackets the continuous saturation point
            assert a.argmin[1] in (min(max(math.floor(ts), 1), 8), min(math.ceil(ts), 8))


def test_jacobi_like_surface(snb, kernels):
    p = load_params("sandy-bridge-example")
    m = ScalingModel.from_ecm(kernels["jacobi-2d"], snb)
    fs = [1.2 + 0.1 * i for i in range(16)]
    a = energy_surface(p, m, fs, range(1, 9), frequency_range=snb.frequency_range)
    assert a.argmin[1] == saturation_point(m.at(a.argmin[0])).cores
    # the saturation point moves to more cores as the clock goes down
    assert a.t_s[1.2] > a.t_s[2.7]
    assert all(a.t_s[x] >= a.t_s[y] for x, y in zip(a.frequencies, a.frequencies[1:]))


def test_serial_slow_clock_is_counterproductive(snb, kernels):
    p = load_params("sandy-bridge-example")
    m = ScalingModel.from_ecm(kernels["lbm-d3q19-avx"], snb)
    fo = optimal_frequency(p, 1).value
    assert 1.2 < fo
    e = lambda f: energy_to_solution(p, m.P0, m.Pmax, m.base_frequency, f, 1)
    assert e(1.2) > e(2.7)
    assert "race to idle" in race_to_idle_verdict(p, m, 2.7, 1)
    assert "saturated" in race_to_idle_verdict(p, m, 2.7, 8)
