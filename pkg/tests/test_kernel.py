import dataclasses

import pytest
from hypothesis import given, strategies as st

from ecmpower.errors import DomainError
from ecmpower.kernel import (KernelDescription, StreamSpec, code_balance, core_cycles,
                             data_volumes, memory_bytes_per_iteration)


def test_core_cycles(snb, kernels):
    assert core_cycles(kernels["schoenauer-triad"], snb) == 6  # loads 192/32 vs stores 64/16
    assert core_cycles(kernels["divide-triad-avx"], snb) == 88
    assert core_cycles(kernels["divide-triad-scalar"], snb) == 172
    assert core_cycles(kernels["lbm-d3q19-avx"], snb) == 432


def test_triad_volumes(snb, triad):
    assert data_volumes(triad, snb, "memory") == {"L1-L2": 5, "L2-L3": 5, "L3-Mem": 5}
    assert data_volumes(triad, snb, "L2") == {"L1-L2": 5, "L2-L3": 0, "L3-Mem": 0}
    assert data_volumes(triad, snb, "L1") == {"L1-L2": 0, "L2-L3": 0, "L3-Mem": 0}
    assert 5 * snb.line_size == 320


def test_lbm_volumes(snb, kernels):
    v = data_volumes(kernels["lbm-d3q19-avx"], snb, "memory")
    assert set(v.values()) == {57}
    assert v["L3-Mem"] * snb.line_size == 3648


def test_code_balance(kernels):
    assert code_balance(kernels["stream-triad"]) == 16.0
    assert code_balance(kernels["jacobi-2d"]) == 6.0
    one = KernelDescription("one", (StreamSpec("a", "load"),), 1.0)
    assert code_balance(one) == 8.0
    with pytest.raises(DomainError):
        code_balance(kernels["lbm-d3q19-avx"])


def test_unknown_level_and_pairing(snb, triad):
    with pytest.raises(DomainError):
        data_volumes(triad, snb, "L4")
    odd = triad.with_streams([StreamSpec("x", "load", bytes_per_scalar_iteration=4.0)])
    with pytest.raises(DomainError):
        data_volumes(odd, snb, "memory")


def test_update_stream_counts_both_ways(snb):
    k = KernelDescription("upd", (StreamSpec("a", "update"),), 1.0)
    assert data_volumes(k, snb, "memory")["L3-Mem"] == 2
    assert core_cycles(k, snb) == 4  # 64 B store at 16 B/cy dominates 64 B load at 32 B/cy


streams = st.lists(
    st.builds(StreamSpec, name=st.just("s"), kind=st.sampled_from(["load", "store", "update"]),
              count=st.integers(0, 5), bytes_per_scalar_iteration=st.sampled_from([8.0, 16.0]),
              nontemporal=st.booleans()),
    min_size=1, max_size=5)
levels = st.sampled_from(["L1", "L2", "L3", "memory"])


def _kernel(ss):
    return KernelDescription("rand", tuple(ss), 1.0)


@given(streams, levels)
def test_nontemporal_never_increases_traffic(snb, ss, level):
    nt = [dataclasses.replace(s, nontemporal=True) if s.kind == "store" else s for s in ss]
    a = data_volumes(_kernel(ss), snb, level)
    b = data_volumes(_kernel(nt), snb, level)
    assert all(b[k] <= a[k] for k in a)


@given(streams, streams, levels)
def test_volumes_additive(snb, a, b, level):
    va, vb = data_volumes(_kernel(a), snb, level), data_volumes(_kernel(b), snb, level)
    vab = data_volumes(_kernel(a + b), snb, level)
    assert vab == {k: va[k] + vb[k] for k in va}
    assert memory_bytes_per_iteration(_kernel(a + b)) == pytest.approx(
        memory_bytes_per_iteration(_kernel(a)) + memory_bytes_per_iteration(_kernel(b)))


@given(streams, st.data())
def test_core_cycles_monotone_in_counts(snb, ss, data):
    i = data.draw(st.integers(0, len(ss) - 1))
    more = list(ss)
    more[i] = dataclasses.replace(ss[i], count=ss[i].count + data.draw(st.integers(1, 3)))
    assert core_cycles(_kernel(more), snb) >= core_cycles(_kernel(ss), snb)
