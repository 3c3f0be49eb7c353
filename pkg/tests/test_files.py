import pytest

from ecmpower.errors import InputError
from ecmpower.files import (bundled_names, dump_params, load_kernel, load_machine, parse_kernel,
                            parse_machine, parse_measurements, parse_params)
from ecmpower.power import PowerParameters

MACHINE = """\
name: toy
cores: 4
base_frequency: 2.0
frequency_range: [1.0, 2.0]
cache_levels:
  - {name: L1, line_size: 64, bus_width_to_upper: 32}
  - {name: L2, line_size: 64, bus_width_to_upper: 32}
memory_bandwidth: 20.0
peak_flops_per_cycle_per_core: 4
load_width: 16
store_width: 16
"""


def test_bundled_files_load():
    assert "sandy-bridge-ep" in bundled_names("machines")
    assert len(bundled_names("kernels")) == 7
    for name in bundled_names("kernels"):
        assert load_kernel(name).name == name
    m = load_machine("sandy-bridge-ep")
    assert m.bandwidth_at(2.7) == 36.0


def test_parse_machine():
    m = parse_machine(MACHINE)
    assert m.cores == 4 and m.level_names == ("L1", "L2", "memory")


def test_unknown_key_names_key_and_line():
    with pytest.raises(InputError) as e:
        parse_machine(MACHINE + "turbo: true\n", "toy.yml")
    assert "turbo" in str(e.value) and "toy.yml:12" in str(e.value)


def test_duplicate_and_invalid_values():
    with pytest.raises(InputError, match="duplicate"):
        parse_machine(MACHINE + "cores: 8\n")
    with pytest.raises(InputError, match="cores"):
        parse_machine(MACHINE.replace("cores: 4", "cores: 0"))
    with pytest.raises(InputError):
        parse_machine("- just a list\n")
    with pytest.raises(InputError):
        load_machine("no-such-machine")


def test_kernel_table_override():
    text = """\
name: k
streams:
  - {name: a, kind: load}
flops_per_scalar_iteration: 1
memory_bandwidth_override: {2.7: 32.3, 1.6: 30.6}
core_cycles: {supplied: 12, provenance: hand count}
"""
    k = parse_kernel(text)
    assert k.memory_bandwidth_override == ((1.6, 30.6), (2.7, 32.3))
    assert k.supplied_core_cycles == 12 and k.core_cycles_provenance == "hand count"
    with pytest.raises(InputError) as e:
        parse_kernel(text.replace("kind: load", "kind: loda"), "k.yml")
    assert "k.yml:" in str(e.value)


def test_params_round_trip():
    p = PowerParameters(23.5, 0.1, 1.2)
    assert parse_params(dump_params(p, "x", "note")) == p
    with pytest.raises(InputError):
        parse_params("W0: 1\nW1: 2\n")


def test_measurements():
    s = parse_measurements("# code: dgemm\n# smt: yes\nfrequency_ghz,cores,power_w,performance\n"
                           "1.2,8,40.5,10\n2.0,8,60,\n")
    assert s.code == "dgemm" and s.smt
    assert s.points[0].performance == 10 and s.points[1].performance is None


@pytest.mark.parametrize("text,line", [
    ("freq,cores,power_w\n1.2,8,40\n", 1),
    ("frequency_ghz,cores,power_w\n1.2,8,40\n1,3,x\n", 3),
    ("frequency_ghz,cores,power_w\n1.2,8\n", 2),
    ("# c\nfrequency_ghz,cores,power_w\n1.2,0,40\n", 3),
    ("frequency_ghz,cores,power_w\n1.2,8,-4\n", 2),
    ("frequency_ghz,cores,power_w\n1,2;5,8,40\n", 2),
])
def test_measurement_errors_carry_line(text, line):
    with pytest.raises(InputError) as e:
        parse_measurements(text, "m.csv")
    assert f"m.csv:{line}:" in str(e.value)
