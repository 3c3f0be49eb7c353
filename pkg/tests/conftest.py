import pytest

from ecmpower import load_kernel, load_machine


@pytest.fixture(scope="session")
def snb():
    return load_machine("sandy-bridge-ep")


@pytest.fixture(scope="session")
def triad():
    return load_kernel("schoenauer-triad")


@pytest.fixture(scope="session")
def kernels():
    names = ["schoenauer-triad", "stream-triad", "divide-triad-avx", "divide-triad-scalar",
             "jacobi-2d", "lbm-d3q19-avx", "lbm-d3q19-scalar"]
    return {n: load_kernel(n) for n in names}


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
