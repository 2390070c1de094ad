import pytest

from mathieusub import kernels

ACCEPTANCE_RESULTS: dict[str, tuple[bool, str]] = {}


@pytest.fixture(scope="session", autouse=True)
def _compiled_kernels():
    # one-off JIT compilation must not count against runtime bounds
    kernels.warm_up()


@pytest.fixture(params=["numba", "numpy"] if kernels.HAS_NUMBA else ["numpy"])
def backend(request):
    with kernels.use_backend(request.param):
        yield request.param


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_RESULTS, key=lambda k: int(k.split()[0][1:])):
        ok, detail = ACCEPTANCE_RESULTS[key]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {key}: {detail}")
