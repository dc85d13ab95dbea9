import pytest

from eprgame import kernels

KERNEL_NAMES = ("sym_sums", "omega", "ghz_prob", "w_prob", "ghz_dense", "w_dense")


@pytest.fixture(params=kernels.available_backends(), ids=lambda m: m.BACKEND)
def backend(request, monkeypatch):
    """Route every closed-form evaluation through one kernel backend."""
    for name in KERNEL_NAMES:
        monkeypatch.setattr(kernels, name, getattr(request.param, name))
    return request.param


ACCEPTANCE_RESULTS = {}


@pytest.fixture
def acceptance():
    """record(number, passed, detail): prints one PASS/FAIL line and keeps it for the summary."""

    def record(number, passed, detail):
        passed = bool(passed)
        ACCEPTANCE_RESULTS[number] = (passed, detail)
        print(f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {detail}")
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_RESULTS):
        passed, line = ACCEPTANCE_RESULTS[number]
        terminalreporter.write_line(f"[{'PASS' if passed else 'FAIL'}] criterion {number:2d}: {line}")
