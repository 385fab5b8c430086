import numpy as np
import pytest

from slowlight.model import PhysicalParams, SpectralConfig


@pytest.fixture
def params():
    return PhysicalParams()


@pytest.fixture
def spectral_up():
    return SpectralConfig(4.1j)


@pytest.fixture
def spectral_down():
    return SpectralConfig(-4.1j)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


_ACCEPTANCE_LINES = []


@pytest.fixture
def report():
    """Record one PASS/FAIL line per acceptance criterion; returns the flag."""

    def _report(label, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'} {label}: {detail}"
        print(line)
        _ACCEPTANCE_LINES.append(line)
        return ok

    return _report


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
