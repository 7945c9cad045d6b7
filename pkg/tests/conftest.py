import pytest

from oscal import susy
from oscal.opkernel import UnitSystem

_ACCEPTANCE = {}

#: a non-natural unit system, to catch misplaced constants
ODD_UNITS = UnitSystem(hbar=1.3, m0=2.0, omega=0.7, c=3.0)


@pytest.fixture
def acceptance():
    """Record one pass/fail line per acceptance criterion."""

    def record(number, ok, detail):
        _ACCEPTANCE[number] = (bool(ok), detail)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        ok, detail = _ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")


@pytest.fixture(scope="session")
def bundle1d():
    return susy.build_susy_1d(32)


@pytest.fixture(scope="session")
def bundle1d_odd():
    return susy.build_susy_1d(24, ODD_UNITS)


@pytest.fixture(scope="session")
def bundle3d():
    return susy.build_susy_3d(6)


@pytest.fixture(scope="session")
def bundle3d_odd():
    return susy.build_susy_3d(6, ODD_UNITS)
