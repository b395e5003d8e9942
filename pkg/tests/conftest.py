import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from redcx import fixtures as fx  # noqa: E402
from redcx.resolve import clear_memo  # noqa: E402

# filled by test_acceptance.py, one entry per criterion
ACCEPTANCE: dict = {}


@pytest.fixture(scope="session")
def gasharov():
    A = fx.gasharov_ring()
    return A, fx.gasharov_module(A)


@pytest.fixture(scope="session")
def ci():
    return fx.ci_ring()


@pytest.fixture(scope="session")
def xy():
    return fx.hypersurface_xy()


@pytest.fixture(scope="session")
def dual():
    return fx.dual_numbers()


@pytest.fixture
def fresh_memo():
    clear_memo()
    yield
    clear_memo()


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"criterion {key}: {'PASS' if ok else 'FAIL'}  {detail}")
