from __future__ import annotations

import sys

import pytest

from regcomplex.catalog import default_catalog
from regcomplex.lattices import cube_box
from regcomplex.verify import RegionCache


@pytest.fixture(scope="session")
def catalog():
    return default_catalog()


@pytest.fixture(scope="session")
def cache(catalog):
    return RegionCache(catalog)


@pytest.fixture(scope="session")
def box3():
    return cube_box(-3, 3)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    mod = next((m for name, m in sys.modules.items() if name.endswith("test_acceptance")), None)
    lines = getattr(mod, "SUMMARY", None)
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(lines):
        terminalreporter.write_line(lines[n])
