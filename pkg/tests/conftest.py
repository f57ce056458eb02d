import pytest

from xyswap.curve import catalog_curve, swap_roles
from xyswap.recursion import CorrelatorTable
from xyswap.swap import SwapContext

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def airy():
    return CorrelatorTable(catalog_curve("airy"))


@pytest.fixture(scope="session")
def airy_swapped():
    return CorrelatorTable(swap_roles(catalog_curve("airy")))


@pytest.fixture(scope="session")
def two_sided():
    return CorrelatorTable(catalog_curve("two-sided"))


@pytest.fixture(scope="session")
def two_sided_swapped():
    return CorrelatorTable(swap_roles(catalog_curve("two-sided")))


@pytest.fixture(scope="session")
def gaussian():
    return CorrelatorTable(catalog_curve("gaussian"))


@pytest.fixture(scope="session")
def airy_ctx(airy):
    return SwapContext(airy)


@pytest.fixture(scope="session")
def reverse_ctx(airy_swapped):
    return SwapContext(airy_swapped)


@pytest.fixture(scope="session")
def two_sided_ctx(two_sided):
    return SwapContext(two_sided)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
