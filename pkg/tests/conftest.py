import pytest

from bigcm.corpus import get_entry
from bigcm.polycore import PolyRing
from bigcm.ringmod import FPModule, PresentedRing


@pytest.fixture(scope="session")
def poly_xy():
    return get_entry("poly-7-xy").ring


@pytest.fixture(scope="session")
def poly_xyz():
    return get_entry("poly-7-xyz").ring


@pytest.fixture(scope="session")
def cone7():
    return get_entry("cubic-cone-7").ring


@pytest.fixture(scope="session")
def cone2():
    return get_entry("cubic-cone-2").ring


@pytest.fixture(scope="session")
def segre():
    return get_entry("segre-7")


@pytest.fixture
def free1():
    def make(R):
        return FPModule.free(R, 1)

    return make


def ring(p, names, rels=()):
    S = PolyRing(p, list(names))
    return PresentedRing(S, [S(r) for r in rels])


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
