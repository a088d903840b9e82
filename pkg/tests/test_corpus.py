import time

import pytest

from bigcm.corpus import (
    DEFAULT_ENTRIES,
    cubic_cone,
    fedder_is_fpure,
    get_entry,
    polynomial_ring,
    segre_T,
    selftest,
)

from conftest import ring


def test_fedder_examples():
    t0 = time.perf_counter()
    assert fedder_is_fpure(get_entry("cubic-cone-7").ring)
    assert not fedder_is_fpure(get_entry("cubic-cone-2").ring)
    assert fedder_is_fpure(ring(5, "xy", ["x"]))
    assert time.perf_counter() - t0 < 5


def test_metadata():
    assert get_entry("cubic-cone-7").fpure == "fedder"
    assert get_entry("cubic-cone-2").fpure == "not-fedder"
    assert polynomial_ring(7, "xy").regular
    assert get_entry("segre-7").dim == 3


def test_bad_characteristics():
    with pytest.raises(ValueError):
        cubic_cone(3)
    with pytest.raises(ValueError):
        cubic_cone(4)
    with pytest.raises(ValueError):
        segre_T(5)
    with pytest.raises(KeyError):
        get_entry("torus-7")


@pytest.mark.parametrize("name", [n for n in DEFAULT_ENTRIES if n != "segre-7"])
def test_selftest_small_entries(name):
    result = selftest(get_entry(name))
    assert result and all(result.values()), result


def test_segre_selftest_without_evidence(segre):
    result = selftest(segre, frobenius_evidence=False)
    assert result == {"dim": True, "sops": True, "relations": True}


@pytest.mark.slow
def test_segre_selftest_with_evidence(segre):
    result = selftest(segre)
    assert result["frobenius_closed_parameter_ideals"]
