import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bigcm.gb import (
    TrackedBasis,
    VectorPoly,
    buchberger,
    eliminate,
    is_groebner,
    normal_form,
    syzygies,
)
from bigcm.polycore import PolyRing, Polynomial, StructureError

S = PolyRing(7, ["x", "y"])
S3 = PolyRing(7, ["x", "y", "z"])
x, y = S.gens


def homogeneous(ring, degree, max_terms=3):
    n = ring.nvars

    def monos(d, k):
        if k == 1:
            yield (d,)
            return
        for a in range(d, -1, -1):
            for rest in monos(d - a, k - 1):
                yield (a,) + rest

    all_monos = list(monos(degree, n))
    return st.dictionaries(st.sampled_from(all_monos), st.integers(1, ring.p - 1), min_size=1, max_size=max_terms).map(
        lambda d: Polynomial(ring, d)
    )


def test_normal_form_examples():
    G = buchberger([x**2 - y, y**2])
    assert normal_form(x**4, G).is_zero()
    assert normal_form(S.one, buchberger([x, y])) == S.one
    assert normal_form(x**2 - y, G).is_zero()


def test_reduced_basis_examples():
    assert sorted(map(str, buchberger([x, y]).polys)) == ["x", "y"]
    G = buchberger([x**2 - y, y**2])
    leads = {g.leading_monomial() for g in G.polys}
    assert (2, 0) in leads and (0, 2) in leads
    assert is_groebner(G)
    assert len(buchberger([S.zero], ring=S)) == 0


def test_rank_mismatch():
    G = buchberger([VectorPoly([x, y])])
    with pytest.raises(StructureError):
        normal_form(VectorPoly([x]), G)


def test_syzygy_examples():
    (k,) = syzygies([x, y])
    assert k[0] * x + k[1] * y == S.zero
    tb = TrackedBasis(S, 2, [VectorPoly([y, S.zero])])
    assert tb.contains(VectorPoly([x * y, S.zero]))
    assert not tb.contains(VectorPoly([x, S.zero]))
    assert syzygies([S.one]) == []
    syz = syzygies([x, x])
    target = VectorPoly([S.one, -S.one])
    assert TrackedBasis(S, 2, syz).contains(target)


def test_lift_recovers_combination():
    gens = [VectorPoly([x, y]), VectorPoly([y, S.zero])]
    v = gens[0] * (x + 1) + gens[1] * y**2
    tb = TrackedBasis(S, 2, gens)
    coeffs = tb.lift(v)
    assert coeffs is not None
    combo = gens[0] * coeffs[0] + gens[1] * coeffs[1]
    assert combo == v
    assert tb.lift(VectorPoly([S.one, S.zero])) is None


def test_eliminate_examples():
    A = PolyRing(7, ["x", "a", "b"])
    xa, a, b = A.gens
    out = eliminate([a - xa**2, b - xa**3], ["a", "b"])
    assert normal_form(a**3 - b**2, buchberger(out)).is_zero()
    assert eliminate([x], ["y"]) == []
    kept = eliminate([x**2 - y, y**2], ["x", "y"])
    assert sorted(map(str, kept)) == sorted(map(str, buchberger([x**2 - y, y**2]).polys))


@settings(max_examples=40, deadline=None)
@given(st.lists(homogeneous(S3, 2), min_size=1, max_size=3))
def test_generators_reduce_to_zero(gens):
    G = buchberger(gens)
    assert is_groebner(G)
    for g in gens:
        assert normal_form(g, G).is_zero()


@settings(max_examples=30, deadline=None)
@given(st.lists(homogeneous(S3, 2), min_size=1, max_size=3), homogeneous(S3, 3, max_terms=4))
def test_truncated_basis_decides_low_degrees(gens, u):
    full = buchberger(gens)
    part = buchberger(gens, degree_limit=3)
    assert normal_form(u, full).is_zero() == normal_form(u, part).is_zero()


@settings(max_examples=30, deadline=None)
@given(st.lists(homogeneous(S3, 1), min_size=1, max_size=2), st.lists(homogeneous(S3, 1), min_size=1, max_size=2))
def test_reduced_basis_is_unique(gens, others):
    G1 = buchberger(gens + others)
    G2 = buchberger(list(reversed(others)) + gens)
    assert sorted(map(str, G1.polys)) == sorted(map(str, G2.polys))
