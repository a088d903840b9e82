import pytest

from bigcm.closure import FrobeniusClosure, IdentityClosure
from bigcm.gb import VectorPoly
from bigcm.phantom import NotInjective, build_phantom_presentation, check_diagram, check_notbad, is_phantom
from bigcm.ringmod import FPModule, ModuleMap


def inclusion(R, M, image):
    return ModuleMap(FPModule.free(R, 1), M, [VectorPoly([R.poly_ring(c) for c in image])])


def test_identity_map_has_no_relations(poly_xy):
    F = FPModule.free(poly_xy, 1)
    pres = build_phantom_presentation(inclusion(poly_xy, F, ["1"]))
    assert pres.m == 0 and pres.n == 1
    assert pres.x_vec is None
    assert is_phantom(pres, IdentityClosure())
    assert check_notbad(pres)
    assert all(check_diagram(pres).values())


def test_split_inclusion_is_phantom(poly_xy):
    F2 = FPModule.free(poly_xy, 2)
    pres = build_phantom_presentation(inclusion(poly_xy, F2, ["1", "0"]))
    assert pres.n == 2
    assert all(c.is_zero() for c in pres.nu1)
    assert is_phantom(pres, IdentityClosure())
    assert check_notbad(pres)


def test_nonsplit_inclusion_is_not_phantom(poly_xy):
    # M = R^2 / (0, x), alpha(1) = (x, 1): injective, but 1 * x lies in R x only through w2
    M = FPModule(poly_xy, 2, [VectorPoly([poly_xy.poly_ring.zero, poly_xy.poly_ring("x")])], [-1, 0])
    alpha = inclusion(poly_xy, M, ["x", "1"])
    pres = build_phantom_presentation(alpha)
    assert pres.m >= 1
    assert not is_phantom(pres, IdentityClosure())
    assert not is_phantom(pres, FrobeniusClosure(1))
    assert all(check_diagram(pres).values())


def test_notbad_detects_maximal_ideal(poly_xy):
    F = FPModule.free(poly_xy, 1)
    good = build_phantom_presentation(inclusion(poly_xy, F, ["1"]))
    bad = build_phantom_presentation(inclusion(poly_xy, FPModule.free(poly_xy, 1, [-1]), ["x"]))
    assert check_notbad(good)
    assert not check_notbad(bad)


def test_non_injective_map_is_rejected(poly_xy):
    Q = FPModule.cyclic(poly_xy, [poly_xy.poly_ring("x")])
    with pytest.raises(NotInjective):
        build_phantom_presentation(inclusion(poly_xy, Q, ["1"]))


def test_generator_order_gives_valid_presentations(cone7):
    S = cone7.poly_ring
    M = FPModule(cone7, 3, [VectorPoly([S("y"), S("x"), S.zero]), VectorPoly([S("z"), S.zero, S("x")])])
    alpha = inclusion(cone7, M, ["x", "0", "0"])
    for order in ([0, 1, 2], [2, 1, 0]):
        pres = build_phantom_presentation(alpha, order=order)
        assert all(check_diagram(pres).values())
