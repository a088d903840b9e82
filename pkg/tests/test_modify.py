import pytest

from bigcm.closure import FrobeniusClosure, FullClosure, IdentityClosure
from bigcm.gb import VectorPoly
from bigcm.modify import (
    ParameterRelation,
    find_parameter_relation,
    modify,
    primed_presentation_exact,
    run_chain,
    trivialized,
)
from bigcm.phantom import build_phantom_presentation
from bigcm.ringmod import FPModule, ModuleMap


def test_regular_sequence_has_no_relation(poly_xyz):
    F = FPModule.free(poly_xyz, 1)
    assert find_parameter_relation(F, poly_xyz.poly_ring.gens) is None


def test_segre_relation(segre):
    T = segre.ring
    F = FPModule.free(T, 1)
    rel = find_parameter_relation(F, segre.sops[0])
    assert rel is not None and rel.k == 2
    assert rel.describe() == {"sop": ["b", "d", "a + 6*e"], "u": "c*g", "us": ["6*g^2", "c^2"]}
    assert rel.holds_in(F)


def test_relation_on_torsion_module(poly_xy):
    M = FPModule.cyclic(poly_xy, [poly_xy.poly_ring("x")])
    rel = find_parameter_relation(M, [poly_xy.poly_ring("x")])
    assert rel is not None
    assert str(rel.u[0]) == "1" and rel.us == []


def test_modify_bookkeeping(segre):
    T = segre.ring
    F = FPModule.free(T, 1)
    rel = find_parameter_relation(F, segre.sops[0])
    Mp, beta = modify(F, rel)
    assert Mp.ngens == F.ngens + 2
    assert len(Mp.relations) == len(F.relations) + 1
    assert trivialized(Mp, beta, rel)
    assert beta.is_injective()


def test_modify_rejects_false_relation(poly_xy):
    F = FPModule.free(poly_xy, 1)
    x, y = poly_xy.poly_ring.gens
    bogus = ParameterRelation((x, y), VectorPoly([poly_xy.poly_ring.one]), [VectorPoly([poly_xy.poly_ring.zero])])
    with pytest.raises(ValueError):
        modify(F, bogus)


def test_primed_presentation_exactness(segre):
    T = segre.ring
    F = FPModule.free(T, 1)
    rel = find_parameter_relation(F, segre.sops[0])
    alpha = ModuleMap(F, F, [VectorPoly([T.poly_ring.one])])
    pres = build_phantom_presentation(alpha, rel)
    Mp, beta = modify(F, rel)
    assert primed_presentation_exact(pres, Mp, beta)
    # the first column is not implied by the others
    pres.nu1 = pres.nu1[1:]
    assert not primed_presentation_exact(pres, Mp, beta)


def test_koszul_chain(poly_xyz):
    S = poly_xyz.poly_ring
    x, y, z = S.gens
    seed = ParameterRelation((x, y), VectorPoly([x]), [VectorPoly([y])])
    chain = run_chain(poly_xyz, [x, y, z], 1, IdentityClosure(), seed_relation=seed)
    assert chain.ok, chain.to_json()
    assert len(chain.stages) == 2
    first = chain.stages[0].report
    assert first["trivialized"] and first["next_diagram_exact"] and first["composition_exact"]
    assert all(s.report["phantom"] and s.report["notbad"] for s in chain.stages)


def test_regular_chain_terminates(poly_xyz):
    chain = run_chain(poly_xyz, poly_xyz.poly_ring.gens, 3, IdentityClosure())
    assert chain.terminated and len(chain.stages) == 1
    assert chain.stages[0].report["relation_used"] is None
    with pytest.raises(ValueError):
        run_chain(poly_xyz, poly_xyz.poly_ring.gens, 0, IdentityClosure())


def test_unreliable_tracking(poly_xy):
    chain = run_chain(poly_xy, poly_xy.poly_ring.gens, 1, FullClosure())
    assert chain.phantom_tracking == "unreliable"


@pytest.mark.slow
def test_segre_chain_under_frobenius(segre):
    chain = run_chain(segre.ring, segre.sops[0], 1, FrobeniusClosure(1))
    first = chain.stages[0].report
    assert first["injective"] and first["diagram_exact"] and first["trivialized"]
    assert first["relation_used"]["u"] == "c*g"
    assert chain.to_json()["closure"] == "frobenius:e_max=1"
