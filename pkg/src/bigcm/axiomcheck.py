"""Falsification harness for closure-operation axioms.

Each check returns an :class:`AxiomReport`. A failing report always carries a
witness element that can be re-verified with plain membership calls.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Sequence

from bigcm.closure import SEMI, ClosureOperation, TightWitness, UndecidableClosure
from bigcm.gb import VectorPoly, as_vector
from bigcm.polycore import Polynomial, format_poly
from bigcm.ringmod import FPModule, ModuleMap, PresentedRing, Submodule, _monomials_of_degree, is_partial_sop

AXIOMS = (1, 2, 3, 4, 5, 6, 7)
LEMMA_PARTS = ("a", "b", "c", "d", "e")


@dataclass
class AxiomInstance:
    """Hypotheses for one round of checks: N, N2 inside M, a map f out of M,
    and (for the colon axiom) v, the parameters and the ideal J."""

    instance_id: str
    ring: PresentedRing
    M: FPModule
    N: Submodule
    N2: Submodule | None = None
    sub: Submodule | None = None  # N' contained in N
    f: ModuleMap | None = None
    v: VectorPoly | None = None
    sop: tuple = ()
    J: tuple = ()

    def __post_init__(self):
        rels = self.M.zero_submodule
        if not rels.is_subset(self.N):
            raise ValueError("N must contain the relations of M (preimage form)")
        if self.sub is not None and not self.sub.is_subset(self.N):
            raise ValueError("N' must be contained in N")
        if self.f is not None and self.f.source is not self.M:
            raise ValueError("f must start at M")


@dataclass
class AxiomReport:
    closure: str
    instance_id: str
    axiom: str
    status: str  # pass | fail | skipped | consistent
    witness: str | None = None
    reason: str | None = None
    degree_bound: int | None = None
    elapsed_ms: float | None = None
    detail: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.status in ("pass", "skipped", "consistent")

    def to_json(self, timing: bool = False) -> dict:
        out = {
            "closure": self.closure,
            "instance_id": self.instance_id,
            "axiom": self.axiom,
            "status": self.status,
        }
        if self.witness is not None:
            out["witness"] = self.witness
        if self.reason is not None:
            out["reason"] = self.reason
        out["degree_bound"] = self.degree_bound
        out["elapsed_ms"] = round(self.elapsed_ms, 3) if timing and self.elapsed_ms is not None else None
        return out


def format_vector(v) -> str:
    v = as_vector(v)
    if v.rank == 1:
        return format_poly(v[0])
    return "[" + ", ".join(format_poly(c) for c in v) + "]"


def _sort_key(v: VectorPoly):
    return (v.degree(), format_vector(v))


class _Fail(Exception):
    def __init__(self, witness, reason):
        self.witness = witness
        self.reason = reason


def _require_in(cl, gens, N, M, reason):
    """Every generator must lie in the closure of N (exact membership)."""
    for g in sorted(gens, key=_sort_key):
        if not cl.contains(g, N, M):
            raise _Fail(g, reason)


def _require_sub(gens, S: Submodule, reason):
    for g in sorted(gens, key=_sort_key):
        if not S.contains(g):
            raise _Fail(g, reason)


def _run(cl: ClosureOperation, inst_id: str, label: str, body) -> AxiomReport:
    t0 = time.perf_counter()
    rep = AxiomReport(cl.spec(), inst_id, label, "pass")
    if cl.capability == SEMI:
        rep.status = "skipped"
        rep.reason = "semi-decision closure cannot decide membership"
        return rep
    try:
        bound = body()
        rep.degree_bound = bound
    except _Fail as exc:
        rep.status = "fail"
        rep.witness = format_vector(exc.witness)
        rep.reason = exc.reason
        rep.detail["witness_vector"] = exc.witness
    except UndecidableClosure as exc:
        rep.status = "skipped"
        rep.reason = str(exc)
    rep.elapsed_ms = (time.perf_counter() - t0) * 1000
    return rep


def _bound_of(*subs):
    bounds = [s.degree_bound for s in subs if getattr(s, "degree_bound", None) is not None]
    return max(bounds) if bounds else None


# ---------------------------------------------------------------- axioms


def _axiom1(cl, inst):
    C = cl.closure(inst.N, inst.M)
    _require_sub(inst.N.generators, C, "generator of N missing from its closure")
    _require_in(cl, C.generators, inst.N, inst.M, "closure generator fails the membership rule")
    return _bound_of(C)


def _axiom2(cl, inst):
    C = cl.closure(inst.N, inst.M)
    CC = cl.closure(C, inst.M, C.degree_bound)
    _require_sub(CC.generators, C, "closure of the closure is strictly larger")
    return _bound_of(C, CC)


def _axiom3(cl, inst):
    L = inst.N + (inst.N2 if inst.N2 is not None else inst.N)
    C = cl.closure(inst.N, inst.M)
    _require_in(cl, C.generators, L, inst.M, "closure of the smaller submodule escapes the larger closure")
    return _bound_of(C)


def _axiom4(cl, inst):
    f = inst.f
    if f is None:
        raise UndecidableClosure("instance has no map")
    C = cl.closure(inst.N, inst.M)
    fN = f.image(inst.N)
    images = [f.apply(g) for g in C.generators]
    _require_in(cl, images, fN, f.target, "image of a closure element is not in the closure of the image")
    return _bound_of(C)


def _axiom5(cl, inst):
    N, M = inst.N, inst.M
    C = cl.closure(N, M)
    if not C.is_subset(N):
        raise UndecidableClosure("hypothesis N closed does not hold on this instance")
    Q = M.quotient(N)
    Z = cl.closure(Q.zero_submodule, Q)
    _require_sub(Z.generators, Q.zero_submodule, "closure of zero in M/N is nonzero")
    return _bound_of(C, Z)


def _axiom6(cl, inst):
    R = inst.ring
    F = FPModule.free(R, 1)
    m = F.submodule(list(R.gens))
    Cm = cl.closure(m, F)
    _require_sub(Cm.generators, m, "closure of the maximal ideal is larger")
    zero = F.zero_submodule
    Cz = cl.closure(zero, F)
    _require_sub(Cz.generators, zero, "closure of 0 in R is nonzero")
    return _bound_of(Cm, Cz)


def _surjective_lift(f: ModuleMap):
    """M (+) R -> R/J, (m, r) -> f(m) + r, as in the non-surjective case of
    generalized colon-capturing. Returns (phi, inclusion of M)."""
    M, target = f.source, f.target
    ext = M.direct_sum(FPModule.free(M.ring, 1, [target.degrees[0]]))
    S = M.ring.poly_ring
    images = list(f.images) + [VectorPoly([S.one])]
    phi = ModuleMap(ext, target, images)
    return phi


def _axiom7(cl, inst):
    f, v, J = inst.f, inst.v, list(inst.J)
    if f is None or v is None or not inst.sop:
        raise UndecidableClosure("instance lacks the colon-axiom data")
    R = inst.ring
    x_last = inst.sop[len(J)]
    target = f.target
    if not target.equal_elements(f.apply(v), VectorPoly([x_last])):
        raise ValueError("f(v) must equal the next parameter modulo J")
    M = inst.M
    n = M.ngens
    lifted = not f.is_surjective()
    if lifted:
        phi = _surjective_lift(f)
        Mx = phi.source
        vx = VectorPoly(list(v) + [R.zero])
    else:
        phi, Mx, vx = f, M, as_vector(v)
    Rv = Mx.submodule([vx])
    Jv = Mx.submodule([vx * j for j in J])
    C = cl.closure(Rv, Mx)
    meet = C.intersect(phi.kernel())
    gens = sorted(meet.generators, key=_sort_key)
    for g in gens:
        if not cl.contains(g, Jv, Mx):
            w = VectorPoly(list(g)[:n]) if lifted else g
            raise _Fail(w, "element of (Rv)^cl meeting ker f is outside (Jv)^cl")
    return _bound_of(C)


_AXIOM_FUNCS = {1: _axiom1, 2: _axiom2, 3: _axiom3, 4: _axiom4, 5: _axiom5, 6: _axiom6, 7: _axiom7}


def check_axiom(cl: ClosureOperation, inst: AxiomInstance, k: int) -> AxiomReport:
    if k not in _AXIOM_FUNCS:
        raise ValueError(f"axiom index must be 1..7, got {k}")
    return _run(cl, inst.instance_id, f"axiom{k}", lambda: _AXIOM_FUNCS[k](cl, inst))


# ---------------------------------------------------------------- lemma parts


def _lemma_a(cl, inst):
    N, M = inst.N, inst.M
    Np = inst.sub if inst.sub is not None else M.zero_submodule
    Mq = M.quotient(Np)
    Nq = Mq.submodule(N.generators)
    C = cl.closure(N, M)
    Cq = cl.closure(Nq, Mq)
    _require_in(cl, C.generators, Nq, Mq, "closure element of N does not survive in M/N'")
    _require_in(cl, Cq.generators, N, M, "closure element in M/N' does not lift")
    return _bound_of(C, Cq)


def _lemma_b(cl, inst):
    M, N = inst.M, inst.N
    N2 = inst.N2 if inst.N2 is not None else N
    MM = M.direct_sum(M)
    n = M.ngens
    S = M.ring.poly_ring
    zero = [S.zero] * n
    left = [VectorPoly(list(g) + zero) for g in N.generators]
    right = [VectorPoly(zero + list(g)) for g in N2.generators]
    NN = MM.submodule(left + right)
    C = cl.closure(NN, MM)
    C1 = cl.closure(N, M)
    C2 = cl.closure(N2, M)
    split = MM.submodule(
        [VectorPoly(list(g) + zero) for g in C1.generators] + [VectorPoly(zero + list(g)) for g in C2.generators]
    )
    _require_sub(C.generators, split, "closure of a direct sum is larger than the sum of closures")
    _require_in(cl, split.generators, NN, MM, "sum of closures is not inside the closure of the sum")
    return _bound_of(C, C1, C2)


def _lemma_c(cl, inst):
    N1, M = inst.N, inst.M
    N2 = inst.N2 if inst.N2 is not None else N1
    meet = N1.intersect(N2)
    C = cl.closure(meet, M)
    for g in sorted(C.generators, key=_sort_key):
        if not (cl.contains(g, N1, M) and cl.contains(g, N2, M)):
            raise _Fail(g, "closure of an intersection escapes an individual closure")
    return _bound_of(C)


def _lemma_d(cl, inst):
    M = inst.M
    C1 = cl.closure(inst.N, M)
    C2 = cl.closure(inst.N2 if inst.N2 is not None else inst.N, M)
    meet = C1.intersect(C2)
    C = cl.closure(meet, M, max(x for x in (C1.degree_bound, C2.degree_bound, 0) if x is not None))
    _require_sub(C.generators, meet, "intersection of closed submodules is not closed")
    return _bound_of(C1, C2, C)


def _lemma_e(cl, inst):
    M, N1 = inst.M, inst.N
    N2 = inst.N2 if inst.N2 is not None else N1
    lhs = cl.closure(N1 + N2, M)
    C1, C2 = cl.closure(N1, M), cl.closure(N2, M)
    inner = C1 + C2
    _require_in(cl, lhs.generators, inner, M, "closure of a sum escapes the closure of the sum of closures")
    _require_in(cl, inner.generators, N1 + N2, M, "sum of closures escapes the closure of the sum")
    return _bound_of(lhs, C1, C2)


_LEMMA_FUNCS = {"a": _lemma_a, "b": _lemma_b, "c": _lemma_c, "d": _lemma_d, "e": _lemma_e}
LEMMA_LABELS = {
    "a": "lemma-quotient",
    "b": "lemma-direct-sum",
    "c": "lemma-intersection",
    "d": "lemma-closed-intersection",
    "e": "lemma-sum",
}


def check_lemma12(cl: ClosureOperation, insts, parts: Sequence[str] = LEMMA_PARTS) -> list[AxiomReport]:
    if isinstance(insts, AxiomInstance):
        insts = [insts]
    out = []
    for inst in insts:
        for part in parts:
            out.append(_run(cl, inst.instance_id, LEMMA_LABELS[part], lambda: _LEMMA_FUNCS[part](cl, inst)))
    return out


# ---------------------------------------------------------------- colon capturing


def colon_instance(R: PresentedRing, sop: Sequence[Polynomial], k: int, instance_id: str | None = None) -> AxiomInstance:
    """M = R, v = 1, J = (x_1..x_k), f = multiplication by x_{k+1} into R/J."""
    S = R.poly_ring
    sop = tuple(S(x) for x in sop)
    J = sop[:k]
    M = FPModule.free(R, 1)
    target = FPModule.cyclic(R, J) if J else FPModule.free(R, 1)
    target = FPModule(R, 1, target.relations, [-sop[k].degree()])
    f = ModuleMap(M, target, [VectorPoly([sop[k]])])
    return AxiomInstance(
        instance_id or f"colon-k{k}", R, M, M.zero_submodule, f=f, v=VectorPoly([S.one]), sop=sop, J=J
    )


def check_colon_capturing(cl: ClosureOperation, R: PresentedRing, sop: Sequence[Polynomial], prefix: str = "") -> list[AxiomReport]:
    """For each k: (x_1..x_k) : x_{k+1} inside the closure of (x_1..x_k), and
    the colon axiom through the M (+) R construction."""
    S = R.poly_ring
    sop = [S(x) for x in sop]
    if not is_partial_sop(R, sop):
        raise ValueError("not a partial system of parameters")
    F = FPModule.free(R, 1)
    out = []
    for k in range(len(sop)):
        inst_id = f"{prefix}k={k}"
        J = F.submodule(sop[:k])
        colon = J.colon(sop[k])
        if cl.capability == SEMI:
            out.append(_witness_report(cl, inst_id, colon, J, F))
        else:

            def body(J=J, colon=colon):
                C = cl.closure(J, F)
                _require_in(cl, colon.generators, J, F, "colon element outside the closure of the parameter ideal")
                return _bound_of(C)

            out.append(_run(cl, inst_id, "colon-capture", body))
        inst = colon_instance(R, sop, k, inst_id)
        out.append(_run(cl, inst_id, "axiom7-lifted", lambda inst=inst: _axiom7(cl, inst)))
    return out


def _witness_report(cl: TightWitness, inst_id, colon: Submodule, J: Submodule, F: FPModule) -> AxiomReport:
    t0 = time.perf_counter()
    rep = AxiomReport(cl.spec(), inst_id, "colon-capture", "consistent")
    for g in sorted(colon.generators, key=_sort_key):
        verdict = cl.verdict(g, J, F)
        if not verdict.consistent:
            rep.status = "fail"
            rep.witness = format_vector(g)
            rep.reason = f"witness check {verdict}"
            break
    else:
        rep.reason = f"consistent({cl.e_max}) on every colon generator"
    rep.elapsed_ms = (time.perf_counter() - t0) * 1000
    return rep


# ---------------------------------------------------------------- instance generation


def _random_form(rng: random.Random, R: PresentedRing, d: int) -> Polynomial:
    S = R.poly_ring
    if d < 0:
        return S.zero
    monos = list(_monomials_of_degree(S.nvars, d))
    terms = {}
    for m in rng.sample(monos, min(len(monos), rng.randint(1, 3))):
        c = rng.randrange(1, S.p)
        terms[m] = c
    return R.reduce(Polynomial(S, terms))


def _random_vector(rng, R, rank, d) -> VectorPoly:
    S = R.poly_ring
    comps = [_random_form(rng, R, d) if rng.random() < 0.7 else S.zero for _ in range(rank)]
    if all(c.is_zero() for c in comps):
        comps[rng.randrange(rank)] = _random_form(rng, R, d)
    return VectorPoly(comps)


def gen_instances(R: PresentedRing, seed: int = 1, count: int = 1, degree_bound: int = 2, max_rank: int = 2) -> list[AxiomInstance]:
    """Deterministic pseudorandom graded instances reproducible from ``seed``.

    Each instance has M of rank <= max_rank (free, or with one random
    homogeneous relation), two submodules N, N2 generated in degrees
    <= degree_bound, a submodule N' of N and a graded map f: M -> (M/N2)(-a)
    given by multiplication with a form of degree a.
    """
    if count < 1:
        raise ValueError("count must be at least 1")
    if degree_bound < 0:
        raise ValueError("degree_bound must be non-negative")
    rng = random.Random(seed)
    out = []
    for idx in range(count):
        rank = 1 if degree_bound == 0 else rng.randint(1, max_rank)
        rels = []
        if degree_bound > 0 and rng.random() < 0.4:
            rels.append(_random_vector(rng, R, rank, rng.randint(1, degree_bound)))
        M = FPModule(R, rank, rels)

        def rand_degree():
            # constants make the submodule everything; keep them rare
            if degree_bound == 0 or rng.random() < 0.1:
                return 0
            return rng.randint(1, degree_bound)

        def rand_sub():
            ngen = 0 if rng.random() < 0.1 else rng.randint(1, 3)
            return M.submodule([_random_vector(rng, R, rank, rand_degree()) for _ in range(ngen)])

        N = rand_sub()
        N2 = rand_sub()
        S = R.poly_ring
        if N.generators and rng.random() < 0.7:
            g = rng.choice(N.generators)
            mult = _random_form(rng, R, rng.randint(0, 1)) if degree_bound else S.one
            sub = M.submodule([g * mult])
        else:
            sub = M.zero_submodule
        a = rng.randint(0, min(1, degree_bound))
        r = _random_form(rng, R, a)
        if r.is_zero():
            r = S.one
            a = 0
        W = FPModule(R, rank, M.relations + N2.generators, [-a] * rank)
        f = ModuleMap(M, W, [M.unit(j) * r for j in range(rank)])
        out.append(
            AxiomInstance(f"{R.name}-s{seed}-{idx}", R, M, N, N2=N2, sub=sub, f=f)
        )
    return out


def run_suite(cl: ClosureOperation, insts: Sequence[AxiomInstance], axioms=(1, 2, 3, 4, 5, 6), lemma: bool = False) -> list[AxiomReport]:
    out = []
    for inst in insts:
        for k in axioms:
            out.append(check_axiom(cl, inst, k))
        if lemma:
            out.extend(check_lemma12(cl, [inst]))
    return out
