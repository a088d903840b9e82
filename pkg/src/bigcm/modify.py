"""Module modifications along parameter relations, and modification chains.

A parameter relation on M is x_{k+1} u = x_1 u_1 + ... + x_k u_k. Modifying
M along it adjoins free generators f_1..f_k and kills u + x_1 f_1 + ... +
x_k f_k, so that u becomes an element of (x_1..x_k) M'.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

from bigcm.axiomcheck import AxiomInstance, check_axiom, format_vector
from bigcm.closure import ClosureOperation
from bigcm.gb import TrackedBasis, VectorPoly, as_vector
from bigcm.polycore import Polynomial, format_poly
from bigcm.ringmod import FPModule, ModuleMap, PresentedRing, Submodule, is_partial_sop, preimage
from bigcm.phantom import build_phantom_presentation, check_diagram, check_notbad, is_phantom


@dataclass
class ParameterRelation:
    sop: tuple
    u: VectorPoly
    us: list

    @property
    def k(self) -> int:
        return len(self.sop) - 1

    def holds_in(self, M: FPModule) -> bool:
        lhs = as_vector(self.u) * self.sop[-1]
        for x, ui in zip(self.sop, self.us):
            lhs = lhs - as_vector(ui) * x
        return M.is_zero_element(lhs)

    def describe(self) -> dict:
        return {
            "sop": [format_poly(x) for x in self.sop],
            "u": format_vector(self.u),
            "us": [format_vector(v) for v in self.us],
        }


def _parameter_multiples(M: FPModule, xs) -> Submodule:
    """(x_1..x_k) M in preimage form."""
    return M.submodule([M.unit(j) * x for x in xs for j in range(M.ngens)])


def _lift_coefficients(M: FPModule, xs, target: VectorPoly) -> list[VectorPoly] | None:
    """u_1..u_k with target = sum x_i u_i in M, normalised one parameter at a
    time so that u_i is reduced modulo (x_{i+1}..x_k) M."""
    S = M.ring.poly_ring
    n = M.ngens
    residual = as_vector(target)
    out = []
    for i, x in enumerate(xs):
        rest = xs[i + 1 :]
        gens = [M.unit(j) * x for j in range(n)]
        modulus = _parameter_multiples(M, rest)
        tb = TrackedBasis(S, n, gens, modulus.gb.generators)
        coeffs = tb.lift(residual)
        if coeffs is None:
            return None
        ui = VectorPoly(coeffs)
        if rest:
            ui = modulus.reduce(ui)
            ui = M.ring.reduce_vector(ui)
        out.append(ui)
        residual = residual - ui * x
    return out


def find_parameter_relation(M: FPModule, sop: Sequence, rng: random.Random | None = None) -> ParameterRelation | None:
    """A relation x_{k+1} u = sum x_i u_i whose u is not in (x_1..x_k) M, or None.

    The colon (x_1..x_k) M :_M x_{k+1} is computed exactly; candidates are
    taken lowest degree first, then by their printed coordinates (or at
    random when ``rng`` is given).
    """
    R = M.ring
    S = R.poly_ring
    sop = tuple(S(x) for x in sop)
    if not is_partial_sop(R, sop):
        raise ValueError("not a partial system of parameters")
    xs, x_last = sop[:-1], sop[-1]
    IM = _parameter_multiples(M, xs) if xs else M.zero_submodule
    colon = IM.colon(x_last)
    cands = [g for g in colon.generators if not IM.contains(g)]
    if not cands:
        return None
    cands.sort(key=lambda v: (v.degree(M.degrees), format_vector(v)))
    u = rng.choice(cands) if rng is not None else cands[0]
    u = IM.reduce(u)
    us = _lift_coefficients(M, list(xs), u * x_last) if xs else []
    if us is None:
        raise RuntimeError("colon element failed to lift")
    rel = ParameterRelation(sop, u, us)
    assert rel.holds_in(M)
    return rel


def modify(M: FPModule, rel: ParameterRelation) -> tuple[FPModule, ModuleMap]:
    """M' = (M + R f_1 + ... + R f_k) / R(u + x_1 f_1 + ... + x_k f_k) and
    the canonical map M -> M'."""
    if not rel.holds_in(M):
        raise ValueError("relation does not hold in M")
    R = M.ring
    S = R.poly_ring
    n, k = M.ngens, rel.k
    zeros = [S.zero] * k
    rels = [VectorPoly(list(r) + zeros) for r in M.relations]
    rels.append(VectorPoly(list(as_vector(rel.u)) + [S(x) for x in rel.sop[:k]]))
    du = M.element_degree(as_vector(rel.u))
    degs = list(M.degrees) + [du - S(x).degree() for x in rel.sop[:k]]
    labels = list(M.labels) + [f"f{len(M.labels) + i + 1}" for i in range(k)]
    Mp = FPModule(R, n + k, rels, degs, labels)
    beta = ModuleMap(M, Mp, [VectorPoly(list(M.unit(j)) + zeros) for j in range(n)])
    return Mp, beta


def trivialized(Mp: FPModule, beta: ModuleMap, rel: ParameterRelation) -> bool:
    """beta(u) lies in (x_1..x_k) M' (for k = 0: beta(u) = 0)."""
    bu = beta.apply(rel.u)
    return _parameter_multiples(Mp, rel.sop[: rel.k]).contains(bu) if rel.k else Mp.is_zero_element(bu)


def check_injective_alpha(stage) -> bool:
    alpha = stage.alpha if hasattr(stage, "alpha") else stage
    return alpha.is_injective()


def primed_presentation_exact(pres, Mp: FPModule, beta: ModuleMap) -> bool:
    """The extended presentation (old columns padded, plus e_n + x_1 e_{n+1} + ...)
    presents M' on beta(g_1..g_n), f_1..f_k: kernel equals image."""
    R = Mp.ring
    S = R.poly_ring
    k = pres.k
    n = pres.n
    gens = [beta.apply(g) for g in pres.gens] + [Mp.unit(Mp.ngens - k + i) for i in range(k)]
    cols = [VectorPoly(list(c) + [S.zero] * k) for c in pres.nu1]
    last = [S.zero] * (n + k)
    last[n - 1] = S.one
    for i in range(k):
        last[n + i] = S(pres.relation.sop[i])
    cols.append(VectorPoly(last))
    degs = list(pres.gen_degrees) + list(Mp.degrees[Mp.ngens - k :])
    kernel = preimage(R, gens, Mp.zero_submodule, degs)
    return kernel == Submodule(R, n + k, cols, degs)


@dataclass
class ChainStage:
    t: int
    M: FPModule
    alpha: ModuleMap
    relation: ParameterRelation | None = None
    report: dict = field(default_factory=dict)


@dataclass
class ModificationChain:
    closure: str
    stages: list
    terminated: bool
    phantom_tracking: str = "reliable"
    violations: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "closure": self.closure,
            "phantom_tracking": self.phantom_tracking,
            "terminated": self.terminated,
            "violations": self.violations,
            "stages": [s.report for s in self.stages],
        }

    @property
    def ok(self) -> bool:
        keys = ("injective", "diagram_exact", "phantom", "notbad", "trivialized", "next_diagram_exact", "composition_exact")
        return not self.violations and all(
            s.report.get(key, True) is not False for s in self.stages for key in keys
        )


def _phantom_conditions(pres, cl: ClosureOperation) -> dict:
    """Closure conditions in R^m built from x, y, H and I."""
    out = {}
    if pres.m == 0 or pres.relation is None:
        return out
    F = pres.row_space()
    S = pres.ring.poly_ring
    x, y = pres.x_vec, pres.y_vec
    H = pres.H_rows
    I = [S(t) for t in pres.I_gens]
    Ry_H = F.submodule([y] + H)
    Iy_H = F.submodule([y * t for t in I] + H)
    out["phantom_row_form"] = cl.contains(x, Ry_H, F)
    out["sufficient_condition"] = cl.contains(x, Iy_H, F)
    # quotient reformulation with Q = R^m / H and v = y + H
    Q = FPModule(pres.ring, pres.m, H, F.degrees)
    out["quotient_form_agrees"] = cl.contains(x, Q.submodule([y]), Q) == out["phantom_row_form"]
    out["quotient_form_I_agrees"] = cl.contains(x, Q.submodule([y * t for t in I]), Q) == out["sufficient_condition"]
    # criterion for the next map, in R^{m+1}
    G = FPModule.free(pres.ring, pres.m + 1, list(F.degrees) + [-_last_degree(pres)])
    pad = lambda v, c: VectorPoly(list(v) + [c])  # noqa: E731
    gens = [pad(y, S.one)] + [pad(h, S.zero) for h in H] + [VectorPoly([S.zero] * pres.m + [t]) for t in I]
    out["next_phantom_criterion"] = cl.contains(pad(x, S.zero), G.submodule(gens), G)
    return out


def _last_degree(pres) -> int:
    # degree of the new column e_n + x_1 e_{n+1} + ...: that of the generator u
    return pres.gen_degrees[-1]


def run_chain(
    R: PresentedRing,
    sop: Sequence,
    t_max: int,
    cl: ClosureOperation,
    seed_relation: ParameterRelation | None = None,
    seed: int | None = None,
) -> ModificationChain:
    """Modify R along parameter relations for up to ``t_max`` stages.

    Each stage records injectivity of R -> M_t, exactness of the presentation
    diagrams, phantom status under ``cl`` and whether alpha(1) avoids m M_t.
    """
    if t_max < 1:
        raise ValueError("t_max must be at least 1")
    S = R.poly_ring
    sop = [S(x) for x in sop]
    if not is_partial_sop(R, sop):
        raise ValueError("not a partial system of parameters")
    rng = random.Random(seed) if seed is not None else None
    F = FPModule.free(R, 1)
    tracking = "reliable"
    probe = AxiomInstance(f"{R.name}-chain", R, F, F.zero_submodule)
    if check_axiom(cl, probe, 6).status == "fail":
        tracking = "unreliable"
    M = F
    alpha = ModuleMap(F, F, [VectorPoly([S.one])])
    stages = []
    violations = []
    terminated = False
    prev_phantom = None
    for t in range(t_max + 1):
        rel = None
        if t < t_max:
            if t == 0 and seed_relation is not None:
                rel = seed_relation
                if not rel.holds_in(M):
                    raise ValueError("seed relation does not hold in R")
            else:
                for j in range(1, len(sop) + 1):
                    rel = find_parameter_relation(M, sop[:j], rng)
                    if rel is not None:
                        break
        stage = ChainStage(t, M, alpha, rel)
        rep = stage.report
        rep["stage"] = t
        rep["generators"] = M.ngens
        rep["relations"] = len(M.relations)
        rep["injective"] = alpha.is_injective()
        pres = build_phantom_presentation(alpha, rel)
        diag = check_diagram(pres)
        rep["diagram_exact"] = all(v for key, v in diag.items() if key != "entries_in_m")
        rep["minimal_presentation"] = diag["entries_in_m"]
        phantom = is_phantom(pres, cl)
        rep["phantom"] = phantom
        notbad = check_notbad(pres)
        rep["w_in_mM"] = not notbad
        rep["notbad"] = notbad
        rep.update(_phantom_conditions(pres, cl))
        rep["relation_used"] = rel.describe() if rel is not None else None
        if prev_phantom and not phantom:
            violations.append({"stage": t, "kind": "phantom lost after modification"})
        if phantom and not notbad:
            violations.append({"stage": t, "kind": "phantom map with alpha(1) in mM"})
        prev_phantom = phantom
        if rel is not None:
            Mp, beta = modify(M, rel)
            rep["trivialized"] = trivialized(Mp, beta, rel)
            rep["next_diagram_exact"] = primed_presentation_exact(pres, Mp, beta)
            new_alpha = ModuleMap(F, Mp, [beta.apply(alpha.images[0])])
            rep["composition_exact"] = new_alpha.images == beta.compose(alpha).images
        stages.append(stage)
        if rel is None:
            terminated = t < t_max
            break
        M, alpha = Mp, new_alpha
    return ModificationChain(cl.spec(), stages, terminated, tracking, violations)
