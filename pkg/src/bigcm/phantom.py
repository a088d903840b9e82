"""Free-presentation data for an injection R -> M and the phantom test.

Given alpha: R -> M with w1 = alpha(1), we pick generators w1, g_2, ..., g_n
of M (w1 first), present Q = M / R w1 on g_2..g_n by a matrix ``nu``, and
lift every column of ``nu`` to a relation of M by solving for the w1
coefficient. The lifted first row is ``x_vec``; alpha is phantom for a
closure operation iff ``x_vec`` lies in the closure of the row span of
``nu`` inside R^m.

When a parameter relation x_{k+1} u = x_1 u_1 + ... + x_k u_k is supplied,
the generators end with -u_1, ..., -u_k, u and the relation
(0, ..., 0, x_1, ..., x_{k+1}) is the last column of ``nu``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from bigcm.closure import SEMI, ClosureOperation, UndecidableClosure
from bigcm.gb import TrackedBasis, VectorPoly, as_vector
from bigcm.polycore import Polynomial
from bigcm.ringmod import FPModule, ModuleMap, PresentedRing, Submodule, preimage


class NotInjective(ValueError):
    pass


@dataclass
class PhantomPresentation:
    ring: PresentedRing
    alpha: ModuleMap
    gens: list  # generators of M in its original coordinates, gens[0] = alpha(1)
    gen_degrees: list
    nu: list  # columns, each a vector of length n - 1
    nu1: list  # columns, each a vector of length n
    col_degrees: list
    relation: object = None
    k: int = 0
    minimal: bool = True
    labels: list = field(default_factory=list)

    @property
    def n(self) -> int:
        return len(self.gens)

    @property
    def m(self) -> int:
        return len(self.nu1)

    @property
    def M(self) -> FPModule:
        return self.alpha.target

    @property
    def Q(self) -> FPModule | None:
        """Q presented by nu on g_2..g_n (None when Q has no generators)."""
        if self.n < 2:
            return None
        return FPModule(self.ring, self.n - 1, self.nu, self.gen_degrees[1:], self.labels[1:])

    @property
    def M_presented(self) -> FPModule:
        """M presented by nu1 on w1, g_2, ..., g_n."""
        return FPModule(self.ring, self.n, self.nu1, self.gen_degrees, self.labels)

    def row(self, i: int) -> VectorPoly | None:
        """Row i of nu1 as a vector in R^m (row 0 is the first row)."""
        if self.m == 0:
            return None
        return VectorPoly([c[i] for c in self.nu1])

    @property
    def x_vec(self) -> VectorPoly | None:
        return self.row(0)

    @property
    def y_vec(self) -> VectorPoly | None:
        return self.row(self.n - 1) if self.n > 1 else None

    @property
    def H_rows(self) -> list:
        return [self.row(i) for i in range(1, self.n - 1)] if self.m else []

    @property
    def I_gens(self) -> list:
        return list(self.relation.sop[: self.k]) if self.relation is not None else []

    def row_space(self) -> FPModule:
        """R^m with the grading that makes every row homogeneous."""
        return FPModule.free(self.ring, self.m, [-d for d in self.col_degrees])

    def H(self) -> Submodule:
        return self.row_space().submodule(self.H_rows)

    def nu_matrix(self) -> list[list[Polynomial]]:
        return [[c[i] for c in self.nu] for i in range(self.n - 1)]

    def nu1_matrix(self) -> list[list[Polynomial]]:
        return [[c[i] for c in self.nu1] for i in range(self.n)]


def _prune(R: PresentedRing, rank: int, cands: list, fixed: list, base: list, degrees) -> list:
    """Drop candidates lying in the span of fixed + base + the other kept candidates."""
    kept = list(cands)
    i = len(kept) - 1
    while i >= 0:
        others = kept[:i] + kept[i + 1 :]
        if Submodule(R, rank, fixed + others + base, degrees).contains(kept[i]):
            kept.pop(i)
        i -= 1
    return kept


def build_phantom_presentation(alpha: ModuleMap, relation=None, order=None) -> PhantomPresentation:
    """Presentation data for alpha: R -> M.

    ``relation`` is an optional parameter relation (attributes ``sop``, ``u``,
    ``us``); ``order`` permutes M's own generators before pruning, which
    yields a different but equally valid presentation.
    """
    R = alpha.target.ring
    M = alpha.target
    if alpha.source.ngens != 1 or alpha.source.relations:
        raise ValueError("alpha must start at the free module R")
    if not alpha.is_injective():
        raise NotInjective("alpha is not injective")
    S = R.poly_ring
    N = M.ngens
    w1 = alpha.images[0]
    rels = M.relations
    tail: list = []
    k = 0
    sop_col = None
    if relation is not None:
        k = len(relation.sop) - 1
        tail = [-as_vector(ui) for ui in relation.us] + [as_vector(relation.u)]
    idx = list(order) if order is not None else list(range(N))
    cands = [M.unit(j) for j in idx]
    others = _prune(R, N, cands, [w1] + tail, rels, M.degrees)
    gens = [w1] + others + tail
    n = len(gens)
    degs = [M.element_degree(g) if not g.is_zero() else 0 for g in gens]
    degs[0] = M.element_degree(w1)
    labels = ["w1"] + [M.labels[idx[cands.index(g)]] if g in cands else f"g{i + 2}" for i, g in enumerate(others)]
    labels += [f"u{i + 1}" for i in range(k)] + (["u"] if relation is not None else [])
    # fix zero tail generators' degrees from the relation's grading
    if relation is not None:
        du = M.element_degree(as_vector(relation.u))
        x_last = S(relation.sop[-1])
        for i in range(k):
            degs[n - 1 - k + i] = du + x_last.degree() - S(relation.sop[i]).degree()
        degs[-1] = du

    nu: list = []
    col_degrees: list = []
    if n > 1:
        base = M.submodule([w1])
        qdeg = degs[1:]
        syz = preimage(R, gens[1:], base, qdeg)
        extra = []
        if relation is not None:
            sop_col = VectorPoly([S.zero] * (n - 1 - (k + 1)) + [S(x) for x in relation.sop])
            extra = [sop_col]
        cols = _prune(R, n - 1, syz.generators, [], extra, qdeg) + extra
        nu = [R.reduce_vector(c) for c in cols]
    tb = TrackedBasis(S, N, [w1], M.zero_submodule.gb.generators)
    nu1 = []
    for c in nu:
        combo = VectorPoly.zero(S, N)
        for coeff, g in zip(c, gens[1:]):
            if coeff:
                combo = combo + g * coeff
        lift = tb.lift(combo)
        if lift is None:
            raise RuntimeError("column of nu does not lift to a relation of M")
        b1 = R.reduce(-lift[0])
        nu1.append(VectorPoly([b1] + list(c)))
        col_degrees.append(combo.degree(M.degrees) if not combo.is_zero() else _col_degree(c, degs[1:]))
    minimal = all(
        all(f.is_zero() or f.constant_coefficient() == 0 for f in c) for c in nu
    )
    return PhantomPresentation(
        R, alpha, gens, degs, nu, nu1, col_degrees, relation, k, minimal, labels
    )


def _col_degree(c: VectorPoly, degs) -> int:
    return max(f.degree() + d for f, d in zip(c, degs) if not f.is_zero())


def is_phantom(pres: PhantomPresentation, cl: ClosureOperation) -> bool:
    """x_vec lies in the closure of the row span of nu inside R^m."""
    if cl.capability == SEMI:
        raise UndecidableClosure("phantom test needs a closure with decidable membership")
    if pres.m == 0:
        return True
    F = pres.row_space()
    rows = [pres.row(i) for i in range(1, pres.n)]
    return cl.contains(pres.x_vec, F.submodule(rows), F)


def check_notbad(pres: PhantomPresentation) -> bool:
    """w1 is not in mM, tested as e_1 outside m R^n + Im(nu1)."""
    R = pres.ring
    S = R.poly_ring
    n = pres.n
    gens = [VectorPoly.unit(S, n, j) * x for j in range(n) for x in R.gens] + list(pres.nu1)
    sub = Submodule(R, n, gens)
    return not sub.contains(VectorPoly.unit(S, n, 0))


def check_diagram(pres: PhantomPresentation) -> dict:
    """Consistency of the presentation diagram; every value should be True."""
    R = pres.ring
    M = pres.M
    S = R.poly_ring
    n = pres.n
    out = {}
    zero = M.zero_submodule
    ok = True
    for c in pres.nu1:
        combo = VectorPoly.zero(S, M.ngens)
        for coeff, g in zip(c, pres.gens):
            if coeff:
                combo = combo + g * coeff
        ok = ok and zero.contains(combo)
    out["composite_zero"] = ok
    out["projection_matches"] = all(VectorPoly(list(c1)[1:]) == c for c1, c in zip(pres.nu1, pres.nu))
    kernel = preimage(R, pres.gens, zero, pres.gen_degrees)
    image = Submodule(R, n, pres.nu1, pres.gen_degrees)
    out["exact_M"] = kernel == image
    if n > 1:
        kq = preimage(R, pres.gens[1:], M.submodule([pres.gens[0]]), pres.gen_degrees[1:])
        out["exact_Q"] = kq == Submodule(R, n - 1, pres.nu, pres.gen_degrees[1:])
    else:
        out["exact_Q"] = True
    out["entries_in_m"] = pres.minimal
    span = M.submodule(pres.gens)
    out["generates_M"] = all(span.contains(M.unit(j)) for j in range(M.ngens))
    return out
