"""Groebner bases for ideals and submodules of free modules over F_p[x].

Module elements are handled internally as dicts ``{(pos, exps): coeff}``.
Module orders are position-over-term: a lower position dominates, ties are
broken by the ring's monomial order. Ideals are the rank-1 case.
"""

from __future__ import annotations

import heapq
from operator import add, le, sub
from typing import Iterable, Sequence

from bigcm.polycore import MonomialOrder, PolyRing, Polynomial, StructureError


class VectorPoly:
    """An element of the free module F_p[x]^rank, stored as a tuple of polynomials."""

    __slots__ = ("components",)

    def __init__(self, components: Sequence[Polynomial]):
        comps = tuple(components)
        if not comps:
            raise StructureError("a VectorPoly needs at least one component (use rank >= 1)")
        ring = comps[0].ring
        for c in comps[1:]:
            if c.ring.p != ring.p or c.ring.variables != ring.variables:
                raise StructureError("components live in different rings")
        self.components = comps

    @classmethod
    def zero(cls, ring: PolyRing, rank: int) -> VectorPoly:
        return cls([ring.zero] * rank)

    @classmethod
    def unit(cls, ring: PolyRing, rank: int, i: int) -> VectorPoly:
        return cls([ring.one if j == i else ring.zero for j in range(rank)])

    @property
    def ring(self) -> PolyRing:
        return self.components[0].ring

    @property
    def rank(self) -> int:
        return len(self.components)

    def __len__(self):
        return len(self.components)

    def __getitem__(self, i):
        return self.components[i]

    def __iter__(self):
        return iter(self.components)

    def _check(self, other: VectorPoly):
        if not isinstance(other, VectorPoly):
            return False
        if other.rank != self.rank:
            raise StructureError(f"rank mismatch: {self.rank} vs {other.rank}")
        return True

    def __add__(self, other):
        if not self._check(other):
            return NotImplemented
        return VectorPoly([a + b for a, b in zip(self, other)])

    def __sub__(self, other):
        if not self._check(other):
            return NotImplemented
        return VectorPoly([a - b for a, b in zip(self, other)])

    def __neg__(self):
        return VectorPoly([-a for a in self])

    def __mul__(self, scalar):
        if isinstance(scalar, VectorPoly):
            return NotImplemented
        return VectorPoly([a * scalar for a in self])

    __rmul__ = __mul__

    def dot(self, other: Sequence[Polynomial]) -> Polynomial:
        total = self.ring.zero
        for a, b in zip(self, other):
            total = total + a * b
        return total

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self)

    def degree(self, shifts: Sequence[int] | None = None) -> int:
        """max over components of deg(c_j) + shift_j; -1 for zero."""
        shifts = shifts or [0] * self.rank
        return max((c.degree() + s for c, s in zip(self, shifts) if c), default=-1)

    def is_homogeneous(self, shifts: Sequence[int] | None = None) -> bool:
        shifts = shifts or [0] * self.rank
        degs = {sum(e) + s for c, s in zip(self, shifts) for e in c.terms}
        return len(degs) <= 1

    def map(self, fn) -> VectorPoly:
        return VectorPoly([fn(c) for c in self])

    def to_terms(self) -> dict:
        return {(i, m): c for i, comp in enumerate(self) for m, c in comp.terms.items()}

    @classmethod
    def from_terms(cls, ring: PolyRing, rank: int, terms: dict, offset: int = 0) -> VectorPoly:
        comps: list[dict] = [{} for _ in range(rank)]
        for (pos, m), c in terms.items():
            comps[pos - offset][m] = c
        return cls([Polynomial(ring, d) for d in comps])

    def __eq__(self, other):
        if not isinstance(other, VectorPoly):
            return NotImplemented
        return self.components == other.components

    def __hash__(self):
        return hash(self.components)

    def __repr__(self):
        return "(" + ", ".join(str(c) for c in self) + ")"


def as_vector(g) -> VectorPoly:
    return VectorPoly([g]) if isinstance(g, Polynomial) else g


# --------------------------------------------------------------------------
# internal engine


class _Elem:
    __slots__ = ("pos", "lexp", "mask", "tail", "terms")

    def __init__(self, lead, terms):
        self.pos, self.lexp = lead
        self.mask = _mask(self.lexp)
        self.terms = terms
        self.tail = [(t, c) for t, c in terms.items() if t != lead]


def _threshold_bits(v: int) -> int:
    bits = 0
    for k, t in enumerate((1, 2, 4, 8, 16, 32, 64, 128)):
        if v >= t:
            bits |= 1 << k
    return bits


_THRESHOLDS = [_threshold_bits(v) for v in range(256)]


def _mask(e) -> int:
    """Divisibility signature: bit (8 i + k) is set when e_i >= 2^k. If a
    divides b then mask(a) is a subset of mask(b)."""
    m = 0
    tbl = _THRESHOLDS
    for i, v in enumerate(e):
        if v:
            m |= tbl[v if v < 256 else 255] << (8 * i)
    return m


class _Engine:
    """Reduction and Buchberger completion for one (p, order) pair."""

    def __init__(self, p: int, order: MonomialOrder):
        self.p = p
        mono = order.negkey
        self.nk = lambda t: (t[0], *mono(t[1]))
        self.truncated = False

    def make(self, terms: dict) -> _Elem:
        p = self.p
        lead = min(terms, key=self.nk)
        c = terms[lead]
        if c != 1:
            inv = pow(c, -1, p)
            terms = {t: v * inv % p for t, v in terms.items()}
        return _Elem(lead, terms)

    @staticmethod
    def find_reducer(reducers, pos, e, mask):
        for r in reducers:
            if r.pos == pos and not (r.mask & ~mask):
                for a, b in zip(r.lexp, e):
                    if a > b:
                        break
                else:
                    return r
        return None

    def reduce(self, terms: dict, reducers: list, full: bool = True) -> dict:
        """Remainder of ``terms`` (consumed) on division by monic ``reducers``."""
        p = self.p
        nk = self.nk
        find = self.find_reducer
        heap = [(nk(t), t) for t in terms]
        heapq.heapify(heap)
        rem: dict = {}
        pop, push = heapq.heappop, heapq.heappush
        while heap:
            t = pop(heap)[1]
            c = terms.pop(t, None)
            if c is None:
                continue
            pos, e = t
            r = find(reducers, pos, e, _mask(e))
            if r is None:
                rem[t] = c
                if not full:
                    rem.update(terms)
                    return rem
                continue
            shift = tuple(map(sub, e, r.lexp))
            for (tp, te), tc in r.tail:
                m = (tp, tuple(map(add, te, shift)))
                old = terms.get(m)
                if old is None:
                    terms[m] = (-c * tc) % p
                    push(heap, (nk(m), m))
                else:
                    v = (old - c * tc) % p
                    if v:
                        terms[m] = v
                    else:
                        del terms[m]
        return rem

    def spoly(self, f: _Elem, g: _Elem, lcm) -> dict:
        p = self.p
        out: dict = {}
        sf = tuple(map(sub, lcm, f.lexp))
        for (tp, te), c in f.tail:
            out[(tp, tuple(map(add, te, sf)))] = c
        sg = tuple(map(sub, lcm, g.lexp))
        for (tp, te), c in g.tail:
            m = (tp, tuple(map(add, te, sg)))
            v = (out.get(m, 0) - c) % p
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return out

    def groebner(
        self,
        polys: Iterable[dict],
        known: Iterable[dict] = (),
        rank1: bool = False,
        shifts: Sequence[int] | None = None,
        degree_limit: int | None = None,
    ):
        """Reduced Groebner basis (list of monic term dicts).

        ``known`` must already be a Groebner basis; pairs among its members are
        never formed. With ``degree_limit`` (homogeneous input only) pairs of
        degree above the limit are dropped: the result then decides
        membership for homogeneous elements up to that degree.
        """
        nk = self.nk
        if degree_limit is not None and shifts is None:
            shifts = ()

        def deg_of(pos, e):
            return sum(e) + (shifts[pos] if pos < len(shifts) else 0)
        elems: list[_Elem] = []
        G: list[int] = []
        B: list[tuple] = []

        def lcm_of(i, j):
            return tuple(map(max, elems[i].lexp, elems[j].lexp))

        E: list[tuple] = []

        def divides(a, b):
            return all(map(le, a, b))

        def coprime(a, b):
            return rank1 and all(x == 0 or y == 0 for x, y in zip(a, b))

        def update(h_idx):
            h = elems[h_idx]
            # new pairs: keep one pair per divisibility-minimal lcm (preferring a
            # coprime one), then drop the coprime survivors
            cands = []
            for g in G:
                if elems[g].pos == h.pos:
                    l = lcm_of(h_idx, g)
                    cands.append((sum(l), not coprime(h.lexp, elems[g].lexp), g, l, _mask(l)))
            cands.sort(key=lambda c: (c[0], c[1]))
            minimal: list[tuple] = []
            for _, keep, g, l, ml in cands:
                if any(not (m2 & ~ml) and divides(l2, l) for l2, m2 in minimal):
                    continue
                minimal.append((l, ml))
                if keep:
                    E.append((g, h_idx, l))
            kept = []
            for g1, g2, l in B:
                if (
                    elems[g1].pos == h.pos
                    and divides(h.lexp, l)
                    and lcm_of(g1, h_idx) != l
                    and lcm_of(g2, h_idx) != l
                ):
                    continue
                kept.append((g1, g2, l))
            B[:] = kept + E
            E.clear()
            G[:] = [g for g in G if not (elems[g].pos == h.pos and divides(h.lexp, elems[g].lexp))]
            G.append(h_idx)

        for terms in known:
            if terms:
                elems.append(self.make(dict(terms)))
                G.append(len(elems) - 1)

        inputs = [dict(t) for t in polys if t]
        if degree_limit is not None:
            inputs = [t for t in inputs if min(deg_of(*m) for m in t) <= degree_limit]
        inputs.sort(key=lambda t: min(nk(m) for m in t), reverse=True)
        for terms in inputs:
            r = self.reduce(terms, [elems[g] for g in G])
            if r:
                elems.append(self.make(r))
                update(len(elems) - 1)

        if degree_limit is None:
            pair_key = lambda b: (sum(b[2]), b[1], b[0])  # noqa: E731
        else:
            pair_key = lambda b: (deg_of(elems[b[0]].pos, b[2]), b[1], b[0])  # noqa: E731
        B.sort(key=pair_key, reverse=True)
        while B:
            if degree_limit is not None and pair_key(B[-1])[0] > degree_limit:
                break
            g1, g2, l = B.pop()
            s = self.spoly(elems[g1], elems[g2], l)
            if not s:
                continue
            r = self.reduce(s, [elems[g] for g in G])
            if r:
                elems.append(self.make(r))
                update(len(elems) - 1)
                B.sort(key=pair_key, reverse=True)

        self.truncated = bool(B)
        basis = [elems[g] for g in G]
        basis.sort(key=lambda e: nk((e.pos, e.lexp)), reverse=True)
        out = []
        for i, e in enumerate(basis):
            others = basis[:i] + basis[i + 1 :]
            tail = self.reduce(dict(e.tail), others)
            tail[(e.pos, e.lexp)] = 1
            out.append(tail)
        return out


# --------------------------------------------------------------------------
# public API


class GroebnerBasis:
    """A reduced Groebner basis of a submodule of F_p[x]^rank (rank 1: ideal)."""

    def __init__(self, ring: PolyRing, rank: int, order: MonomialOrder, elements: list[dict]):
        self.ring = ring
        self.rank = rank
        self.order = order
        self.reduced = True
        self.degree_limit = None
        self._elements = elements
        self._engine = _Engine(ring.p, order)
        self._reducers = [_Elem(self._lead(t), t) for t in elements]

    def _lead(self, terms):
        return min(terms, key=self._engine.nk)

    @property
    def generators(self) -> list[VectorPoly]:
        return [VectorPoly.from_terms(self.ring, self.rank, t) for t in self._elements]

    @property
    def polys(self) -> list[Polynomial]:
        if self.rank != 1:
            raise StructureError("polys is only defined for ideals (rank 1)")
        return [v[0] for v in self.generators]

    def leading_terms(self) -> list[tuple[int, tuple]]:
        return [(r.pos, r.lexp) for r in self._reducers]

    def reduce_terms(self, terms: dict) -> dict:
        return self._engine.reduce(dict(terms), self._reducers)

    def __len__(self):
        return len(self._elements)

    def __iter__(self):
        return iter(self.generators)

    def __repr__(self):
        return f"GroebnerBasis({self.generators})"


def _to_terms(gens, rank: int | None = None):
    if gens and all(isinstance(g, dict) for g in gens):
        # already in internal term form
        return None, rank or 1, [dict(g) for g in gens]
    vecs = [as_vector(g) for g in gens]
    if not vecs:
        return None, rank or 1, []
    ring = vecs[0].ring
    r = vecs[0].rank
    for v in vecs:
        if v.rank != r:
            raise StructureError("generators have different ranks")
        if v.ring.p != ring.p or v.ring.variables != ring.variables:
            raise StructureError("generators live in different rings")
    if rank is not None and rank != r:
        raise StructureError(f"expected rank {rank}, got {r}")
    return ring, r, [v.to_terms() for v in vecs]


def buchberger(
    gens: Sequence,
    order: MonomialOrder | None = None,
    *,
    ring: PolyRing | None = None,
    rank: int | None = None,
    known: Sequence = (),
    shifts: Sequence[int] | None = None,
    degree_limit: int | None = None,
) -> GroebnerBasis:
    """Reduced Groebner basis of the submodule generated by ``gens``.

    ``gens`` are Polynomials (ideal case) or VectorPolys of a common rank.
    ``known`` is an optional list of elements already forming a Groebner basis.
    ``degree_limit`` truncates the computation (homogeneous input, basis
    degrees ``shifts``).
    """
    r0, rk, terms = _to_terms(gens, rank)
    ring = ring or r0
    if ring is None:
        if known:
            ring = as_vector(known[0]).ring
        else:
            raise ValueError("cannot infer the ring of an empty generator list; pass ring=")
    if r0 is None:
        rk = rank or (as_vector(known[0]).rank if known else 1)
    order = order or ring.order
    _, _, kterms = _to_terms(known, rk)
    engine = _Engine(ring.p, order)
    elems = engine.groebner(terms, kterms, rank1=(rk == 1), shifts=shifts, degree_limit=degree_limit)
    G = GroebnerBasis(ring, rk, order, elems)
    # None means complete: no pair was dropped by the truncation
    G.degree_limit = degree_limit if engine.truncated else None
    return G


def normal_form(v, G: GroebnerBasis):
    """Remainder of full division of v by G. Returns the same type as v."""
    vec = as_vector(v)
    if vec.rank != G.rank:
        raise StructureError(f"rank mismatch: {vec.rank} vs {G.rank}")
    rem = G.reduce_terms(vec.to_terms())
    out = VectorPoly.from_terms(vec.ring, G.rank, rem)
    return out[0] if isinstance(v, Polynomial) else out


def is_groebner(G: GroebnerBasis) -> bool:
    """Buchberger criterion: every S-pair of G reduces to zero."""
    eng = G._engine
    red = G._reducers
    for i in range(len(red)):
        for j in range(i + 1, len(red)):
            if red[i].pos != red[j].pos:
                continue
            lcm = tuple(map(max, red[i].lexp, red[j].lexp))
            if eng.reduce(eng.spoly(red[i], red[j], lcm), red):
                return False
    return True


class TrackedBasis:
    """Groebner basis of the rows (g_i | e_i) in F^rank (+) F^t.

    Supports membership, lifting (expressing v as a combination of the g_i)
    and syzygies. ``modulus`` holds extra generators of the ambient relations
    (e.g. J * e_j for a quotient ring) whose coefficients are not tracked; it
    must itself be a Groebner basis.
    """

    def __init__(self, ring: PolyRing, rank: int, gens: Sequence, modulus: Sequence = (), order=None):
        self.ring = ring
        self.rank = rank
        self.ngens = len(gens)
        order = order or ring.order
        self._engine = _Engine(ring.p, order)
        rows = []
        one = ring.zero_exp
        for i, g in enumerate(gens):
            t = as_vector(g).to_terms()
            if as_vector(g).rank != rank:
                raise StructureError("generator rank mismatch")
            t[(rank + i, one)] = 1
            rows.append(t)
        known = [as_vector(m).to_terms() for m in modulus]
        self._elements = self._engine.groebner(rows, known, rank1=False)
        self._reducers = [_Elem(min(t, key=self._engine.nk), t) for t in self._elements]

    def contains(self, v) -> bool:
        rem = self._engine.reduce(as_vector(v).to_terms(), self._reducers, full=True)
        return all(pos >= self.rank for pos, _ in rem)

    def lift(self, v) -> list[Polynomial] | None:
        """Coefficients a with v = sum a_i g_i modulo the ambient relations, or None."""
        rem = self._engine.reduce(as_vector(v).to_terms(), self._reducers)
        if any(pos < self.rank for pos, _ in rem):
            return None
        if self.ngens == 0:
            return []
        p = self.ring.p
        neg = {t: p - c for t, c in rem.items()}
        return list(VectorPoly.from_terms(self.ring, self.ngens, neg, offset=self.rank))

    def syzygies(self) -> list[VectorPoly]:
        out = []
        for t in self._elements:
            lead = min(t, key=self._engine.nk)
            if lead[0] >= self.rank:
                out.append(VectorPoly.from_terms(self.ring, self.ngens, t, offset=self.rank))
        return out


def syzygies(gens: Sequence, modulus: Sequence = (), ring: PolyRing | None = None) -> list[VectorPoly]:
    """Generators of the kernel of F^t -> F^rank, e_i -> gens[i] (modulo ``modulus``)."""
    vecs = [as_vector(g) for g in gens]
    if not vecs:
        return []
    ring = ring or vecs[0].ring
    tb = TrackedBasis(ring, vecs[0].rank, vecs, modulus)
    return tb.syzygies()


def eliminate(gens: Sequence[Polynomial], keep: Iterable) -> list[Polynomial]:
    """Generators of (gens) intersected with the subring on the ``keep`` variables."""
    gens = [g for g in gens]
    if not gens:
        return []
    ring = gens[0].ring
    keep_idx = {ring.variables.index(k) if isinstance(k, str) else k for k in keep}
    drop = [i for i in range(ring.nvars) if i not in keep_idx]
    if not drop:
        return buchberger(gens).polys
    eng = _Engine(ring.p, MonomialOrder.elimination(drop))
    elems = eng.groebner([as_vector(g).to_terms() for g in gens], rank1=True)
    out = []
    for t in elems:
        if all(m[i] == 0 for _, m in t for i in drop):
            out.append(Polynomial(ring, {m: c for (_, m), c in t.items()}))
    return out
