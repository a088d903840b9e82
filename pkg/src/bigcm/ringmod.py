"""Presented rings R = S/J, submodules of free R-modules, finitely presented
modules and their homomorphisms.

Conventions
-----------
* Elements of R are polynomials of the ambient ring S (representatives).
* A submodule of a finitely presented module M = R^n / Im(relations) is stored
  as its full preimage in R^n, i.e. a :class:`Submodule` of R^n whose
  generators include M's relation columns. Membership, equality, sums and
  intersections of submodules of M are then plain operations in R^n.
* Gradings are standard (every variable has degree 1); free modules carry
  generator degrees (``degrees``), so R(-a) is supported.
"""

from __future__ import annotations

import itertools
from functools import cached_property
from typing import Sequence

from bigcm.gb import GroebnerBasis, TrackedBasis, VectorPoly, as_vector, buchberger, eliminate
from bigcm.polycore import PolyRing, Polynomial, StructureError, frobenius_power


class PresentedRing:
    """R = F_p[x_1..x_n] / J with a cached Groebner basis of J."""

    def __init__(self, poly_ring: PolyRing, relations: Sequence[Polynomial] = (), name: str | None = None):
        self.poly_ring = poly_ring
        self.p = poly_ring.p
        self.variables = poly_ring.variables
        self.name = name or "R"
        rels = [poly_ring(f) for f in relations]
        self.gb = buchberger(rels, ring=poly_ring)
        self.relations = self.gb.polys if rels else []
        self.defining_ideal = [f for f in rels if f]
        self.graded = all(f.is_homogeneous() for f in self.defining_ideal)

    def __repr__(self):
        return f"PresentedRing({self.name}: F_{self.p}[{', '.join(self.variables)}]/{self.relations})"

    # elements
    @property
    def gens(self) -> tuple[Polynomial, ...]:
        return self.poly_ring.gens

    @property
    def zero(self) -> Polynomial:
        return self.poly_ring.zero

    @property
    def one(self) -> Polynomial:
        return self.poly_ring.one

    def __call__(self, value) -> Polynomial:
        return self.reduce(self.poly_ring(value))

    def reduce(self, f: Polynomial) -> Polynomial:
        if not self.relations:
            return f
        return Polynomial(self.poly_ring, {m: c for (_, m), c in self.gb.reduce_terms(
            {(0, m): c for m, c in f.terms.items()}).items()})

    def reduce_vector(self, v: VectorPoly) -> VectorPoly:
        return v.map(self.reduce)

    def is_zero(self, f) -> bool:
        return self.reduce(f).is_zero()

    def modulus(self, rank: int) -> list[VectorPoly]:
        """J * R^rank as vectors; a Groebner basis for any POT order."""
        zero = self.poly_ring.zero
        return [
            VectorPoly([g if j == i else zero for j in range(rank)])
            for i in range(rank)
            for g in self.relations
        ]

    # ideals
    def ideal(self, gens: Sequence) -> Submodule:
        return Submodule(self, 1, [VectorPoly([self.poly_ring(g)]) for g in gens])

    def maximal_ideal(self) -> Submodule:
        return self.ideal(self.gens)

    def quotient(self, extra: Sequence[Polynomial], name: str | None = None) -> PresentedRing:
        return PresentedRing(self.poly_ring, list(self.relations) + list(extra), name)


def _monomials_of_degree(nvars: int, d: int):
    if d < 0:
        return
    for combo in itertools.combinations_with_replacement(range(nvars), d):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        yield tuple(e)


def krull_dim(R: PresentedRing) -> int:
    """Dimension of S/J as the largest set of variables containing the support
    of no leading monomial of J's Groebner basis; -1 for the zero ring."""
    n = R.poly_ring.nvars
    supports = []
    for _, e in R.gb.leading_terms():
        s = 0
        for i, v in enumerate(e):
            if v:
                s |= 1 << i
        supports.append(s)
    if 0 in supports:
        return -1
    for size in range(n, -1, -1):
        for combo in itertools.combinations(range(n), size):
            u = sum(1 << i for i in combo)
            if all(s & ~u for s in supports):
                return size
    return 0


def is_partial_sop(R: PresentedRing, xs: Sequence[Polynomial]) -> bool:
    """True iff dim R/(x_1..x_i) = dim R - i for every prefix."""
    xs = [R.poly_ring(x) for x in xs]
    if not xs:
        raise ValueError("need at least one element")
    if R.graded and not all(x.is_homogeneous() for x in xs):
        raise ValueError("elements must be homogeneous over a graded ring")
    d = krull_dim(R)
    for i in range(1, len(xs) + 1):
        if krull_dim(R.quotient(xs[:i])) != d - i:
            return False
    return True


def ring_kernel(images: Sequence[Polynomial], source: PolyRing, target: PresentedRing) -> list[Polynomial]:
    """Kernel of source -> target sending the i-th variable to images[i]."""
    images = [target.poly_ring(f) for f in images]
    if len(images) != source.nvars:
        raise StructureError("need one image per source variable")
    if target.graded and not all(f.is_homogeneous() for f in images):
        raise ValueError("images must be homogeneous")
    tvars = [f"_t{i}" for i in range(target.poly_ring.nvars)]
    svars = [f"_s{i}" for i in range(source.nvars)]
    big = PolyRing(source.p, tvars + svars)
    nt = len(tvars)

    def up(f):
        return Polynomial(big, {m + (0,) * source.nvars: c for m, c in f.terms.items()})

    graph = [big.gens[nt + i] - up(f) for i, f in enumerate(images)]
    graph += [up(f) for f in target.relations]
    kept = eliminate(graph, svars)
    out = [Polynomial(source, {m[nt:]: c for m, c in f.terms.items()}) for f in kept]
    return out


class Submodule:
    """A submodule of the free module R^rank, given by generators.

    ``degrees`` are the degrees of the ambient basis vectors (default 0).
    Membership is decided by a lazily cached Groebner basis of the lifted
    generators (generators plus J * R^rank) in S^rank.
    """

    # set on closure results: certified degree range and (element, e) pairs
    degree_bound: int | None = None
    exponents: list = []

    def __init__(
        self,
        ring: PresentedRing,
        rank: int,
        gens: Sequence,
        degrees: Sequence[int] | None = None,
        _known: list | None = None,
    ):
        self.ring = ring
        self.rank = rank
        self.degrees = tuple(degrees) if degrees is not None else (0,) * rank
        if len(self.degrees) != rank:
            raise StructureError("degrees must have one entry per basis vector")
        vecs = []
        for g in gens:
            v = as_vector(g)
            if v.rank != rank:
                raise StructureError(f"generator of rank {v.rank} in a rank-{rank} module")
            v = ring.reduce_vector(v)
            if not v.is_zero():
                vecs.append(v)
        self.generators = vecs
        self._known = _known
        self._partial: GroebnerBasis | None = None

    @cached_property
    def gb(self) -> GroebnerBasis:
        mod = self.ring.modulus(self.rank)
        if self._known is not None:
            return buchberger(
                mod, ring=self.ring.poly_ring, rank=self.rank, known=self._known
            )
        return buchberger(self.generators, ring=self.ring.poly_ring, rank=self.rank, known=mod)

    @cached_property
    def _graded(self) -> bool:
        return self.ring.graded and self.is_homogeneous()

    def gb_upto(self, degree: int) -> GroebnerBasis:
        """A Groebner basis that decides membership of homogeneous elements of
        degree <= ``degree``; the full basis when it is known or the submodule
        is not graded."""
        if "gb" in self.__dict__ or not self._graded:
            return self.gb
        hit = self._partial
        if hit is None or hit.degree_limit < degree:
            if hit is not None:
                # grow geometrically so repeated queries do not recompute often
                degree = max(degree, 2 * hit.degree_limit)
            mod = self.ring.modulus(self.rank)
            S = self.ring.poly_ring
            if self._known is not None:
                hit = buchberger(mod, ring=S, rank=self.rank, known=self._known, shifts=self.degrees, degree_limit=degree)
            else:
                hit = buchberger(self.generators, ring=S, rank=self.rank, known=mod, shifts=self.degrees, degree_limit=degree)
            if hit.degree_limit is None:
                self.__dict__["gb"] = hit
            else:
                self._partial = hit
        return hit

    def _gb_for(self, v: VectorPoly) -> GroebnerBasis:
        # truncation only pays off for bracket powers, whose generators sit in
        # high degree while queries usually do not
        if self._known is not None and self._graded and v.is_homogeneous(self.degrees):
            return self.gb_upto(v.degree(self.degrees))
        return self.gb

    def __repr__(self):
        return f"Submodule(rank={self.rank}, gens={self.generators})"

    # membership and comparison
    def contains(self, u) -> bool:
        v = as_vector(u)
        if v.rank != self.rank:
            raise StructureError(f"rank mismatch: {v.rank} vs {self.rank}")
        if v.is_zero():
            return True
        return not self._gb_for(v).reduce_terms(v.to_terms())

    def __contains__(self, u):
        return self.contains(u)

    def reduce(self, u) -> VectorPoly:
        v = as_vector(u)
        if v.is_zero():
            return v
        return VectorPoly.from_terms(self.ring.poly_ring, self.rank, self._gb_for(v).reduce_terms(v.to_terms()))

    def is_subset(self, other: Submodule) -> bool:
        self._check(other)
        return all(other.contains(g) for g in self.generators)

    def __le__(self, other):
        return self.is_subset(other)

    def __eq__(self, other):
        if not isinstance(other, Submodule):
            return NotImplemented
        return self.is_subset(other) and other.is_subset(self)

    __hash__ = None

    def _check(self, other: Submodule):
        if other.rank != self.rank:
            raise StructureError(f"rank mismatch: {self.rank} vs {other.rank}")

    def is_zero(self) -> bool:
        return not self.generators

    # constructions
    def __add__(self, other: Submodule) -> Submodule:
        self._check(other)
        return Submodule(self.ring, self.rank, self.generators + other.generators, self.degrees)

    def with_generators(self, extra: Sequence) -> Submodule:
        return Submodule(self.ring, self.rank, self.generators + [as_vector(g) for g in extra], self.degrees)

    def scale(self, ideal_gens: Sequence[Polynomial]) -> Submodule:
        """I * N for the ideal generated by ``ideal_gens``."""
        return Submodule(
            self.ring, self.rank, [g * f for f in ideal_gens for g in self.generators], self.degrees
        )

    def intersect(self, other: Submodule) -> Submodule:
        self._check(other)
        if not self.generators or not other.generators:
            return Submodule(self.ring, self.rank, [], self.degrees)
        tb = TrackedBasis(self.ring.poly_ring, self.rank, self.generators, other.gb.generators)
        out = []
        for a in tb.syzygies():
            v = VectorPoly.zero(self.ring.poly_ring, self.rank)
            for coeff, g in zip(a, self.generators):
                if coeff:
                    v = v + g * coeff
            out.append(v)
        return Submodule(self.ring, self.rank, out, self.degrees)

    def colon(self, x: Polynomial) -> Submodule:
        """{u in R^rank : x u in N}."""
        x = self.ring.poly_ring(x)
        if self.ring.is_zero(x):
            raise ValueError("colon by zero is the whole module; refusing")
        images = [VectorPoly.unit(self.ring.poly_ring, self.rank, i) * x for i in range(self.rank)]
        return preimage(self.ring, images, self, self.degrees)

    def colon_ideal(self, other: Submodule) -> Submodule:
        """(N : L) as an ideal of R, for submodules N, L of the same free module."""
        self._check(other)
        out = Submodule(self.ring, 1, [self.ring.one])
        for g in other.generators:
            images = [g]
            out = out.intersect(preimage(self.ring, images, self, (0,)))
        return out

    def bracket_power(self, e: int) -> Submodule:
        """Image under the e-th Frobenius functor: component-wise q-th powers."""
        if e < 0:
            raise ValueError("e must be non-negative")
        if e == 0:
            return self
        q = self.ring.p**e
        gens = [g.map(lambda f: frobenius_power(f, e)) for g in self.generators]
        # Frobenius of a Groebner basis of N + J R^r is a Groebner basis of its bracket power.
        known = [
            {(pos, tuple(v * q for v in m)): c for (pos, m), c in t.items()}
            for t in self.gb._elements
        ]
        return Submodule(self.ring, self.rank, gens, [d * q for d in self.degrees], _known=known)

    def minimal_generators(self, base: Submodule | None = None) -> list[VectorPoly]:
        """Drop generators that are combinations of the others (plus ``base``);
        over a graded ring with homogeneous generators this is a minimal set."""
        kept = list(self.generators)
        base_gens = base.generators if base is not None else []
        i = len(kept) - 1
        while i >= 0:
            others = kept[:i] + kept[i + 1 :]
            if Submodule(self.ring, self.rank, others + base_gens).contains(kept[i]):
                kept.pop(i)
            i -= 1
        return kept

    def is_homogeneous(self) -> bool:
        return all(g.is_homogeneous(self.degrees) for g in self.generators)

    def generator_degrees(self) -> list[int]:
        return [g.degree(self.degrees) for g in self.generators]

    def standard_basis(self, degree: int) -> list[VectorPoly]:
        """Monomial vectors of the given degree that are not leading terms of
        this submodule: an F_p-basis of (R^rank / N) in that degree."""
        leads: dict[int, list] = {}
        for pos, e in self.gb.leading_terms():
            leads.setdefault(pos, []).append(e)
        S = self.ring.poly_ring
        out = []
        for j in range(self.rank):
            for e in _monomials_of_degree(S.nvars, degree - self.degrees[j]):
                if any(all(a <= b for a, b in zip(le, e)) for le in leads.get(j, ())):
                    continue
                comps = [S.zero] * self.rank
                comps[j] = S.monomial(e)
                out.append(VectorPoly(comps))
        return out


def preimage(ring: PresentedRing, images: Sequence[VectorPoly], K: Submodule, degrees=None) -> Submodule:
    """{a in R^t : sum a_i images[i] in K}."""
    t = len(images)
    tb = TrackedBasis(ring.poly_ring, K.rank, [as_vector(v) for v in images], K.gb.generators)
    return Submodule(ring, t, tb.syzygies(), degrees)


def bracket_power(N: Submodule, e: int) -> Submodule:
    return N.bracket_power(e)


def submodule_membership(u, N: Submodule) -> bool:
    return N.contains(u)


def colon(N: Submodule, x: Polynomial, M_rank: int | None = None) -> Submodule:
    if M_rank is not None and M_rank != N.rank:
        raise StructureError("rank mismatch")
    return N.colon(x)


class FPModule:
    """coker(R^m -> R^n): n generators, relations given as columns (vectors of length n)."""

    def __init__(
        self,
        ring: PresentedRing,
        ngens: int,
        relations: Sequence[VectorPoly] = (),
        degrees: Sequence[int] | None = None,
        labels: Sequence[str] | None = None,
    ):
        self.ring = ring
        self.ngens = ngens
        rels = []
        for r in relations:
            r = as_vector(r)
            if r.rank != ngens:
                raise StructureError(f"relation of length {r.rank} for {ngens} generators")
            rels.append(r)
        self.relations = rels
        self.degrees = tuple(degrees) if degrees is not None else (0,) * ngens
        if len(self.degrees) != ngens:
            raise StructureError("one degree per generator")
        self.labels = tuple(labels) if labels is not None else tuple(f"w{i + 1}" for i in range(ngens))

    @classmethod
    def free(cls, ring: PresentedRing, rank: int, degrees=None) -> FPModule:
        return cls(ring, rank, [], degrees)

    @classmethod
    def cyclic(cls, ring: PresentedRing, ideal_gens: Sequence[Polynomial]) -> FPModule:
        """R/I."""
        return cls(ring, 1, [VectorPoly([ring.poly_ring(g)]) for g in ideal_gens])

    def __repr__(self):
        return f"FPModule({self.ngens} gens, {len(self.relations)} relations)"

    @property
    def rank(self) -> int:
        return self.ngens

    def is_free(self) -> bool:
        return all(self.ring.reduce_vector(r).is_zero() for r in self.relations)

    def matrix(self) -> list[list[Polynomial]]:
        """Presentation matrix: rows = generators, columns = relations."""
        return [[r[i] for r in self.relations] for i in range(self.ngens)]

    def is_graded(self) -> bool:
        return self.ring.graded and all(r.is_homogeneous(self.degrees) for r in self.relations)

    def element_degree(self, v: VectorPoly) -> int:
        return as_vector(v).degree(self.degrees)

    # submodules (preimage convention)
    @cached_property
    def zero_submodule(self) -> Submodule:
        return Submodule(self.ring, self.ngens, self.relations, self.degrees)

    def submodule(self, gens: Sequence) -> Submodule:
        return Submodule(
            self.ring, self.ngens, [as_vector(g) for g in gens] + self.relations, self.degrees
        )

    def whole(self) -> Submodule:
        return self.submodule([self.unit(i) for i in range(self.ngens)])

    def unit(self, i: int) -> VectorPoly:
        return VectorPoly.unit(self.ring.poly_ring, self.ngens, i)

    def element(self, coords: Sequence) -> VectorPoly:
        return VectorPoly([self.ring.poly_ring(c) for c in coords])

    def is_zero_element(self, v) -> bool:
        return self.zero_submodule.contains(v)

    def equal_elements(self, u, v) -> bool:
        return self.is_zero_element(as_vector(u) - as_vector(v))

    def quotient(self, N: Submodule) -> FPModule:
        """M / N for a submodule N of M (in preimage form or any generators)."""
        return FPModule(self.ring, self.ngens, self.relations + N.generators, self.degrees, self.labels)

    def maximal_submodule(self) -> Submodule:
        """m M."""
        return self.submodule([self.unit(i) * x for i in range(self.ngens) for x in self.ring.gens])

    def direct_sum(self, other: FPModule) -> FPModule:
        n1, n2 = self.ngens, other.ngens
        zero = self.ring.poly_ring.zero
        rels = [VectorPoly(list(r) + [zero] * n2) for r in self.relations]
        rels += [VectorPoly([zero] * n1 + list(r)) for r in other.relations]
        return FPModule(self.ring, n1 + n2, rels, self.degrees + other.degrees)

    def minimize(self) -> FPModule:
        """Eliminate generators killed by relations with a unit entry, then
        drop redundant relations. Returns an isomorphic module."""
        R = self.ring
        rels = [R.reduce_vector(r) for r in self.relations]
        keep = list(range(self.ngens))
        changed = True
        while changed:
            changed = False
            for ci, col in enumerate(rels):
                for row in keep:
                    c = col[row]
                    if c.degree() == 0:
                        inv = pow(c.constant_coefficient(), -1, R.p)
                        # e_row = -inv * sum_{j != row} col_j e_j ; substitute into the other columns
                        new = []
                        for cj, other in enumerate(rels):
                            if cj == ci:
                                continue
                            coef = other[row]
                            if coef:
                                other = other - col * (coef * inv)
                            new.append(R.reduce_vector(other))
                        rels = new
                        keep.remove(row)
                        changed = True
                        break
                if changed:
                    break
        sub_rels = [VectorPoly([r[i] for i in keep]) for r in rels] if keep else []
        sub_rels = [r for r in sub_rels if not r.is_zero()]
        degs = [self.degrees[i] for i in keep]
        if not keep:
            return FPModule(R, 0, [], [])
        pruned = Submodule(R, len(keep), sub_rels, degs).minimal_generators()
        return FPModule(R, len(keep), pruned, degs)


def same_presentation(A: FPModule, B: FPModule) -> bool:
    """Equal generator count and equal relation submodules."""
    if A.ngens != B.ngens:
        return False
    if A.ngens == 0:
        return True
    return A.zero_submodule == B.zero_submodule


class ModuleMap:
    """Homomorphism source -> target: images of the source generators,
    written in the target's generators. Well-definedness is checked."""

    def __init__(self, source: FPModule, target: FPModule, images: Sequence, check: bool = True):
        imgs = [target.ring.reduce_vector(as_vector(v)) for v in images]
        if len(imgs) != source.ngens:
            raise StructureError(f"need {source.ngens} images, got {len(imgs)}")
        if any(v.rank != target.ngens for v in imgs):
            raise StructureError("image has the wrong length for the target")
        self.source = source
        self.target = target
        self.images = imgs
        if check:
            for r in source.relations:
                if not target.is_zero_element(self.apply(r)):
                    raise ValueError("matrix does not carry relations into relations")

    @property
    def matrix(self) -> list[list[Polynomial]]:
        """Rows = target generators, columns = source generators."""
        return [[v[i] for v in self.images] for i in range(self.target.ngens)]

    def apply(self, v) -> VectorPoly:
        v = as_vector(v)
        out = VectorPoly.zero(self.target.ring.poly_ring, self.target.ngens)
        for coeff, img in zip(v, self.images):
            if coeff:
                out = out + img * coeff
        return out

    __call__ = apply

    def image(self, N: Submodule | None = None) -> Submodule:
        gens = self.images if N is None else [self.apply(g) for g in N.generators]
        return self.target.submodule(gens)

    def kernel(self) -> Submodule:
        """Kernel as a submodule of the source (preimage form)."""
        K = preimage(self.target.ring, self.images, self.target.zero_submodule, self.source.degrees)
        return K.with_generators(self.source.relations)

    def preimage(self, K: Submodule) -> Submodule:
        P = preimage(self.target.ring, self.images, K, self.source.degrees)
        return P.with_generators(self.source.relations)

    def is_injective(self) -> bool:
        return self.kernel().is_subset(self.source.zero_submodule)

    def is_surjective(self) -> bool:
        img = self.image()
        return all(img.contains(self.target.unit(i)) for i in range(self.target.ngens))

    def compose(self, first: ModuleMap) -> ModuleMap:
        """self o first."""
        return ModuleMap(first.source, self.target, [self.apply(v) for v in first.images], check=False)


def frobenius_module(M: FPModule, e: int) -> FPModule:
    """F^e(M): entry-wise q-th powers of the presentation matrix."""
    if e < 0:
        raise ValueError("e must be non-negative")
    q = M.ring.p**e
    rels = [r.map(lambda f: frobenius_power(f, e)) for r in M.relations]
    return FPModule(M.ring, M.ngens, rels, [d * q for d in M.degrees], M.labels)


def tensor(B: FPModule, M: FPModule) -> FPModule:
    """B (x) M on generators b_i (x) w_j (index i * M.ngens + j)."""
    if B.ring is not M.ring and B.ring.poly_ring != M.ring.poly_ring:
        raise StructureError("modules over different rings")
    nb, nm = B.ngens, M.ngens
    zero = M.ring.poly_ring.zero
    rels = []
    for r in B.relations:
        for j in range(nm):
            comps = [zero] * (nb * nm)
            for i in range(nb):
                comps[i * nm + j] = r[i]
            rels.append(VectorPoly(comps))
    for s in M.relations:
        for i in range(nb):
            comps = [zero] * (nb * nm)
            for j in range(nm):
                comps[i * nm + j] = s[j]
            rels.append(VectorPoly(comps))
    degs = [db + dm for db in B.degrees for dm in M.degrees]
    return FPModule(M.ring, nb * nm, rels, degs)


def tensor_element(B: FPModule, M: FPModule, i: int, u: VectorPoly) -> VectorPoly:
    """b_i (x) u in B (x) M."""
    nm = M.ngens
    zero = M.ring.poly_ring.zero
    comps = [zero] * (B.ngens * nm)
    for j, c in enumerate(as_vector(u)):
        comps[i * nm + j] = c
    return VectorPoly(comps)
