"""Closure operations N -> N^cl inside a finitely presented module M.

Submodules of M are passed in preimage form (see :mod:`bigcm.ringmod`).
Four families are provided: the identity, Frobenius closure with an exponent
cap, closure induced by a finitely presented module B, and a bounded witness
check for tight closure. A "full" closure (everything closes to M) serves as a
negative control.
"""

from __future__ import annotations

from dataclasses import dataclass

from bigcm.gb import VectorPoly, as_vector
from bigcm.polycore import Polynomial, frobenius_power, nullspace_mod_p
from bigcm.ringmod import FPModule, Submodule, preimage, tensor, tensor_element

FULL = "full"
MEMBERSHIP = "membership-only"
SEMI = "semi-decision"


class BoundExceeded(RuntimeError):
    """A question lies above the degree range a closure was certified for."""


class UndecidableClosure(RuntimeError):
    """Raised when a semi-decision closure is asked for a definite answer."""


def frobenius_vector(v, e: int) -> VectorPoly:
    return as_vector(v).map(lambda f: frobenius_power(f, e))


class ClosureOperation:
    name = "closure"
    capability = FULL
    # True when contains() answers exactly in every degree
    exact_membership = True

    def closure(self, N: Submodule, M: FPModule, degree_bound: int | None = None) -> Submodule:
        raise NotImplementedError

    def contains(self, u, N: Submodule, M: FPModule) -> bool:
        return self.closure(N, M).contains(u)

    def spec(self) -> str:
        return self.name

    def __repr__(self):
        return f"<{type(self).__name__} {self.spec()}>"


def content_key(N: Submodule):
    """Hashable key equal for equal submodules (reduced bases are unique)."""
    return (N.rank, N.degrees, frozenset(tuple(sorted(t.items())) for t in N.gb._elements))


def _tag(S: Submodule, bound, exponents=None) -> Submodule:
    S.degree_bound = bound
    S.exponents = exponents or []
    return S


class IdentityClosure(ClosureOperation):
    name = "identity"

    def closure(self, N, M, degree_bound=None):
        return _tag(Submodule(N.ring, N.rank, N.generators, N.degrees), None)

    def contains(self, u, N, M):
        return N.contains(u)


class FullClosure(ClosureOperation):
    """Negative control: every submodule closes to the whole module."""

    name = "full"

    def closure(self, N, M, degree_bound=None):
        return _tag(M.whole(), None)

    def contains(self, u, N, M):
        return True


def default_degree_bound(N: Submodule, M: FPModule) -> int:
    degs = list(M.degrees) + N.generator_degrees()
    return max(degs, default=0) + 4


class FrobeniusClosure(ClosureOperation):
    """u is in N^F iff u^[q] lies in N^[q] inside F^e(M) for some e <= e_max.

    Membership is exact for the capped operation. The full closure is built
    degree by degree up to a degree bound (reported on the result).
    """

    name = "frobenius"

    def __init__(self, e_max: int = 2, degree_bound: int | None = None):
        if e_max < 1:
            raise ValueError("e_max must be at least 1")
        self.e_max = e_max
        self.degree_bound = degree_bound
        self._cache: dict = {}
        self._results: dict = {}

    def spec(self):
        return f"frobenius:e_max={self.e_max}"

    def _bracket(self, N: Submodule, e: int) -> Submodule:
        # N is in preimage form, so its bracket power already carries the
        # Frobenius-twisted relations of M.
        key = (content_key(N), e)
        hit = self._cache.get(key)
        if hit is None:
            if len(self._cache) > 256:
                self._cache.clear()
            hit = self._cache[key] = N.bracket_power(e)
        return hit

    def exponent(self, u, N: Submodule) -> int | None:
        """Smallest e <= e_max with u^[q] in N^[q], or None."""
        u = as_vector(u)
        if N.contains(u):
            return 0
        if not self.contains_at(u, N, self.e_max):
            return None
        for e in range(1, self.e_max):
            if self.contains_at(u, N, e):
                return e
        return self.e_max

    def contains_at(self, u, N: Submodule, e: int) -> bool:
        return self._bracket(N, e).contains(frobenius_vector(u, e))

    def contains(self, u, N, M=None):
        # the condition only gets weaker as e grows
        return N.contains(u) or self.contains_at(u, N, self.e_max)

    def closure(self, N, M, degree_bound=None):
        key = (content_key(N), M.degrees, M.is_graded(), degree_bound)
        hit = self._results.get(key)
        if hit is None:
            if len(self._results) > 256:
                self._results.clear()
            hit = self._results[key] = self._closure(N, M, degree_bound)
        return hit

    def _closure(self, N, M, degree_bound):
        if not (M.is_graded() and N.is_homogeneous()):
            raise ValueError("degree-by-degree closure needs a graded module and homogeneous submodule")
        bound = degree_bound if degree_bound is not None else self.degree_bound
        if bound is None:
            bound = default_degree_bound(N, M)
        top = max(N.generator_degrees(), default=0)
        if top > bound:
            raise BoundExceeded(f"submodule has generators of degree {top} above the bound {bound}")
        p = N.ring.p
        e = self.e_max
        q = p**e
        lo = min(M.degrees, default=0)
        # the quotient may vanish early; only degrees below that need a basis of N^[q]
        top_d = max((d for d in range(lo, bound + 1) if N.standard_basis(d)), default=None)
        if top_d is None:
            return _tag(N, bound, [])
        Nq = self._bracket(N, e)
        nf = _MonomialFrobeniusNF(Nq.gb_upto(q * top_d), q)
        cur = N
        found: list[tuple[VectorPoly, int]] = []
        for d in range(lo, top_d + 1):
            basis = cur.standard_basis(d)
            if not basis:
                continue
            images = [nf(b) for b in basis]
            cols = sorted({t for img in images for t in img})
            if not cols:
                kernel = [[1 if j == i else 0 for j in range(len(basis))] for i in range(len(basis))]
            else:
                index = {t: k for k, t in enumerate(cols)}
                rows = []
                for img in images:
                    row = [0] * len(cols)
                    for t, c in img.items():
                        row[index[t]] = c
                    rows.append(row)
                kernel = nullspace_mod_p(rows, p)
            new = []
            for lam in kernel:
                v = VectorPoly.zero(N.ring.poly_ring, N.rank)
                for c, b in zip(lam, basis):
                    if c:
                        v = v + b * c
                new.append(v)
            if new:
                found.extend((v, self.exponent(v, N)) for v in new)
                cur = cur.with_generators(new)
        return _tag(cur, bound, found)


class _MonomialFrobeniusNF:
    """Normal forms of x^(q a) e_j modulo a fixed submodule, memoized and
    built one variable at a time: NF(x_i^q m) = NF(x_i^q NF(m))."""

    def __init__(self, gb, q: int):
        self.gb = gb
        self.q = q
        self.memo: dict = {}

    def __call__(self, b: VectorPoly) -> dict:
        ((pos, a), c), = b.to_terms().items()
        out = self.of(pos, a)
        if c != 1:
            p = self.gb.ring.p
            out = {t: v * c % p for t, v in out.items()}
        return out

    def of(self, pos: int, a: tuple) -> dict:
        key = (pos, a)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        i = next((k for k, v in enumerate(a) if v), None)
        if i is None:
            res = self.gb.reduce_terms({(pos, a): 1})
        else:
            prev = self.of(pos, a[:i] + (a[i] - 1,) + a[i + 1 :])
            q = self.q
            shifted = {(tp, te[:i] + (te[i] + q,) + te[i + 1 :]): v for (tp, te), v in prev.items()}
            res = self.gb.reduce_terms(shifted) if shifted else {}
        self.memo[key] = res
        return res


class BModClosure(ClosureOperation):
    """u is in the closure iff b (x) u lies in Im(B (x) N -> B (x) M) for every
    generator b of the finitely presented module B. Computed exactly as an
    intersection of preimages, so no degree bound applies."""

    name = "bmod"

    def __init__(self, B: FPModule, label: str = "B"):
        self.B = B
        self.label = label

    def spec(self):
        return f"bmod:B={self.label}"

    def _target(self, N: Submodule, M: FPModule):
        BM = tensor(self.B, M)
        gens = [tensor_element(self.B, M, i, g) for i in range(self.B.ngens) for g in N.generators]
        return BM, BM.submodule(gens)

    def closure(self, N, M, degree_bound=None):
        BM, K = self._target(N, M)
        out = None
        for i in range(self.B.ngens):
            images = [tensor_element(self.B, M, i, M.unit(j)) for j in range(M.ngens)]
            P = preimage(N.ring, images, K, M.degrees)
            out = P if out is None else out.intersect(P)
        if out is None:
            # B = 0 closes everything
            return _tag(M.whole(), None)
        return _tag(out.with_generators(N.generators), None)

    def contains(self, u, N, M):
        BM, K = self._target(N, M)
        return all(K.contains(tensor_element(self.B, M, i, u)) for i in range(self.B.ngens))


@dataclass(frozen=True)
class Verdict:
    kind: str  # "consistent" or "fails_at"
    e: int

    @property
    def consistent(self) -> bool:
        return self.kind == "consistent"

    def __str__(self):
        return f"{self.kind}({self.e})"


class TightWitness(ClosureOperation):
    """Bounded evidence for tight closure: checks c u^[q] in N^[q] for e = 0..e_max."""

    name = "tight-witness"
    capability = SEMI
    exact_membership = False

    def __init__(self, c: Polynomial, e_max: int = 3):
        if c.is_zero():
            raise ValueError("test element c must be nonzero")
        if e_max < 0:
            raise ValueError("e_max must be non-negative")
        self.c = c
        self.e_max = e_max

    def spec(self):
        return f"tight-witness:c={self.c},e_max={self.e_max}"

    def verdict(self, u, N: Submodule, M: FPModule | None = None) -> Verdict:
        u = as_vector(u)
        for e in range(self.e_max + 1):
            v = frobenius_vector(u, e) * self.c
            if not N.bracket_power(e).contains(v):
                return Verdict("fails_at", e)
        return Verdict("consistent", self.e_max)

    def closure(self, N, M, degree_bound=None):
        raise UndecidableClosure("tight closure is only available as a witness check")

    def contains(self, u, N, M):
        raise UndecidableClosure("tight closure is only available as a witness check")


def tight_witness(c, u, N: Submodule, M: FPModule | None = None, e_max: int = 3) -> Verdict:
    return TightWitness(c, e_max).verdict(u, N, M)


def identity_closure(N: Submodule, M: FPModule) -> Submodule:
    return IdentityClosure().closure(N, M)


def frobenius_closure(N: Submodule, M: FPModule, e_max: int = 2, degree_bound: int | None = None) -> Submodule:
    return FrobeniusClosure(e_max, degree_bound).closure(N, M)


def bmod_closure(B: FPModule, N: Submodule, M: FPModule) -> Submodule:
    return BModClosure(B).closure(N, M)


def parse_closure(spec: str, ring=None, modules: dict | None = None) -> ClosureOperation:
    """Parse ``identity``, ``full``, ``frobenius:e_max=2``, ``bmod:B=name`` or
    ``tight-witness:c=<poly>,e_max=3``."""
    name, _, rest = spec.strip().partition(":")
    params = {}
    if rest:
        for item in rest.split(","):
            key, eq, val = item.partition("=")
            if not eq:
                raise ValueError(f"bad closure parameter {item!r}")
            params[key.strip()] = val.strip()
    if name == "identity":
        return IdentityClosure()
    if name == "full":
        return FullClosure()
    if name == "frobenius":
        bound = params.get("degree_bound")
        return FrobeniusClosure(int(params.get("e_max", 2)), int(bound) if bound else None)
    if name == "bmod":
        label = params.get("B", "R")
        if label == "R":
            if ring is None:
                raise ValueError("bmod:B=R needs a ring")
            return BModClosure(FPModule.free(ring, 1), "R")
        if not modules or label not in modules:
            raise ValueError(f"unknown module {label!r} for bmod closure")
        return BModClosure(modules[label], label)
    if name == "tight-witness":
        if ring is None:
            raise ValueError("tight-witness needs a ring to parse c")
        c = ring.poly_ring(params.get("c", "1"))
        return TightWitness(c, int(params.get("e_max", 3)))
    raise ValueError(f"unknown closure {name!r}")
