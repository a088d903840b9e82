"""Exact arithmetic over prime fields: field elements, monomial orders and
sparse multivariate polynomials.

Monomials are plain tuples of exponents. A polynomial stores its terms in a
dict ``{exponents: coefficient}`` with coefficients reduced to ``1..p-1``;
zero coefficients are never stored.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from operator import add
from typing import Iterable, Sequence

import gmpy2

Monomial = tuple  # tuple[int, ...]


class StructureError(ValueError):
    """Operands live in incompatible rings (modulus, arity or rank)."""


def is_prime(n: int) -> bool:
    return n >= 2 and bool(gmpy2.is_prime(n))


@dataclass(frozen=True)
class FieldElement:
    """An element of F_p."""

    value: int
    p: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"modulus {self.p} is not prime")
        object.__setattr__(self, "value", self.value % self.p)

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.p != self.p:
                raise StructureError(f"modulus mismatch: {self.p} vs {other.p}")
            return other.value
        if isinstance(other, int):
            return other
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return o if o is NotImplemented else FieldElement(self.value + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return o if o is NotImplemented else FieldElement(self.value - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        return o if o is NotImplemented else FieldElement(o - self.value, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        return o if o is NotImplemented else FieldElement(self.value * o, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement(-self.value, self.p)

    def inverse(self) -> FieldElement:
        if self.value == 0:
            raise ZeroDivisionError("0 has no inverse in F_p")
        return FieldElement(pow(self.value, -1, self.p), self.p)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * FieldElement(o, self.p).inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return FieldElement(pow(self.value, e, self.p), self.p)

    def __int__(self):
        return self.value

    def __bool__(self):
        return self.value != 0

    def __str__(self):
        return str(self.value)


class MonomialOrder:
    """A monomial order given by a sort key on exponent tuples.

    ``negkey(e)`` is ascending in the *reverse* of the order: the largest
    monomial has the smallest negkey. That is the form the reduction heaps use.

    Kinds: ``grevlex``, ``lex`` and ``elim`` (a block order in which the
    monomials of the eliminated variables dominate, grevlex in each block).
    """

    def __init__(self, kind: str = "grevlex", eliminate: Iterable[int] = ()):
        if kind not in ("grevlex", "lex", "elim"):
            raise ValueError(f"unknown monomial order {kind!r}")
        self.kind = kind
        self.eliminate = tuple(sorted(set(eliminate)))
        if kind == "elim" and not self.eliminate:
            raise ValueError("elimination order needs a nonempty block")
        if kind == "grevlex":
            self.negkey = _grevlex_negkey
        elif kind == "lex":
            self.negkey = _lex_negkey
        else:
            self.negkey = self._elim_negkey

    @classmethod
    def grevlex(cls) -> MonomialOrder:
        return cls("grevlex")

    @classmethod
    def lex(cls) -> MonomialOrder:
        return cls("lex")

    @classmethod
    def elimination(cls, block) -> MonomialOrder:
        """Block order eliminating ``block``: an int k means the first k
        variables, otherwise an iterable of variable indices."""
        if isinstance(block, int):
            block = range(block)
        return cls("elim", block)

    def _elim_negkey(self, e):
        first = [e[i] for i in self.eliminate]
        rest = [v for i, v in enumerate(e) if i not in self._elim_set]
        return (-sum(first), *reversed(first), -sum(rest), *reversed(rest))

    @cached_property
    def _elim_set(self):
        return frozenset(self.eliminate)

    def key(self, e):
        """Ascending sort key (larger monomial, larger key)."""
        return tuple(-k for k in self.negkey(e))

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and (self.kind, self.eliminate) == (
            other.kind,
            other.eliminate,
        )

    def __hash__(self):
        return hash((self.kind, self.eliminate))

    def __repr__(self):
        if self.kind == "elim":
            return f"MonomialOrder.elimination({list(self.eliminate)})"
        return f"MonomialOrder.{self.kind}()"


def _grevlex_negkey(e):
    return (-sum(e), *reversed(e))


def _lex_negkey(e):
    return tuple(-v for v in e)


def monomial_divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def monomial_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(map(max, a, b))


class PolyRing:
    """The ambient ring F_p[x_1..x_n] with a fixed monomial order."""

    def __init__(self, p: int, variables: Sequence[str], order: MonomialOrder | None = None):
        if not is_prime(p):
            raise ValueError(f"modulus {p} is not prime")
        if len(set(variables)) != len(variables):
            raise ValueError("variable names must be distinct")
        self.p = p
        self.variables = tuple(variables)
        self.nvars = len(self.variables)
        self.order = order or MonomialOrder.grevlex()
        self.zero_exp = (0,) * self.nvars

    def __eq__(self, other):
        return isinstance(other, PolyRing) and (self.p, self.variables, self.order) == (
            other.p,
            other.variables,
            other.order,
        )

    def __hash__(self):
        return hash((self.p, self.variables, self.order))

    def __repr__(self):
        return f"PolyRing({self.p}, {list(self.variables)})"

    def with_order(self, order: MonomialOrder) -> PolyRing:
        return PolyRing(self.p, self.variables, order)

    @property
    def zero(self) -> Polynomial:
        return Polynomial(self, {})

    @property
    def one(self) -> Polynomial:
        return self.constant(1)

    def constant(self, c: int) -> Polynomial:
        c %= self.p
        return Polynomial(self, {self.zero_exp: c} if c else {})

    def monomial(self, exps, coeff: int = 1) -> Polynomial:
        exps = tuple(exps)
        if len(exps) != self.nvars:
            raise StructureError("exponent vector has wrong length")
        coeff %= self.p
        return Polynomial(self, {exps: coeff} if coeff else {})

    def var(self, name_or_index) -> Polynomial:
        i = self.variables.index(name_or_index) if isinstance(name_or_index, str) else name_or_index
        e = [0] * self.nvars
        e[i] = 1
        return Polynomial(self, {tuple(e): 1})

    @property
    def gens(self) -> tuple[Polynomial, ...]:
        return tuple(self.var(i) for i in range(self.nvars))

    def __call__(self, value) -> Polynomial:
        if isinstance(value, Polynomial):
            return value.to_ring(self)
        if isinstance(value, FieldElement):
            return self.constant(value.value)
        if isinstance(value, int):
            return self.constant(value)
        if isinstance(value, str):
            from bigcm.cli.parse import parse_poly

            return parse_poly(value, self)
        raise TypeError(f"cannot convert {type(value).__name__} to a polynomial")

    def field(self, v: int) -> FieldElement:
        return FieldElement(v, self.p)


class Polynomial:
    """An element of F_p[x_1..x_n]; immutable."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolyRing, terms: dict):
        self.ring = ring
        self.terms = terms
        self._hash = None

    # construction helpers
    def _new(self, terms):
        return Polynomial(self.ring, terms)

    def _lift(self, other) -> Polynomial:
        if isinstance(other, Polynomial):
            if other.ring.p != self.ring.p or other.ring.variables != self.ring.variables:
                raise StructureError(f"ring mismatch: {self.ring} vs {other.ring}")
            return other
        if isinstance(other, (int, FieldElement)):
            if isinstance(other, FieldElement) and other.p != self.ring.p:
                raise StructureError("modulus mismatch")
            return self.ring.constant(int(other))
        return NotImplemented

    # queries
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def sorted_terms(self) -> list[tuple[Monomial, int]]:
        """Terms in decreasing order for the ring's monomial order."""
        nk = self.ring.order.negkey
        return sorted(self.terms.items(), key=lambda t: nk(t[0]))

    def leading_monomial(self) -> Monomial | None:
        if not self.terms:
            return None
        return min(self.terms, key=self.ring.order.negkey)

    def leading_coefficient(self) -> int:
        m = self.leading_monomial()
        return 0 if m is None else self.terms[m]

    def constant_coefficient(self) -> int:
        return self.terms.get(self.ring.zero_exp, 0)

    def variables_used(self) -> set[int]:
        return {i for e in self.terms for i, v in enumerate(e) if v}

    # arithmetic
    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        p = self.ring.p
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = (out.get(m, 0) + c) % p
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return self._new(out)

    __radd__ = __add__

    def __neg__(self):
        p = self.ring.p
        return self._new({m: p - c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        p = self.ring.p
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(map(add, m1, m2))
                v = (out.get(m, 0) + c1 * c2) % p
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        return self._new(out)

    __rmul__ = __mul__

    def scale(self, c: int) -> Polynomial:
        c %= self.ring.p
        if not c:
            return self.ring.zero
        return self._new({m: v * c % self.ring.p for m, v in self.terms.items()})

    def shift(self, mono: Monomial, c: int = 1) -> Polynomial:
        """Multiply by the term ``c * x^mono``."""
        p = self.ring.p
        c %= p
        if not c:
            return self.ring.zero
        return self._new({tuple(map(add, m, mono)): v * c % p for m, v in self.terms.items()})

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not supported")
        result = self.ring.one
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def monic(self) -> Polynomial:
        lc = self.leading_coefficient()
        if lc in (0, 1):
            return self
        return self.scale(pow(lc, -1, self.ring.p))

    def compose(self, images: Sequence[Polynomial]) -> Polynomial:
        """Substitute ``images[i]`` for the i-th variable; the images all lie
        in one target ring, which is also the ring of the result."""
        if len(images) != self.ring.nvars:
            raise StructureError("need one image per variable")
        target = images[0].ring if images else self.ring
        powers: dict = {}
        out = target.zero
        for m, c in self.terms.items():
            term = target.constant(c)
            for i, e in enumerate(m):
                if e:
                    if (i, e) not in powers:
                        powers[i, e] = images[i] ** e
                    term = term * powers[i, e]
            out = out + term
        return out

    def evaluate(self, point: Sequence[int]) -> int:
        p = self.ring.p
        total = 0
        for m, c in self.terms.items():
            t = c
            for x, e in zip(point, m):
                if e:
                    t = t * pow(x, e, p) % p
            total += t
        return total % p

    def to_ring(self, ring: PolyRing) -> Polynomial:
        """Re-home into a ring with the same variables and modulus (order may differ)."""
        if ring.p != self.ring.p or ring.variables != self.ring.variables:
            raise StructureError(f"cannot move {self.ring} element into {ring}")
        return Polynomial(ring, self.terms)

    # comparison / hashing
    def __eq__(self, other):
        if isinstance(other, (int, FieldElement)):
            other = self._lift(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return (
            self.ring.p == other.ring.p
            and self.ring.variables == other.ring.variables
            and self.terms == other.terms
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring.p, self.ring.variables, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        return f"Polynomial({self})"

    def __str__(self):
        return format_poly(self)


def format_poly(f: Polynomial) -> str:
    """Canonical ASCII form, e.g. ``3*x^2*y + 6*z``; terms in decreasing order."""
    if not f.terms:
        return "0"
    names = f.ring.variables
    parts = []
    for m, c in f.sorted_terms():
        factors = []
        for name, e in zip(names, m):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        if not factors:
            parts.append(str(c))
        elif c == 1:
            parts.append("*".join(factors))
        else:
            parts.append(f"{c}*" + "*".join(factors))
    return " + ".join(parts)


def poly_arith(f: Polynomial, g: Polynomial, op: str) -> Polynomial:
    if f.ring.p != g.ring.p or f.ring.variables != g.ring.variables:
        raise StructureError(f"ring mismatch: {f.ring} vs {g.ring}")
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    raise ValueError(f"unknown operation {op!r}")


def frobenius_power(f: Polynomial, e: int) -> Polynomial:
    """Return f^(p^e). In characteristic p this is the sum of the q-th powers
    of the terms, and every coefficient c satisfies c^q = c."""
    if e < 0:
        raise ValueError("e must be non-negative")
    q = f.ring.p**e
    return Polynomial(f.ring, {tuple(v * q for v in m): c for m, c in f.terms.items()})


def nullspace_mod_p(rows: Sequence[Sequence[int]], p: int) -> list[list[int]]:
    """Basis of {c : sum_i c_i * rows[i] = 0} over F_p (left kernel)."""
    n = len(rows)
    if n == 0:
        return []
    width = len(rows[0])
    aug = [[v % p for v in row] + [1 if j == i else 0 for j in range(n)] for i, row in enumerate(rows)]
    pivot_row = 0
    for col in range(width):
        piv = next((r for r in range(pivot_row, n) if aug[r][col]), None)
        if piv is None:
            continue
        aug[pivot_row], aug[piv] = aug[piv], aug[pivot_row]
        inv = pow(aug[pivot_row][col], -1, p)
        prow = [v * inv % p for v in aug[pivot_row]]
        aug[pivot_row] = prow
        for r in range(n):
            if r != pivot_row and aug[r][col]:
                f = aug[r][col]
                aug[r] = [(a - f * b) % p for a, b in zip(aug[r], prow)]
        pivot_row += 1
        if pivot_row == n:
            break
    return [row[width:] for row in aug[pivot_row:]]
