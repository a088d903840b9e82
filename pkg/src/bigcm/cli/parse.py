"""Text formats: ASCII polynomials and the line-oriented session format.

Session format::

    # comment
    p: 7
    vars: x y z
    relations: x^3+y^3+z^3
    ideal I: x, y
    poly u: z^2
    free F: 2
    module M:
      x, y
      0, z
    submodule N of F: [x, 0], [y, z]
    map alpha: R -> M: [1, 0]

``module`` rows list the presentation matrix row by row (relations are the
columns). A ``map`` lists the images of the source generators as vectors in
the target. The ring itself is always available as the free module ``R``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from bigcm.gb import VectorPoly
from bigcm.polycore import PolyRing, Polynomial, is_prime


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.message = message
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


def _tokenize(text: str):
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        col = m.start(m.lastindex) if m.lastindex else m.start()
        if m.group(1):
            out.append(("num", int(m.group(1)), col))
        elif m.group(2):
            out.append(("name", m.group(2), col))
        elif m.group(3):
            if m.group(3).isspace():
                pos = m.end()
                continue
            out.append(("op", m.group(3), col))
        pos = m.end()
    out.append(("end", None, len(text)))
    return out


class _PolyParser:
    # expr := term (('+'|'-') term)* ; term := factor ('*' factor)* ;
    # factor := atom ('^' num)? ; atom := num | var | '(' expr ')' | '-' factor
    def __init__(self, text: str, ring: PolyRing, line: int | None, col0: int):
        self.toks = _tokenize(text)
        self.i = 0
        self.ring = ring
        self.line = line
        self.col0 = col0

    def error(self, msg, tok=None):
        tok = tok or self.toks[self.i]
        raise ParseError(msg, self.line, self.col0 + tok[2] + 1)

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def parse(self) -> Polynomial:
        if self.peek()[0] == "end":
            self.error("empty polynomial")
        f = self.expr()
        if self.peek()[0] != "end":
            self.error(f"unexpected {self.peek()[1]!r}")
        return f

    def expr(self):
        f = self.term()
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            g = self.term()
            f = f + g if op == "+" else f - g
        return f

    def term(self):
        f = self.factor()
        while self.peek()[:2] == ("op", "*"):
            self.take()
            f = f * self.factor()
        return f

    def factor(self):
        if self.peek()[:2] == ("op", "-"):
            self.take()
            return -self.factor()
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            tok = self.take()
            if tok[0] != "num":
                self.error("exponent must be a non-negative integer", tok)
            base = base ** tok[1]
        return base

    def atom(self):
        tok = self.take()
        kind, val, _ = tok
        if kind == "num":
            return self.ring.constant(val)
        if kind == "name":
            if val not in self.ring.variables:
                self.error(f"unknown variable {val!r}", tok)
            return self.ring.var(val)
        if (kind, val) == ("op", "("):
            f = self.expr()
            if self.take()[:2] != ("op", ")"):
                self.error("expected ')'", self.toks[self.i - 1])
            return f
        self.error(f"unexpected {val!r}" if val is not None else "unexpected end of input", tok)


def parse_poly(text: str, ring: PolyRing, line: int | None = None, column: int = 0) -> Polynomial:
    return _PolyParser(text, ring, line, column).parse()


def _split_top(text: str, sep: str = ","):
    """Split on ``sep`` outside brackets; yields (piece, offset)."""
    depth = 0
    start = 0
    for i, ch in enumerate(text):
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        elif ch == sep and depth == 0:
            yield text[start:i], start
            start = i + 1
    yield text[start:], start


def parse_poly_list(text: str, ring: PolyRing, line=None, column=0) -> list[Polynomial]:
    if not text.strip():
        return []
    return [parse_poly(piece, ring, line, column + off) for piece, off in _split_top(text)]


def parse_vectors(text: str, ring: PolyRing, line=None, column=0) -> list[VectorPoly]:
    """``[a, b], [c, d]`` -> vectors."""
    out = []
    for piece, off in _split_top(text):
        s = piece.strip()
        if not s:
            continue
        lead = piece.index(s[0])
        if not (s.startswith("[") and s.endswith("]")):
            raise ParseError("expected a bracketed vector like [x, y]", line, column + off + lead + 1)
        out.append(VectorPoly(parse_poly_list(s[1:-1], ring, line, column + off + lead + 1)))
    return out


@dataclass
class Session:
    """Named objects parsed from an input file."""

    ring: object = None  # PresentedRing
    ideals: dict = field(default_factory=dict)
    polys: dict = field(default_factory=dict)
    modules: dict = field(default_factory=dict)
    submodules: dict = field(default_factory=dict)
    maps: dict = field(default_factory=dict)
    output: str = "human"

    def names(self):
        for d in (self.ideals, self.polys, self.modules, self.submodules, self.maps):
            yield from d

    def lookup(self, name: str):
        for d in (self.ideals, self.polys, self.modules, self.submodules, self.maps):
            if name in d:
                return d[name]
        raise KeyError(name)


_HEADER = re.compile(r"^(\w+)(?:\s+(\w+))?(?:\s+of\s+(\w+))?\s*:(.*)$")
_MAP_HEAD = re.compile(r"^map\s+(\w+)\s*:\s*(\w+)\s*->\s*(\w+)\s*:(.*)$")


def parse_input(text: str) -> Session:
    from bigcm.ringmod import FPModule, ModuleMap, PresentedRing

    sess = Session()
    p = None
    variables = None
    relations_text = None
    ring = None
    lines = text.splitlines()
    i = 0

    def need_ring(lineno):
        nonlocal ring
        if ring is None:
            if p is None or variables is None:
                raise ParseError("'p:' and 'vars:' must come before any object", lineno)
            poly_ring = PolyRing(p, variables)
            rels = []
            if relations_text is not None:
                rels = parse_poly_list(relations_text[0], poly_ring, relations_text[1], relations_text[2])
            ring = PresentedRing(poly_ring, rels)
            sess.ring = ring
            sess.modules["R"] = FPModule.free(ring, 1)
        return ring

    def define(d, name, value, lineno):
        if name in set(sess.names()):
            raise ParseError(f"duplicate name {name!r}", lineno)
        d[name] = value

    while i < len(lines):
        raw = lines[i]
        lineno = i + 1
        i += 1
        stripped = raw.split("#", 1)[0].rstrip()
        if not stripped.strip():
            continue
        mm = _MAP_HEAD.match(stripped.strip())
        if mm:
            name, src, dst, body = mm.groups()
            R = need_ring(lineno)
            try:
                source, target = sess.modules[src], sess.modules[dst]
            except KeyError as exc:
                raise ParseError(f"unknown module {exc.args[0]!r}", lineno) from None
            col = stripped.index(body)
            images = parse_vectors(body, R.poly_ring, lineno, col)
            try:
                f = ModuleMap(source, target, images)
            except ValueError as exc:
                raise ParseError(str(exc), lineno) from None
            define(sess.maps, name, f, lineno)
            continue
        m = _HEADER.match(stripped.strip())
        if not m:
            raise ParseError("expected 'keyword [name]: value'", lineno, 1)
        key, name, parent, body = m.groups()
        col = stripped.index(":") + 1
        if key == "p" and name is None:
            try:
                p = int(body.strip())
            except ValueError:
                raise ParseError("modulus must be an integer", lineno, col + 1) from None
            if not is_prime(p):
                raise ParseError("modulus not prime", lineno, col + 1)
        elif key == "vars" and name is None:
            variables = body.split()
            if not variables:
                raise ParseError("no variables given", lineno)
            if len(set(variables)) != len(variables):
                raise ParseError("duplicate variable names", lineno)
        elif key == "relations" and name is None:
            if ring is not None:
                raise ParseError("relations must precede all objects", lineno)
            relations_text = (body, lineno, col)
        elif key == "output" and name is None:
            sess.output = body.strip()
        elif key == "ideal" and name:
            R = need_ring(lineno)
            define(sess.ideals, name, parse_poly_list(body, R.poly_ring, lineno, col), lineno)
        elif key == "poly" and name:
            R = need_ring(lineno)
            define(sess.polys, name, parse_poly(body, R.poly_ring, lineno, col), lineno)
        elif key == "free" and name:
            R = need_ring(lineno)
            try:
                rank = int(body.strip())
            except ValueError:
                raise ParseError("free module rank must be an integer", lineno, col + 1) from None
            define(sess.modules, name, FPModule.free(R, rank), lineno)
        elif key == "module" and name:
            R = need_ring(lineno)
            rows = []
            if body.strip():
                rows.append(parse_poly_list(body, R.poly_ring, lineno, col))
            while i < len(lines) and lines[i][:1] in (" ", "\t") and lines[i].split("#", 1)[0].strip():
                row_text = lines[i].split("#", 1)[0]
                rows.append(parse_poly_list(row_text, R.poly_ring, i + 1, 0))
                i += 1
            if not rows:
                raise ParseError("module needs at least one row", lineno)
            width = len(rows[0])
            if any(len(r) != width for r in rows):
                raise ParseError("presentation rows have different lengths", lineno)
            cols = [VectorPoly([r[j] for r in rows]) for j in range(width)]
            cols = [c for c in cols if not c.is_zero()]
            define(sess.modules, name, FPModule(R, len(rows), cols), lineno)
        elif key == "submodule" and name:
            R = need_ring(lineno)
            if parent is None or parent not in sess.modules:
                raise ParseError(f"submodule needs 'of <module>' naming a known module", lineno)
            M = sess.modules[parent]
            vecs = parse_vectors(body, R.poly_ring, lineno, col)
            if any(v.rank != M.ngens for v in vecs):
                raise ParseError("vector length does not match the module", lineno)
            define(sess.submodules, name, (M, vecs), lineno)
        else:
            raise ParseError(f"unknown keyword {key!r}", lineno, 1)
    need_ring(len(lines))
    return sess
