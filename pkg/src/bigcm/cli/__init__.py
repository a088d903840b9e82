"""Command-line entry point.

Exit codes: 0 all checks pass, 1 a check failed (a witness is printed),
2 usage or parse error, 3 a computation needed more than the certified
degree bound.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from bigcm.cli.parse import ParseError, Session, parse_input, parse_poly, parse_poly_list, parse_vectors

DEFAULT_AXIOM_RING = "cubic-cone-7"
EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BOUND = 0, 1, 2, 3

COMMANDS = (
    "gb",
    "member",
    "colon",
    "fclosure",
    "check-axioms",
    "colon-capture",
    "phantom",
    "modify-chain",
    "repro-example-5-2",
    "corpus-selftest",
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--ring", help="corpus name (e.g. cubic-cone-7, poly-7-xyz, segre-7) or input file")
    common.add_argument("--closure", help="identity | full | frobenius:e_max=2 | bmod:B=<name> | tight-witness:c=<poly>,e_max=3")
    common.add_argument("--e-max", type=int, dest="e_max")
    common.add_argument("--degree-bound", type=int, dest="degree_bound")
    common.add_argument("--seed", type=int)
    common.add_argument("--count", type=int)
    common.add_argument("--json", action="store_true")
    common.add_argument("--timing", action="store_true", help="include elapsed_ms in JSON reports")

    parser = _Parser(prog="bigcm", description="Closure operations, phantom extensions and module modifications over F_p.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("gb", parents=[common], help="reduced Groebner basis of an ideal")
    p.add_argument("polys", nargs="*")
    p.add_argument("--ideal", help="ideal name from the input file")

    p = sub.add_parser("member", parents=[common], help="submodule membership")
    p.add_argument("element", help="polynomial or [a, b, ...]")
    p.add_argument("gens", nargs="*")
    p.add_argument("--submodule", help="submodule or ideal name from the input file")

    p = sub.add_parser("colon", parents=[common], help="(N : x)")
    p.add_argument("x")
    p.add_argument("gens", nargs="*")
    p.add_argument("--submodule")

    p = sub.add_parser("fclosure", parents=[common], help="Frobenius closure up to a degree bound")
    p.add_argument("gens", nargs="*")
    p.add_argument("--submodule")

    p = sub.add_parser("check-axioms", parents=[common], help="run the axiom suite on seeded instances")
    p.add_argument("--axioms", default="1,2,3,4,5,6")
    p.add_argument("--lemma", action="store_true", help="also check the lemma parts a-e")
    p.add_argument("--max-degree", type=int, default=2, dest="max_degree")

    p = sub.add_parser("colon-capture", parents=[common], help="colon capturing along a system of parameters")
    p.add_argument("--sop", help="comma-separated parameters (default: the corpus sop)")

    p = sub.add_parser("phantom", parents=[common], help="presentation data and phantom test for R -> M")
    p.add_argument("--map", dest="map_name", help="map R -> M from the input file (default: identity of R)")
    p.add_argument("--sop")

    p = sub.add_parser("modify-chain", parents=[common], help="modification chain along parameter relations")
    p.add_argument("--sop")
    p.add_argument("--t-max", type=int, default=2, dest="t_max")
    p.add_argument("--relation-u", dest="relation_u", help="seed relation: the element u of R")
    p.add_argument("--relation-us", dest="relation_us", help="seed relation: comma-separated u_1..u_k")

    sub.add_parser("repro-example-5-2", parents=[common], help="reproduce the Segre counterexample end to end")

    p = sub.add_parser("corpus-selftest", parents=[common], help="re-verify corpus metadata")
    p.add_argument("--skip-frobenius", action="store_true", dest="skip_frobenius")
    return parser


# ---------------------------------------------------------------- helpers


class _Context:
    def __init__(self, args):
        from bigcm.corpus import get_entry

        self.args = args
        self.session: Session | None = None
        self.entry = None
        name = args.ring
        if name is None and args.command == "check-axioms":
            name = DEFAULT_AXIOM_RING
        if name is None:
            raise UsageError("--ring is required")
        if os.path.isfile(name):
            with open(name, encoding="utf-8") as fh:
                self.session = parse_input(fh.read())
            self.ring = self.session.ring
            self.ring_name = os.path.basename(name)
            if self.ring.name == "R":
                self.ring.name = self.ring_name
        else:
            try:
                self.entry = get_entry(name)
            except (KeyError, ValueError) as exc:
                raise UsageError(f"unknown ring {name!r}: {exc}") from None
            self.ring = self.entry.ring
            self.ring_name = name

    @property
    def S(self):
        return self.ring.poly_ring

    def poly(self, text: str):
        return parse_poly(text, self.S)

    def polys(self, texts):
        out = []
        for t in texts:
            out.extend(parse_poly_list(t, self.S))
        return out

    def element(self, text: str):
        from bigcm.gb import VectorPoly

        t = text.strip()
        if t.startswith("["):
            (v,) = parse_vectors(t, self.S)
            return v
        return VectorPoly([self.poly(t)])

    def submodule(self, name, gens):
        """(M, N) from a session name or from generator strings (an ideal of R)."""
        from bigcm.ringmod import FPModule

        if name:
            if self.session is None:
                raise UsageError("--submodule needs --ring <file>")
            if name in self.session.submodules:
                M, vecs = self.session.submodules[name]
                return M, M.submodule(vecs)
            if name in self.session.ideals:
                F = FPModule.free(self.ring, 1)
                return F, F.submodule(self.session.ideals[name])
            raise UsageError(f"no submodule or ideal named {name!r}")
        F = FPModule.free(self.ring, 1)
        vecs = [self.element(g) for g in gens]
        ranks = {v.rank for v in vecs}
        if ranks - {1}:
            if len(ranks) != 1:
                raise UsageError("generators have different lengths")
            F = FPModule.free(self.ring, ranks.pop())
        return F, F.submodule(vecs)

    def sop(self):
        text = getattr(self.args, "sop", None)
        if text:
            return parse_poly_list(text, self.S)
        if self.entry is not None and self.entry.sops:
            return list(self.entry.sops[0])
        if self.session is not None and "sop" in self.session.ideals:
            return list(self.session.ideals["sop"])
        raise UsageError("--sop is required for this ring")

    def closure(self, default: str):
        from bigcm.closure import FrobeniusClosure, TightWitness, parse_closure

        spec = self.args.closure or default
        modules = dict(self.session.modules) if self.session is not None else {}
        try:
            cl = parse_closure(spec, self.ring, modules)
        except ParseError:
            raise
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        if self.args.e_max is not None:
            if isinstance(cl, FrobeniusClosure):
                cl = FrobeniusClosure(self.args.e_max, cl.degree_bound)
            elif isinstance(cl, TightWitness):
                cl = TightWitness(cl.c, self.args.e_max)
        if self.args.degree_bound is not None and isinstance(cl, FrobeniusClosure):
            cl.degree_bound = self.args.degree_bound
        return cl


def _fmt(v) -> str:
    from bigcm.axiomcheck import format_vector

    return format_vector(v)


def _emit(out, args, payload: dict, lines: list[str]):
    if args.json:
        out.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    else:
        for line in lines:
            out.write(line + "\n")


def _reports_exit(reports) -> int:
    return EXIT_FAIL if any(r.status == "fail" for r in reports) else EXIT_OK


def _report_line(r) -> str:
    line = f"{r.instance_id} {r.axiom}: {r.status}"
    if r.witness is not None:
        line += f" witness={r.witness}"
    if r.reason and r.status != "pass":
        line += f" ({r.reason})"
    return line


# ---------------------------------------------------------------- commands


def cmd_gb(ctx: _Context, out) -> int:
    from bigcm.gb import buchberger

    args = ctx.args
    if args.ideal:
        if ctx.session is None or args.ideal not in ctx.session.ideals:
            raise UsageError(f"no ideal named {args.ideal!r}")
        gens = list(ctx.session.ideals[args.ideal])
    else:
        gens = ctx.polys(args.polys)
    G = buchberger(gens + list(ctx.ring.relations), ring=ctx.S, rank=1)
    basis = [str(g) for g in G.polys]
    _emit(out, args, {"ring": ctx.ring_name, "basis": basis}, basis)
    return EXIT_OK


def cmd_member(ctx: _Context, out) -> int:
    args = ctx.args
    M, N = ctx.submodule(args.submodule, args.gens)
    u = ctx.element(args.element)
    if u.rank != M.ngens:
        raise UsageError("element length does not match the module")
    member = N.contains(u)
    rem = N.reduce(u)
    payload = {"element": _fmt(u), "member": member, "normal_form": _fmt(rem)}
    lines = [f"{_fmt(u)} in N: {str(member).lower()}"]
    if not member:
        lines.append(f"normal form: {_fmt(rem)}")
    _emit(out, args, payload, lines)
    return EXIT_OK if member else EXIT_FAIL


def cmd_colon(ctx: _Context, out) -> int:
    args = ctx.args
    M, N = ctx.submodule(args.submodule, args.gens)
    x = ctx.poly(args.x)
    try:
        C = N.colon(x)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    gens = [_fmt(g) for g in C.minimal_generators(M.zero_submodule)]
    _emit(out, args, {"x": str(x), "generators": gens}, gens)
    return EXIT_OK


def cmd_fclosure(ctx: _Context, out) -> int:
    from bigcm.closure import FrobeniusClosure

    args = ctx.args
    M, N = ctx.submodule(args.submodule, args.gens)
    cl = ctx.closure("frobenius:e_max=2")
    if not isinstance(cl, FrobeniusClosure):
        raise UsageError("fclosure needs a frobenius closure spec")
    C = cl.closure(N, M, args.degree_bound)
    gens = [_fmt(g) for g in C.minimal_generators(M.zero_submodule)]
    new = [{"element": _fmt(v), "e": e} for v, e in C.exponents]
    payload = {
        "closure": cl.spec(),
        "degree_bound": C.degree_bound,
        "generators": gens,
        "new_elements": new,
        "closed": not new,
    }
    lines = [f"closure ({cl.spec()}, certified up to degree {C.degree_bound}):"]
    lines += [f"  {g}" for g in gens]
    lines += [f"  new: {d['element']} at e={d['e']}" for d in new]
    _emit(out, args, payload, lines)
    return EXIT_OK


def cmd_check_axioms(ctx: _Context, out) -> int:
    from bigcm.axiomcheck import gen_instances, run_suite

    args = ctx.args
    try:
        axioms = tuple(int(a) for a in args.axioms.split(","))
    except ValueError:
        raise UsageError("--axioms takes a comma-separated list of integers") from None
    if any(a < 1 or a > 7 for a in axioms):
        raise UsageError("axiom indices run from 1 to 7")
    seed = 1 if args.seed is None else args.seed
    count = 20 if args.count is None else args.count
    if count < 1:
        raise UsageError("--count must be at least 1")
    cl = ctx.closure("identity")
    insts = gen_instances(ctx.ring, seed, count, args.max_degree)
    reports = run_suite(cl, insts, axioms, lemma=args.lemma)
    payload = {
        "ring": ctx.ring_name,
        "closure": cl.spec(),
        "seed": seed,
        "count": count,
        "reports": [r.to_json(args.timing) for r in reports],
    }
    fails = [r for r in reports if r.status == "fail"]
    lines = [f"ring {ctx.ring_name}, closure {cl.spec()}, seed {seed}, {count} instances"]
    lines += [_report_line(r) for r in reports if r.status != "pass"]
    lines.append(f"{len(reports) - len(fails)}/{len(reports)} checks without failure")
    _emit(out, args, payload, lines)
    return _reports_exit(reports)


def cmd_colon_capture(ctx: _Context, out) -> int:
    from bigcm.axiomcheck import check_colon_capturing

    args = ctx.args
    cl = ctx.closure("identity")
    sop = ctx.sop()
    try:
        reports = check_colon_capturing(cl, ctx.ring, sop, prefix=f"{ctx.ring_name}-")
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    payload = {
        "ring": ctx.ring_name,
        "closure": cl.spec(),
        "sop": [str(x) for x in sop],
        "reports": [r.to_json(args.timing) for r in reports],
    }
    _emit(out, args, payload, [_report_line(r) for r in reports])
    return _reports_exit(reports)


def cmd_phantom(ctx: _Context, out) -> int:
    from bigcm.gb import VectorPoly
    from bigcm.modify import find_parameter_relation
    from bigcm.phantom import NotInjective, build_phantom_presentation, check_diagram, check_notbad, is_phantom
    from bigcm.ringmod import FPModule, ModuleMap

    args = ctx.args
    cl = ctx.closure("identity")
    if args.map_name:
        if ctx.session is None or args.map_name not in ctx.session.maps:
            raise UsageError(f"no map named {args.map_name!r}")
        alpha = ctx.session.maps[args.map_name]
        rel = None
    else:
        F = FPModule.free(ctx.ring, 1)
        alpha = ModuleMap(F, F, [VectorPoly([ctx.S.one])])
        sop = ctx.sop()
        rel = None
        for j in range(1, len(sop) + 1):
            rel = find_parameter_relation(F, sop[:j])
            if rel is not None:
                break
    try:
        pres = build_phantom_presentation(alpha, rel)
    except NotInjective as exc:
        raise UsageError(str(exc)) from None
    diag = check_diagram(pres)
    phantom = is_phantom(pres, cl)
    notbad = check_notbad(pres)
    payload = {
        "closure": cl.spec(),
        "generators": pres.labels,
        "nu1": [[str(f) for f in row] for row in pres.nu1_matrix()],
        "x": _fmt(pres.x_vec) if pres.m else None,
        "y": _fmt(pres.y_vec) if pres.m and pres.y_vec is not None else None,
        "diagram": diag,
        "phantom": phantom,
        "notbad": notbad,
        "relation_used": rel.describe() if rel is not None else None,
    }
    lines = [f"generators: {', '.join(pres.labels)}"]
    if pres.m:
        lines.append("nu1:")
        lines += ["  " + ", ".join(str(f) for f in row) for row in pres.nu1_matrix()]
    else:
        lines.append("nu1: no relations")
    lines += [f"{k}: {str(v).lower()}" for k, v in sorted(diag.items())]
    lines += [f"phantom ({cl.spec()}): {str(phantom).lower()}", f"notbad: {str(notbad).lower()}"]
    _emit(out, args, payload, lines)
    ok = notbad and all(v for k, v in diag.items() if k != "entries_in_m")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_modify_chain(ctx: _Context, out) -> int:
    from bigcm.gb import VectorPoly
    from bigcm.modify import ParameterRelation, run_chain

    args = ctx.args
    cl = ctx.closure("identity")
    sop = ctx.sop()
    seed_rel = None
    if args.relation_u is not None:
        us = parse_poly_list(args.relation_us or "", ctx.S)
        if len(us) >= len(sop):
            raise UsageError("a seed relation needs fewer u_i than parameters")
        seed_rel = ParameterRelation(
            tuple(sop[: len(us) + 1]), VectorPoly([ctx.poly(args.relation_u)]), [VectorPoly([u]) for u in us]
        )
    try:
        chain = run_chain(ctx.ring, sop, args.t_max, cl, seed_relation=seed_rel, seed=args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    payload = chain.to_json()
    payload["seed"] = args.seed
    lines = [f"closure {chain.closure}, phantom tracking {chain.phantom_tracking}"]
    for rep in payload["stages"]:
        flags = ", ".join(f"{k}={str(v).lower()}" for k, v in rep.items() if isinstance(v, bool))
        lines.append(f"stage {rep['stage']}: {rep['generators']} generators, {rep['relations']} relations; {flags}")
        if rep.get("relation_used"):
            r = rep["relation_used"]
            lines.append(f"  relation: u={r['u']} us={r['us']} sop={r['sop']}")
    lines += [f"violation at stage {v['stage']}: {v['kind']}" for v in chain.violations]
    _emit(out, args, payload, lines)
    return EXIT_OK if chain.ok else EXIT_FAIL


def repro_example(p: int = 7, e_max: int = 2, timing: bool = False) -> dict:
    """Every computational fact of the Segre counterexample, with expected values."""
    from bigcm.axiomcheck import check_axiom, colon_instance
    from bigcm.closure import FrobeniusClosure
    from bigcm.corpus import get_entry, parameter_ideals_frobenius_closed
    from bigcm.ringmod import FPModule, is_partial_sop, krull_dim

    t0 = time.perf_counter()
    entry = get_entry(f"segre-{p}")
    T = entry.ring
    S = T.poly_ring
    b, d, a_e = entry.sops[0]
    u = S("c*g")
    F = FPModule.free(T, 1)
    I = F.submodule([b, d])
    cl = FrobeniusClosure(e_max)
    C = cl.closure(I, F)
    rep7 = check_axiom(cl, colon_instance(T, [b, d, a_e], 2, "segre-axiom7"), 7)
    checks = [
        ("relation c*g*(a-e) - c^2*d + g^2*b vanishes", T.is_zero(entry.relations[0]), True),
        ("krull dimension is 3", krull_dim(T) == 3, True),
        ("b, d, a-e is a system of parameters", is_partial_sop(T, [b, d, a_e]), True),
        ("c*g in (b, d) : (a-e)", I.colon(a_e).contains(u), True),
        ("c*g in (b, d)", I.contains(u), False),
        ("(b, d) is Frobenius closed", C == I, True),
        ("colon axiom fails with witness c*g", rep7.status == "fail" and rep7.witness == "c*g", True),
        ("Frobenius-closed parameter ideals (F-purity evidence)", parameter_ideals_frobenius_closed(entry, e_max), True),
    ]
    out = {
        "ring": entry.name,
        "closure": cl.spec(),
        "degree_bound": C.degree_bound,
        "checks": [{"check": name, "observed": obs, "expected": exp, "ok": obs == exp} for name, obs, exp in checks],
        "axiom7_report": rep7.to_json(timing),
        "elapsed_ms": round((time.perf_counter() - t0) * 1000, 3) if timing else None,
    }
    out["ok"] = all(c["ok"] for c in out["checks"])
    return out


def cmd_repro(args, out) -> int:
    e_max = args.e_max if args.e_max is not None else 2
    result = repro_example(7, e_max, args.timing)
    lines = [f"{result['ring']}, {result['closure']}, degree bound {result['degree_bound']}"]
    for c in result["checks"]:
        mark = "ok" if c["ok"] else "MISMATCH"
        lines.append(f"[{mark}] {c['check']}: {str(c['observed']).lower()} (expected {str(c['expected']).lower()})")
    _emit(out, args, result, lines)
    return EXIT_OK if result["ok"] else EXIT_FAIL


def cmd_corpus_selftest(args, out) -> int:
    from bigcm.corpus import DEFAULT_ENTRIES, get_entry, selftest

    names = [args.ring] if args.ring else list(DEFAULT_ENTRIES)
    results = {}
    for name in names:
        try:
            entry = get_entry(name)
        except (KeyError, ValueError) as exc:
            raise UsageError(f"unknown ring {name!r}: {exc}") from None
        results[name] = selftest(entry, frobenius_evidence=not args.skip_frobenius)
    ok = all(all(r.values()) for r in results.values())
    lines = []
    for name, r in results.items():
        bad = [k for k, v in r.items() if not v]
        lines.append(f"{name}: " + ("ok" if not bad else "FAILED " + ", ".join(bad)))
    _emit(out, args, {"entries": results, "ok": ok}, lines)
    return EXIT_OK if ok else EXIT_FAIL


_HANDLERS = {
    "gb": cmd_gb,
    "member": cmd_member,
    "colon": cmd_colon,
    "fclosure": cmd_fclosure,
    "check-axioms": cmd_check_axioms,
    "colon-capture": cmd_colon_capture,
    "phantom": cmd_phantom,
    "modify-chain": cmd_modify_chain,
}


def run_command(argv, out=None, err=None) -> int:
    """Run one subcommand; returns the exit code."""
    from bigcm.closure import BoundExceeded
    from bigcm.polycore import StructureError

    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        try:
            args = parser.parse_args(list(argv))
        except SystemExit as exc:  # --help
            return EXIT_OK if not exc.code else EXIT_USAGE
        if args.command is None:
            raise UsageError(parser.format_usage().strip())
        if args.command == "repro-example-5-2":
            return cmd_repro(args, out)
        if args.command == "corpus-selftest":
            return cmd_corpus_selftest(args, out)
        return _HANDLERS[args.command](_Context(args), out)
    except UsageError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE
    except ParseError as exc:
        err.write(f"parse error: {exc}\n")
        return EXIT_USAGE
    except StructureError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE
    except BoundExceeded as exc:
        err.write(f"exceeded certified bound: {exc}\n")
        return EXIT_BOUND


def main() -> None:
    sys.exit(run_command(sys.argv[1:]))
