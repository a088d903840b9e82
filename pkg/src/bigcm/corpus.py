"""Named rings with verified metadata: polynomial rings, cubic cones and the
Segre product of a cubic cone with a polynomial ring in two variables."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from bigcm.gb import buchberger, normal_form
from bigcm.polycore import PolyRing, Polynomial, StructureError, is_prime
from bigcm.ringmod import FPModule, PresentedRing, is_partial_sop, krull_dim, ring_kernel


@dataclass
class CorpusEntry:
    name: str
    ring: PresentedRing
    dim: int
    sops: list = field(default_factory=list)
    relations: list = field(default_factory=list)  # elements that must vanish in the ring
    is_domain: bool = True  # asserted, not verified
    fpure: str = "unknown"  # "fedder", "not-fedder", "regular", "evidenced", "unknown"
    regular: bool = False
    notes: str = ""

    def poly(self, text: str) -> Polynomial:
        return self.ring.poly_ring(text)


def fedder_is_fpure(R: PresentedRing) -> bool:
    """For a hypersurface S/(f): F-pure iff f^(p-1) is not in (X_1^p, ..., X_n^p)."""
    if len(R.defining_ideal) != 1:
        raise StructureError("Fedder test implemented for principal defining ideals only")
    f = R.defining_ideal[0]
    S = R.poly_ring
    p = S.p
    frob_m = buchberger([S.var(i) ** p for i in range(S.nvars)])
    return not normal_form(f ** (p - 1), frob_m).is_zero()


def polynomial_ring(p: int, variables: str) -> CorpusEntry:
    S = PolyRing(p, list(variables))
    R = PresentedRing(S, [], f"poly-{p}-{variables}")
    return CorpusEntry(R.name, R, len(variables), sops=[list(S.gens)], fpure="regular", regular=True)


def cubic_cone(p: int) -> CorpusEntry:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p == 3:
        raise ValueError("the cubic cone is not smooth off the vertex in characteristic 3")
    S = PolyRing(p, ["x", "y", "z"])
    x, y, z = S.gens
    R = PresentedRing(S, [x**3 + y**3 + z**3], f"cubic-cone-{p}")
    return CorpusEntry(
        R.name,
        R,
        2,
        sops=[[x, y]],
        fpure="fedder" if fedder_is_fpure(R) else "not-fedder",
    )


SEGRE_VARS = ["a", "b", "c", "d", "e", "g"]
SEGRE_IMAGES = ["x*s", "y*s", "z*s", "x*t", "y*t", "z*t"]


def segre_T(p: int) -> CorpusEntry:
    """Segre product of F_p[x,y,z]/(x^3+y^3+z^3) with F_p[s,t], on
    a=xs, b=ys, c=zs, d=xt, e=yt, g=zt."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p % 3 != 1:
        raise ValueError("need p = 1 mod 3")
    A = PolyRing(p, ["x", "y", "z", "s", "t"])
    target = PresentedRing(A, [A("x^3+y^3+z^3")])
    S = PolyRing(p, SEGRE_VARS)
    kernel = ring_kernel([A(t) for t in SEGRE_IMAGES], S, target)
    T = PresentedRing(S, kernel, f"segre-{p}")
    rel = S("c*g*(a-e) - c^2*d + g^2*b")
    return CorpusEntry(
        T.name,
        T,
        3,
        sops=[[S("b"), S("d"), S("a-e")]],
        relations=[rel],
        fpure="evidenced",
        notes="F-purity evidenced by Frobenius-closedness of the parameter ideals",
    )


@lru_cache(maxsize=None)
def get_entry(name: str) -> CorpusEntry:
    if name.startswith("poly-"):
        _, p, vars_ = name.split("-")
        return polynomial_ring(int(p), vars_)
    if name.startswith("cubic-cone-"):
        return cubic_cone(int(name.rsplit("-", 1)[1]))
    if name.startswith("segre-"):
        return segre_T(int(name.rsplit("-", 1)[1]))
    raise KeyError(name)


DEFAULT_ENTRIES = ("poly-7-xy", "poly-7-xyz", "cubic-cone-2", "cubic-cone-7", "segre-7")


def selftest(entry: CorpusEntry, frobenius_evidence: bool = True) -> dict:
    """Re-verify the metadata of an entry; every value should be True."""
    R = entry.ring
    out = {"dim": krull_dim(R) == entry.dim}
    out["sops"] = all(is_partial_sop(R, s) and len(s) <= entry.dim for s in entry.sops)
    out["relations"] = all(R.is_zero(f) for f in entry.relations)
    if entry.fpure in ("fedder", "not-fedder"):
        out["fedder"] = fedder_is_fpure(R) == (entry.fpure == "fedder")
    if entry.fpure == "evidenced" and frobenius_evidence:
        out["frobenius_closed_parameter_ideals"] = parameter_ideals_frobenius_closed(entry)
    return out


def parameter_ideals_frobenius_closed(entry: CorpusEntry, e_max: int = 2) -> bool:
    from bigcm.closure import FrobeniusClosure

    R = entry.ring
    F = FPModule.free(R, 1)
    cl = FrobeniusClosure(e_max)
    for sop in entry.sops:
        for k in range(1, len(sop) + 1):
            I = F.submodule(sop[:k])
            if not cl.closure(I, F).is_subset(I):
                return False
    return True
