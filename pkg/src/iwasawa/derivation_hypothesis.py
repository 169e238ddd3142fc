"""Explicit sl2 derivation systems and checks of the derivation hypothesis.

Verdicts produced here are relative to the listed generator family and the
power range {s, s+1}; no claim is made about sources outside that family.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import gf
from .errors import CoprimalityFailed, NotInClosure, SearchSpaceTooLarge, UnsupportedParameters
from .poly import (
    DerivationOp,
    GradedPoly,
    apply_derivation,
    diff,
    divides,
    from_vector,
    monomials_of_degree,
    multiples,
    multivariate_gcd,
    to_vector,
)

NAMES = ("e", "f", "h")
E, F, H = 0, 1, 2

PAIRS = {
    "odd": (0, 1, 2),
    "01": (0, 1),
    "12": (2,),
    "single": (0, 1, 2),
}

FAMILY_LABEL = "relative to the listed generator family"


def _mono(p: int, var: int, power: int) -> GradedPoly:
    return GradedPoly.var(p, 3, var, power, NAMES)


@dataclass(frozen=True)
class DerivationSystem:
    p: int
    l: int
    pair: str
    frobenius: tuple[int, ...]
    members: dict = field(default_factory=dict)
    provenance: str = ""

    def generators(self) -> list[str]:
        return sorted({u for u, _ in self.members}, key=NAMES.index)

    def restrict(self, r_values) -> list[tuple[tuple[str, int], DerivationOp]]:
        keys = sorted((k for k in self.members if k[1] in r_values), key=lambda k: (NAMES.index(k[0]), k[1]))
        return [(k, self.members[k]) for k in keys]

    def trivial(self) -> "DerivationSystem":
        """Same pair with every member replaced by the zero derivation."""
        zero = DerivationOp.zero(self.p, 3)
        return DerivationSystem(
            self.p, self.l, self.pair, self.frobenius, {k: zero for k in self.members}, "trivial family"
        )


def _member(p: int, terms: dict[int, tuple[int, int, int]]) -> DerivationOp:
    """terms[j] = (coefficient, variable, power) for coefficient * var^power d/dy_j."""
    out = {}
    for j, (c, var, power) in terms.items():
        out[j] = _mono(p, var, power).scale(c)
    return DerivationOp.from_terms(p, 3, out)


def _add(p: int, *ops: DerivationOp) -> DerivationOp:
    acc = DerivationOp.zero(p, 3)
    for op in ops:
        acc = acc + op
    return acc


def sl2_derivations(p: int, l: int, which_pair: str | None = None, r_values=(0, 1, 2)) -> DerivationSystem:
    """The operators D_{p^r u} for the congruence subgroup of level l."""
    if p == 2:
        if l < 2:
            raise UnsupportedParameters("p = 2 requires l >= 2")
        if which_pair not in ("01", "12", "single"):
            raise UnsupportedParameters("p = 2 needs which_pair in {01, 12, single}")
    else:
        if l < 1:
            raise UnsupportedParameters("odd p requires l >= 1")
        if which_pair not in (None, "odd", "single"):
            raise UnsupportedParameters(f"pair {which_pair!r} is only defined for p = 2")
        which_pair = "odd"
    members = {}
    for r in r_values:
        q = p ** (l + r)
        if which_pair == "odd":
            members[("e", r)] = _add(p, _member(p, {F: (1, H, q)}), _member(p, {H: (-2, E, q)}))
            members[("f", r)] = _add(p, _member(p, {E: (-1, H, q)}), _member(p, {H: (2, F, q)}))
            members[("h", r)] = _add(p, _member(p, {E: (2, E, q)}), _member(p, {F: (-2, F, q)}))
            prov = "sl2 system, odd p"
        elif which_pair == "01":
            members[("e", r)] = _member(p, {F: (1, H, q)})
            members[("f", r)] = _member(p, {E: (1, H, q)})
            members[("h", r)] = _add(p, _member(p, {E: (1, E, 2 * q)}), _member(p, {F: (-1, F, 2 * q)}))
            prov = "p = 2 chain, pair (KG0, KG1)"
        elif which_pair == "12":
            members[("e", r)] = _member(p, {H: (1, E, 2 * q)})
            members[("f", r)] = _member(p, {H: (1, F, 2 * q)})
            prov = "p = 2 chain, pair (KG1, KG2)"
        else:
            members[("e", r)] = _member(p, {F: (1, H, q)})
            members[("f", r)] = _member(p, {E: (1, H, q)})
            members[("h", r)] = _add(p, _member(p, {E: (1, E, 2 * q)}), _member(p, {F: (1, F, 2 * q)}))
            prov = "p = 2 single step pair (KG, KG^p)"
    return DerivationSystem(p, l, which_pair, PAIRS[which_pair], members, prov)


# ---------------------------------------------------------------------------
# elimination replay

@dataclass
class EliminationReport:
    premises: list = field(default_factory=list)
    steps: list = field(default_factory=list)
    conclusions: dict = field(default_factory=dict)
    label: str = FAMILY_LABEL

    @property
    def holds(self) -> bool:
        return all(c["direct"] for c in self.conclusions.values())


def _relation_value(rel: dict[int, GradedPoly], partials: list[GradedPoly]) -> GradedPoly:
    out = partials[0] * 0
    for v, c in rel.items():
        out = out + c * partials[v]
    return out


def eliminate_and_check(X: GradedPoly, Y: GradedPoly, s: int, system: DerivationSystem) -> EliminationReport:
    """Replay the elimination argument deriving d_v Y in XB for v in T."""
    T = system.frobenius
    partials = [diff(Y, v) for v in range(Y.d)]
    report = EliminationReport()
    relations: list[tuple[str, dict[int, GradedPoly]]] = []
    for (u, r), D in system.restrict({s, s + 1}):
        value = apply_derivation(D, Y)
        ok, q = divides(X, value)
        if not ok:
            raise NotInClosure(f"D_(p^{r} {u})(Y) is not in XB")
        report.premises.append({"member": [u, r], "quotient": q.to_json()})
        rel = {j: g for j, g in enumerate(D.images) if not g.is_zero()}
        relations.append((u, {"r": r, "rel": rel}))

    known: dict[int, dict] = {}
    for v in T:
        if partials[v].is_zero():
            known[v] = {"reason": "vanishes"}

    def single_terms():
        coeffs: dict[int, list] = {}
        for _, item in relations:
            rel = {v: c for v, c in item["rel"].items() if v not in known}
            if len(rel) == 1:
                (v, c), = rel.items()
                coeffs.setdefault(v, []).append(c)
        return coeffs

    derived = set()
    while any(v not in known for v in T):
        progress = False
        for v, cs in single_terms().items():
            if v in known or v not in T:
                continue
            g = cs[0] * 0
            for c in cs:
                g = multivariate_gcd(g, c)
            if multivariate_gcd(g, X).is_unit():
                known[v] = {"reason": "coprime coefficients", "gcd": g.to_json()}
                report.steps.append({"conclude": NAMES[v] if Y.d == 3 else v, "gcd": g.to_json()})
                progress = True
        if progress:
            continue
        # eliminate a shared variable between the r = s and r = s + 1 relations of one generator
        new = []
        by_gen: dict[str, list] = {}
        for u, item in relations:
            by_gen.setdefault(u, []).append(item)
        for u, items in by_gen.items():
            for a, b in itertools.combinations(items, 2):
                ra = {v: c for v, c in a["rel"].items() if v not in known}
                rb = {v: c for v, c in b["rel"].items() if v not in known}
                for v in sorted(set(ra) & set(rb)):
                    ca, cb = ra[v], rb[v]
                    g = multivariate_gcd(ca, cb)
                    fa, fb = divides(g, cb)[1], divides(g, ca)[1]
                    comb: dict[int, GradedPoly] = {}
                    for w in set(ra) | set(rb):
                        if w == v:
                            continue
                        val = fa * ra.get(w, ca * 0) - fb * rb.get(w, ca * 0)
                        if not val.is_zero():
                            comb[w] = val
                    if not comb:
                        continue
                    key = tuple(sorted((w, c) for w, c in ((w, hash(c)) for w, c in comb.items())))
                    if key in derived:
                        continue
                    derived.add(key)
                    ok, q = divides(X, _relation_value(comb, partials))
                    if not ok:
                        raise CoprimalityFailed("an eliminated relation left XB")
                    report.steps.append(
                        {
                            "generator": u,
                            "eliminate": NAMES[v] if Y.d == 3 else v,
                            "relation": {NAMES[w] if Y.d == 3 else w: c.to_json() for w, c in comb.items()},
                        }
                    )
                    new.append((u + "*", {"r": None, "rel": comb}))
        if not new:
            missing = [v for v in T if v not in known]
            raise CoprimalityFailed(f"no coprime coefficients for d/dy_{missing}")
        relations.extend(new)

    for v in T:
        ok, q = divides(X, partials[v])
        report.conclusions[NAMES[v] if Y.d == 3 else v] = {
            "direct": ok,
            "reason": known[v]["reason"],
            "quotient": q.to_json() if ok else None,
        }
    return report


# ---------------------------------------------------------------------------
# brute force over homogeneous Y

@dataclass
class HypothesisReport:
    violations: list
    mode: str
    degrees: dict = field(default_factory=dict)
    label: str = FAMILY_LABEL

    @property
    def holds(self) -> bool:
        return not self.violations


def _residue_map(X: GradedPoly, op, n: int, out_degree: int) -> np.ndarray:
    """Matrix of Y -> op(Y) modulo (XB) in degree out_degree, Y of degree n."""
    p, d = X.p, X.d
    monos = monomials_of_degree(d, n)
    width = len(monomials_of_degree(d, out_degree))
    rows = np.zeros((len(monos), width), dtype=np.int64)
    for i, m in enumerate(monos):
        img = op(GradedPoly.monomial(p, m))
        if not img.is_zero():
            rows[i] = to_vector(img, out_degree)
    k = out_degree - X.degree()
    if k >= 0:
        basis, piv = gf.rref(multiples(X, out_degree), p)
        rows = gf.reduce_against(basis, piv, rows, p)
    return rows


def _op_degree(D: DerivationOp) -> int | None:
    degs = {g.degree() for g in D.images if not g.is_zero()}
    if not degs:
        return None
    if len(degs) != 1 or not all(g.is_homogeneous() for g in D.images if not g.is_zero()):
        raise ValueError("derivation images must be homogeneous of one degree")
    return degs.pop() - 1


def _constraint_rows(X, ops, n):
    blocks = []
    for op, shift in ops:
        if shift is None:
            continue
        r = _residue_map(X, op, n, n + shift)
        if r.size:
            blocks.append(r)
    if not blocks:
        return np.zeros((len(monomials_of_degree(X.d, n)), 0), dtype=np.int64)
    return np.hstack(blocks)


def hypothesis_bruteforce(
    system: DerivationSystem,
    X: GradedPoly,
    D_max: int,
    s: int,
    mode: str = "linear",
    limit: int = 2**20,
) -> HypothesisReport:
    """Homogeneous Y of degree <= D_max with every D(Y) in XB but some d_v Y outside XB.

    ``linear`` solves the per-degree linear systems and returns one violating
    representative per independent direction; ``enumerate`` walks every
    coefficient vector and returns all violations.
    """
    if X.is_zero() or not X.is_homogeneous():
        raise ValueError("X must be a nonzero homogeneous polynomial")
    p, d = X.p, X.d
    members = system.restrict({s, s + 1})
    d_ops = [(D, _op_degree(D)) for _, D in members]
    partial_ops = [((lambda f, v=v: diff(f, v)), -1) for v in system.frobenius]
    if mode == "enumerate":
        total = sum(p ** len(monomials_of_degree(d, n)) for n in range(D_max + 1))
        if total > limit:
            raise SearchSpaceTooLarge(f"{total} candidates exceed {limit}")
    elif mode != "linear":
        raise ValueError("mode must be 'linear' or 'enumerate'")
    violations = []
    degrees = {}
    for n in range(D_max + 1):
        monos = monomials_of_degree(d, n)
        cons = _constraint_rows(X, [(D, k) for D, k in d_ops], n)
        want = _constraint_rows(X, partial_ops, n) if n > 0 else np.zeros((len(monos), 0), dtype=np.int64)
        if mode == "enumerate":
            count = 0
            for vec in itertools.product(range(p), repeat=len(monos)):
                v = np.array(vec, dtype=np.int64)
                if not v.any():
                    continue
                Y = from_vector(v, p, d, n, NAMES if d == 3 else None)
                if not all(divides(X, apply_derivation(D, Y))[0] for _, D in members):
                    continue
                if all(divides(X, diff(Y, j))[0] for j in system.frobenius):
                    continue
                violations.append(Y)
                count += 1
            degrees[n] = {"violations": count}
            continue
        # C_n = kernel of the constraint map, W_n = kernel of the partials map
        C = gf.nullspace(cons.T, p) if cons.shape[1] else np.eye(len(monos), dtype=np.int64)
        if C.shape[0] == 0:
            degrees[n] = {"closure": 0, "good": 0}
            continue
        image = (C @ want) % p if want.shape[1] else np.zeros((C.shape[0], 0), dtype=np.int64)
        good = gf.nullspace(image.T, p) if image.shape[1] else np.eye(C.shape[0], dtype=np.int64)
        degrees[n] = {"closure": int(C.shape[0]), "good": int(good.shape[0])}
        if good.shape[0] == C.shape[0]:
            continue
        # directions of C not in the good subspace
        gbasis, gpiv = gf.rref(good, p) if good.shape[0] else (np.zeros((0, C.shape[0]), dtype=np.int64), [])
        for e in np.eye(C.shape[0], dtype=np.int64):
            if gf.in_span(gbasis, gpiv, e, p):
                continue
            gbasis, gpiv = gf.rref(np.vstack([gbasis, e]), p)
            violations.append(from_vector((e @ C) % p, p, d, n, NAMES if d == 3 else None))
    return HypothesisReport(violations, mode, degrees)


def is_violation(system: DerivationSystem, X: GradedPoly, Y: GradedPoly, s: int) -> bool:
    """Y passes every listed D_{p^r u} (r in {s, s+1}) yet some d_v Y is not in XB."""
    for _, D in system.restrict({s, s + 1}):
        if not divides(X, apply_derivation(D, Y))[0]:
            return False
    return any(not divides(X, diff(Y, v))[0] for v in system.frobenius)
