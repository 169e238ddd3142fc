"""Verification suites run by the command-line harness.

Each sweep function is usable on its own and returns ``(ok, witness)``; the
suite functions wrap them into check records.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import gf
from .anchors import anchor
from .delta import (
    TOP,
    a_closure_test,
    basis_sources,
    cleaning_loop,
    delta,
    delta_bruteforce,
    graded_ideal,
    leading_error_symbol,
    two_sided_ideal,
)
from .derivation_hypothesis import (
    NAMES,
    _constraint_rows,
    _op_degree,
    eliminate_and_check,
    hypothesis_bruteforce,
    is_violation,
    sl2_derivations,
)
from .errors import (
    IwasawaError,
    PrecisionExhausted,
    SearchSpaceTooLarge,
    WindowExceeded,
)
from .group_algebra import (
    QuotientAlgebra,
    build_quotient,
    commutator_filtration_check,
    induced_derivation,
    jadic_degree,
    principal_symbol,
    required_exponent,
    rho_derivation,
    verify_rho_formula,
)
from .lie import (
    GroupElement,
    PowerfulLieAlgebra,
    SubalgebraSpec,
    build_chevalley_sl2,
    check_bch_congruence,
    check_commutator_congruence,
    group_mul,
    group_product,
    sl2_single_step,
)
from .poly import (
    GradedPoly,
    TruncatedIdeal,
    divides,
    from_vector,
    gcd_all,
    in_b1,
    monomials_of_degree,
    partial_j,
    pseudo_null_test,
    random_homogeneous,
    reflexive_closure,
    to_vector,
)

PASS, FAIL, UNDECIDABLE = "pass", "fail", "undecidable-at-this-precision"
UNDECIDABLE_ERRORS = (PrecisionExhausted, WindowExceeded, SearchSpaceTooLarge)

SUITES = ("bch", "graded-ring", "filtration", "derivation-formula", "frobenius", "delta-cleaning", "hypothesis")


@dataclass
class CheckRecord:
    suite: str
    check_id: str
    anchor: str
    verdict: str
    witness: object
    elapsed_ms: float | None = None

    def as_dict(self) -> dict:
        return {
            "suite": self.suite,
            "check_id": self.check_id,
            "anchor": self.anchor,
            "verdict": self.verdict,
            "witness": self.witness,
            "elapsed_ms": self.elapsed_ms,
        }


def jsonable(obj):
    """Plain JSON data from witnesses holding tuples, numpy scalars or polynomials."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, float) and obj == TOP:
        return "TOP"
    if isinstance(obj, (GradedPoly,)):
        return repr(obj)
    if obj is None or isinstance(obj, (bool, int, float, str)):
        return obj
    return repr(obj)


class Recorder:
    def __init__(self, suite: str, timing: bool = False) -> None:
        self.suite = suite
        self.timing = timing
        self.records: list[CheckRecord] = []

    def check(self, check_id: str, anchor_key: str, fn: Callable[[], tuple[bool, object]]) -> CheckRecord:
        t0 = time.perf_counter()
        try:
            ok, witness = fn()
            verdict = PASS if ok else FAIL
        except UNDECIDABLE_ERRORS as exc:
            verdict, witness = UNDECIDABLE, {"error": type(exc).__name__, "message": str(exc)}
        except IwasawaError as exc:
            verdict = FAIL
            witness = {"error": type(exc).__name__, "message": str(exc)}
            extra = getattr(exc, "witness", None) or getattr(exc, "trace", None)
            if extra is not None:
                witness["detail"] = extra
        elapsed = round((time.perf_counter() - t0) * 1000, 3) if self.timing else None
        rec = CheckRecord(self.suite, check_id, anchor(anchor_key), verdict, jsonable(witness), elapsed)
        self.records.append(rec)
        return rec


# ---------------------------------------------------------------------------
# algebra factories

def inject_jacobi_fault(alg: PowerfulLieAlgebra) -> PowerfulLieAlgebra:
    """Shift c_{he}^e (and c_{eh}^e) by p^eps: antisymmetric and powerful, not Jacobi."""
    d = alg.d
    st = [[list(alg.structure[i][j]) for j in range(d)] for i in range(d)]
    e, h = alg.names.index("e"), alg.names.index("h")
    bump = alg.p**alg.eps
    st[h][e][e] += bump
    st[e][h][e] -= bump
    return alg.with_structure(tuple(tuple(tuple(c) for c in row) for row in st))


def sl2_pairs(p: int, l: int, N: int, fault: str | None = None) -> list[tuple[PowerfulLieAlgebra, SubalgebraSpec]]:
    pairs = build_chevalley_sl2(p, l, N)
    if fault == "jacobi":
        pairs = [(inject_jacobi_fault(a), s) for a, s in pairs]
    return pairs


def random_lie(alg: PowerfulLieAlgebra, rng: random.Random, scale: int = 0):
    mod = alg.p**alg.N
    return alg.element([rng.randrange(mod) * alg.p**scale for _ in range(alg.d)])


def prime_grid(p: int, l: int) -> list[tuple[int, int]]:
    grid = {2: 2, 3: 1, 5: 1}
    grid[p] = l
    return sorted(grid.items())


# ---------------------------------------------------------------------------
# sweeps: Campbell-Hausdorff layer

def bch_congruence_sweep(alg, samples: int, rng, kmax: int = 3):
    for i in range(samples):
        v, w = random_lie(alg, rng), random_lie(alg, rng)
        k = rng.randint(0, min(kmax, alg.N - 1))
        if not check_bch_congruence(v, w, k):
            return False, {"sample": i, "v": v.coords, "w": w.coords, "k": k}
    return True, {"samples": samples}


def commutator_sweep(alg, samples: int, rng):
    done = 0
    while done < samples:
        u = random_lie(alg, rng, rng.randint(0, 2))
        v = random_lie(alg, rng)
        k = min(alg.depth(u), alg.N - 1)
        if k < alg.eps or u.is_zero():
            continue
        done += 1
        if not check_commutator_congruence(u, v, k):
            return False, {"u": u.coords, "v": v.coords, "k": k}
    return True, {"samples": samples}


def exp_power_sweep(alg, samples: int, rng):
    for _ in range(samples):
        u = random_lie(alg, rng)
        m = rng.randint(-4, 9)
        g = GroupElement(u) if m >= 0 else GroupElement(-u)
        prod = group_product(*([g] * abs(m))) if m else GroupElement.identity(alg)
        if prod.log != u * m:
            return False, {"u": u.coords, "m": m, "product": prod.log.coords}
    return True, {"samples": samples}


def exp_congruence_sweep(alg, samples: int, rng):
    for _ in range(samples):
        u = random_lie(alg, rng)
        k = rng.randint(1, alg.N)
        v = u + random_lie(alg, rng) * alg.p**k
        g = group_product(GroupElement(u), GroupElement(v).inverse())
        if not g.in_power_subgroup(k):
            return False, {"u": u.coords, "v": v.coords, "k": k}
    return True, {"samples": samples}


def exp_additive_sweep(alg, samples: int, rng):
    for _ in range(samples):
        u, v = random_lie(alg, rng), random_lie(alg, rng)
        g = group_product(GroupElement(u + v), GroupElement(-v), GroupElement(-u))
        if not g.in_power_subgroup(1):
            return False, {"u": u.coords, "v": v.coords}
    return True, {"samples": samples}


def group_mul_sweep(alg, samples: int, rng):
    mod = alg.p ** (alg.N + min(alg.scales))
    for _ in range(samples):
        g, h, k = (GroupElement(random_lie(alg, rng)) for _ in range(3))
        gh = group_mul(g, h)
        direct = (g.matrix().astype(object) @ h.matrix().astype(object)) % mod
        if ((gh.matrix().astype(object) % mod) != direct).any():
            return False, {"g": g.log.coords, "h": h.log.coords}
        if group_mul(gh, k) != group_mul(g, group_mul(h, k)):
            return False, {"associativity": [g.log.coords, h.log.coords, k.log.coords]}
    return True, {"samples": samples}


# ---------------------------------------------------------------------------
# sweeps: graded ring of the quotient

def truncated_hilbert(p: int, m: int, d: int) -> list[int]:
    """Coefficients of ((1 - t^(p^m)) / (1 - t))^d."""
    base = [1] * p**m
    out = [1]
    for _ in range(d):
        new = [0] * (len(out) + len(base) - 1)
        for i, a in enumerate(out):
            for j, b in enumerate(base):
                new[i + j] += a * b
        out = new
    return out


def graded_dimension_check(Q: QuotientAlgebra):
    expected = truncated_hilbert(Q.p, Q.m, Q.d)
    got = [Q.graded_dimension(n) for n in range(len(expected))]
    return got == expected, {"dimensions": got}


def filtration_basis_check(Q: QuotientAlgebra):
    """span{b^alpha : |alpha| >= n} is closed under multiplication by each b_i."""
    worst = None
    for i in range(Q.d):
        g = GroupElement(Q.algebra.basis(i))
        M = (Q.right_multiplication(g) - np.eye(Q.dim, dtype=np.int64)) % Q.p
        # row alpha of M is b^alpha * b_i
        for alpha in range(Q.dim):
            row = M[alpha]
            nz = np.nonzero(row)[0]
            if nz.size and Q.total_degree[nz].min() < Q.total_degree[alpha] + 1:
                worst = {"alpha": Q.exponents[alpha].tolist(), "i": i}
                return False, worst
    return True, {"monomials": Q.dim}


def b_commute_check(Q: QuotientAlgebra):
    degs = {}
    for i, j in itertools.combinations(range(Q.d), 2):
        c = Q.b(i) * Q.b(j) - Q.b(j) * Q.b(i)
        degs[f"{i},{j}"] = jadic_degree(c)
        if degs[f"{i},{j}"] < 3:
            return False, degs
    return True, degs


def random_element(Q: QuotientAlgebra, rng, terms: int = 3, max_deg: int | None = None, n_only: bool = False):
    top = int(Q.total_degree.max()) if max_deg is None else max_deg
    v = np.zeros(Q.dim, dtype=np.int64)
    mask = Q._nmask if n_only else np.ones(Q.dim, dtype=bool)
    for _ in range(terms):
        n = rng.randint(0, top)
        idx = np.nonzero((Q.total_degree == n) & mask)[0]
        if idx.size:
            v[int(idx[rng.randrange(idx.size)])] = rng.randrange(1, Q.p)
    return Q.element(v)


def symbol_multiplicative_sweep(Q: QuotientAlgebra, samples: int, rng):
    done = 0
    while done < samples:
        x = random_element(Q, rng, rng.randint(1, 3), Q.window - 1)
        y = random_element(Q, rng, rng.randint(1, 3), Q.window - 1)
        if x.is_zero() or y.is_zero() or jadic_degree(x) + jadic_degree(y) >= Q.window:
            continue
        done += 1
        if principal_symbol(x * y) != principal_symbol(x) * principal_symbol(y):
            return False, {"x": repr(x), "y": repr(y)}
    return True, {"samples": samples}


def convolution_sweep(Q: QuotientAlgebra, samples: int, rng):
    """Products of group-basis vectors against group multiplication of Lie logs."""
    alg = Q.algebra
    for _ in range(samples):
        lam = [rng.randrange(Q.side) for _ in range(Q.d)]
        mu = [rng.randrange(Q.side) for _ in range(Q.d)]
        factors = [GroupElement(alg.basis(i) * lam[i]) for i in range(Q.d)]
        factors += [GroupElement(alg.basis(i) * mu[i]) for i in range(Q.d)]
        target = Q.coset_index(group_product(*factors))
        got = Q.group_basis_element(lam) * Q.group_basis_element(mu)
        expect = np.zeros(Q.dim, dtype=np.int64)
        expect[target] = 1
        if got != Q.from_group_coeffs(expect):
            return False, {"lambda": lam, "mu": mu}
    return True, {"samples": samples}


def subalgebra_span_check(Q: QuotientAlgebra, samples: int, rng):
    from .delta import _a1_basis

    a1 = _a1_basis(Q)
    n_rows = np.eye(Q.dim, dtype=np.int64)[Q._nmask]
    same = a1.shape == gf.rref(n_rows, Q.p)[0].shape and (a1 == gf.rref(n_rows, Q.p)[0]).all()
    if not same:
        return False, {"rank_group_span": int(a1.shape[0]), "n_monomials": int(Q._nmask.sum())}
    for _ in range(samples):
        x = random_element(Q, rng, 3, n_only=True)
        y = random_element(Q, rng, 3, n_only=True)
        z = x * y
        if (z.coeffs[~Q._nmask] != 0).any():
            return False, {"x": repr(x), "y": repr(y)}
    return True, {"dimension": int(a1.shape[0]), "samples": samples}


# ---------------------------------------------------------------------------
# sweeps: filtration bounds and induced derivations

def filtration_checks(Q: QuotientAlgebra, sample_degree: int = 4) -> list[tuple[str, Callable]]:
    """Bounds (c) and (d) for exp(p^r v_i) over the sources that fit the window."""
    out = []
    names = Q.algebra.names
    for src in basis_sources(Q):
        name = names[[i for i in range(Q.d) if Q.algebra.basis(i) == src.u][0]]
        for r in range(0, max(0, src.r_max(Q)) + 1):
            for variant in ("c", "d"):
                def run(src=src, r=r, variant=variant):
                    rep = commutator_filtration_check(Q, src.member(r), src.k + r, sample_degree, variant)
                    return rep.holds, {"k": src.k + r, "shift": rep.shift, "checked": rep.checked, "worst": rep.worst}

                out.append((f"{name}.r{r}.{variant}", run))
    return out


_QUOTIENTS: dict = {}


def quotient_for(alg: PowerfulLieAlgebra, spec: SubalgebraSpec, m: int) -> QuotientAlgebra:
    key = (alg, spec, m)
    Q = _QUOTIENTS.get(key)
    if Q is None:
        Q = build_quotient(alg, spec, m)
        _QUOTIENTS[key] = Q
    return Q


def display_check(p: int, l: int, pair: str | None, r_values, base_m: int, N: int):
    """Induced derivations of exp(p^r u) against the closed-form system."""
    if p == 2:
        chain = build_chevalley_sl2(2, l, N)
        alg, spec = {"01": chain[0], "12": chain[1], "single": sl2_single_step(2, l, N)}[pair]
    else:
        alg, spec = build_chevalley_sl2(p, l, N)[0]
    system = sl2_derivations(p, l, pair, tuple(r_values))
    rows = []
    ok = True
    for (name, r), D in sorted(system.members.items(), key=lambda kv: (NAMES.index(kv[0][0]), kv[0][1])):
        u = alg[name] * p**r
        k = alg.depth(u)
        m = max(base_m, required_exponent(p, p**k))
        Q = quotient_for(alg, spec, m)
        got = induced_derivation(Q, GroupElement(u), p**k - 1)
        rho = rho_derivation(u, spec, k)
        same = got.images == D.images and rho.images == D.images
        ok &= same
        rows.append({"u": name, "r": r, "m": m, "induced": got.render(alg.names), "match": same})
    return ok, {"pair": pair or "odd", "members": rows}


# ---------------------------------------------------------------------------
# sweeps: Frobenius calculus

def random_ideal(rng, p: int, d: int, D: int, frobenius) -> list[GradedPoly]:
    """Generators mixing B_1-polynomials with unrestricted ones."""
    idx = tuple(frobenius)
    gens = []
    for _ in range(rng.randint(1, 3)):
        if rng.random() < 0.5:
            n = rng.randint(0, max(0, D - p))
            monos = [mono for mono in monomials_of_degree(d, n) if all(mono[i] % p == 0 for i in idx)]
            picks = [mono for mono in monos if rng.random() < 0.6] or monos[:1]
            g = GradedPoly(p, d, {mono: rng.randrange(1, p) for mono in picks})
        else:
            g = random_homogeneous(rng, p, d, rng.randint(1, max(1, D - p)), 0.4)
        if not g.is_zero() and g.degree() <= D - p:
            gens.append(g)
    return gens


def control_sweep(samples: int, rng, D: int = 8):
    agree = {True: 0, False: 0}
    done = 0
    while done < samples:
        p = rng.choice([2, 3])
        d = rng.choice([2, 3])
        t = rng.randint(1, d)
        T = tuple(sorted(rng.sample(range(d), t)))
        gens = random_ideal(rng, p, d, D, T)
        if not gens:
            continue
        done += 1
        I = TruncatedIdeal(gens, D, T)
        a, b = I.d_stable_test(), I.control_test()
        if a != b:
            return False, {"p": p, "gens": [repr(g) for g in gens], "frobenius": T, "d_stable": a, "controlled": b}
        agree[a] += 1
    return True, {"samples": samples, "stable": agree[True], "unstable": agree[False]}


def kernel_sweep(p: int, d: int, t: int, max_deg: int = 6):
    T = tuple(range(t))
    for n in range(max_deg + 1):
        for mono in monomials_of_degree(d, n):
            f = GradedPoly.monomial(p, mono)
            killed = all(partial_j(f, j, T).is_zero() for j in T)
            if killed != in_b1(f, T):
                return False, {"monomial": list(mono)}
    return True, {"p": p, "d": d, "t": t, "max_degree": max_deg}


def closure_sweep(samples: int, rng):
    done = 0
    while done < samples:
        p = rng.choice([2, 3, 5])
        d = rng.choice([2, 3])
        x = random_homogeneous(rng, p, d, rng.randint(0, 2), 0.6)
        if x.is_zero():
            continue
        gens = [x * random_homogeneous(rng, p, d, rng.randint(0, 2), 0.5) for _ in range(rng.randint(1, 3))]
        gens = [g for g in gens if not g.is_zero()]
        if not gens:
            continue
        done += 1
        c = reflexive_closure(gens)
        if reflexive_closure([c]) != c:
            return False, {"gens": [repr(g) for g in gens], "closure": repr(c)}
        quotients = []
        for g in gens:
            ok, q = divides(c, g)
            if not ok:
                return False, {"not_contained": repr(g), "closure": repr(c)}
            quotients.append(q)
        if not pseudo_null_test(quotients):
            return False, {"cofactors_not_coprime": [repr(q) for q in quotients]}
        if not divides(x, c)[0]:
            return False, {"closure_misses_factor": repr(x)}
        if pseudo_null_test(gens) != c.is_unit():
            return False, {"pseudo_null_mismatch": [repr(g) for g in gens]}
    return True, {"samples": samples}


# ---------------------------------------------------------------------------
# sweeps: delta and cleaning

def delta_sweep(Q: QuotientAlgebra, samples: int, rng):
    for _ in range(samples):
        w = random_element(Q, rng, rng.randint(1, 5))
        if w.is_zero():
            continue
        a, b = delta(w), delta_bruteforce(w)
        if a != b:
            return False, {"w": repr(w), "closed_form": a, "bruteforce": b}
        if a != TOP:
            X = principal_symbol(w)
            if (a > 0) != in_b1(X, Q.frobenius):
                return False, {"w": repr(w), "symbol_not_in_B1": repr(X)}
            Y = leading_error_symbol(w)
            if not Y.is_homogeneous() or Y.degree() != jadic_degree(w) + a:
                return False, {"w": repr(w), "Y": repr(Y)}
    return True, {"samples": samples}


def _loop_ok(w, res) -> tuple[bool, dict]:
    Q = w.Q
    tr = res.trace
    increasing = all(a < b for a, b in zip(tr, tr[1:]))
    in_n = not (res.w.coeffs[~Q._nmask] != 0).any()
    consistent = (w * res.u) == res.w
    ok = increasing and in_n and consistent and res.u.is_unit() and tr[-1] == TOP
    return ok, {"trace": tr, "increasing": increasing, "in_N": in_n, "consistent": consistent}


def cleaning_one_plus_b(Q: QuotientAlgebra):
    w = Q.one() + Q.b(0)
    res = cleaning_loop(w)
    ok, wit = _loop_ok(w, res)
    return ok and res.w == Q.one(), wit


def cleaning_sweep(Q: QuotientAlgebra, samples: int, rng):
    traces = []
    for _ in range(samples):
        v = random_element(Q, rng, 4) + Q.one() * rng.randrange(1, Q.p)
        z = random_element(Q, rng, 3, n_only=True) + Q.one() * rng.randrange(1, Q.p)
        if not v.is_unit() or not z.is_unit():
            continue
        w = v * z
        res = cleaning_loop(w)
        ok, wit = _loop_ok(w, res)
        if not ok:
            return False, {"w": repr(w), **wit}
        traces.append(len(res.trace) - 1)
    return True, {"samples": samples, "max_steps": max(traces, default=0)}


def closure_of_ideal_sweep(Q: QuotientAlgebra, samples: int, rng):
    """For w in a two-sided ideal I, Y_w passes the a-closure test against gcd(gr I)."""
    tested = 0
    sources = basis_sources(Q)
    for i in range(Q.d):
        w0 = Q.b(i) ** (Q.p ** (Q.m - 1))
        ideal = two_sided_ideal(Q, [w0])
        gr = graded_ideal(Q, ideal, Q.window - 1)
        gens = [g for polys in gr.values() for g in polys]
        X = gcd_all(gens)
        for _ in range(samples):
            x = random_element(Q, rng, rng.randint(1, 3), 2)
            w = w0 * (x + Q.one())
            if w.is_zero():
                continue
            dw = delta(w)
            if dw == TOP:
                continue
            Y = leading_error_symbol(w)
            for src in sources:
                r_max = src.r_max(Q)
                for r in range(0, r_max + 1):
                    theta = src.theta(r)
                    if Y.degree() + theta >= Q.window or src.theta1(r) - theta <= dw:
                        continue
                    verdict = a_closure_test(Y, X, src, Q, r, r)
                    tested += 1
                    if not verdict:
                        return False, {"w": repr(w), "X": repr(X), "u": src.u.coords, "r": r}
                    img = src.induced(Q, r)(Y)
                    if not img.is_zero() and not _in_graded_span(gr.get(img.degree(), []), img):
                        return False, {"w": repr(w), "image_not_in_grI": repr(img)}
    return tested > 0, {"tested": tested}


def _in_graded_span(polys: list[GradedPoly], f: GradedPoly) -> bool:
    n = f.degree()
    if not polys:
        return f.is_zero()
    rows = np.array([to_vector(g, n) for g in polys], dtype=np.int64)
    basis, piv = gf.rref(rows, f.p)
    return gf.in_span(basis, piv, to_vector(f, n), f.p)


# ---------------------------------------------------------------------------
# sweeps: derivation hypothesis

def hypothesis_checks(p: int, l: int, D_max: int, s: int, rng) -> list[tuple[str, Callable]]:
    out = []
    if p != 2:
        system = sl2_derivations(p, l, None, (s, s + 1))
        xs = ["e", "f", "h", "e*f-h^2"]
        samples = [random_homogeneous(rng, p, 3, 2, 0.6, NAMES) for _ in range(2)]
        for X in [GradedPoly.parse(x, p, NAMES) for x in xs] + [g for g in samples if not g.is_zero()]:
            out.append((f"odd.X={X}", lambda X=X, system=system: _empty(system, X, D_max, s)))
    l2 = l if p == 2 else 2
    for pair in ("01", "12"):
        system = sl2_derivations(2, l2, pair, (s, s + 1))
        for x in ("e", "f", "h"):
            X = GradedPoly.parse(x, 2, NAMES)
            out.append((f"p2.{pair}.X={x}", lambda X=X, system=system: _empty(system, X, D_max, s)))
    return out


def _empty(system, X, D_max, s):
    rep = hypothesis_bruteforce(system, X, D_max, s)
    return rep.holds, {"mode": rep.mode, "violations": [repr(v) for v in rep.violations[:5]],
                       "degrees": rep.degrees, "label": rep.label}


def single_step_witness(l: int, s: int, D_max: int):
    system = sl2_derivations(2, l, "single", (s, s + 1))
    X = GradedPoly.parse("h", 2, NAMES)
    Y = GradedPoly.parse("h*e^2*f^2", 2, NAMES)
    flagged = is_violation(system, X, Y, s)
    rep = hypothesis_bruteforce(system, X, max(D_max, Y.degree()), s)
    return flagged and not rep.holds, {"X": "h", "Y": repr(Y), "flagged": flagged,
                                       "violations_found": len(rep.violations), "label": rep.label}


def elimination_sweep(system, X: GradedPoly, max_deg: int, s: int, rng, per_degree: int = 2):
    p = system.p
    count = 0
    ops = [(D, _op_degree(D)) for _, D in system.restrict({s, s + 1})]
    for n in range(1, max_deg + 1):
        cons = _constraint_rows(X, ops, n)
        C = gf.nullspace(cons.T, p) if cons.shape[1] else np.eye(cons.shape[0], dtype=np.int64)
        for _ in range(per_degree):
            if C.shape[0] == 0:
                break
            coef = np.array([rng.randrange(p) for _ in range(C.shape[0])], dtype=np.int64)
            Y = from_vector((coef @ C) % p, p, 3, n, NAMES)
            if Y.is_zero():
                continue
            rep = eliminate_and_check(X, Y, s, system)
            count += 1
            if not rep.holds:
                return False, {"X": repr(X), "Y": repr(Y), "conclusions": rep.conclusions}
    return True, {"instances": count}


# ---------------------------------------------------------------------------
# suite runners

DEFAULT_SAMPLES = {
    "bch": 500,
    "commutator": 300,
    "laws": 40,
    "symbol": 200,
    "convolution": 60,
    "span": 20,
    "ideals": 200,
    "delta": 200,
    "cleaning": 50,
    "closure": 4,
}


@dataclass
class SuiteParams:
    p: int = 3
    l: int = 1
    m: int = 2
    N: int = 8
    D: int = 8
    D_max: int = 6
    s: int = 0
    seed: int = 0
    samples: dict | None = None
    fault: str | None = None
    timing: bool = False

    def count(self, key: str) -> int:
        table = dict(DEFAULT_SAMPLES)
        table.update(self.samples or {})
        return int(table[key])


def _rng(params: SuiteParams, suite: str, part: str = "") -> random.Random:
    return random.Random(f"{params.seed}:{suite}:{part}")


def _split(total: int, parts: int) -> int:
    return -(-total // parts)


def suite_bch(params: SuiteParams) -> list[CheckRecord]:
    rec = Recorder("bch", params.timing)
    grid = prime_grid(params.p, params.l)
    for p, l in grid:
        alg = sl2_pairs(p, l, params.N)[0][0]
        tag = f"p{p}.l{l}"
        rec.check(f"{tag}.bch-congruence", "bch-congruence",
                  lambda: bch_congruence_sweep(alg, _split(params.count("bch"), len(grid)), _rng(params, "bch", tag)))
        rec.check(f"{tag}.commutator", "commutator-congruence",
                  lambda: commutator_sweep(alg, _split(params.count("commutator"), len(grid)), _rng(params, "comm", tag)))
        n = params.count("laws")
        rec.check(f"{tag}.exp-power", "exp-power", lambda: exp_power_sweep(alg, n, _rng(params, "pow", tag)))
        rec.check(f"{tag}.exp-congruence", "exp-congruence", lambda: exp_congruence_sweep(alg, n, _rng(params, "cong", tag)))
        rec.check(f"{tag}.exp-additive", "exp-additive", lambda: exp_additive_sweep(alg, n, _rng(params, "add", tag)))
        rec.check(f"{tag}.group-mul", "group-mul-matrix", lambda: group_mul_sweep(alg, n, _rng(params, "mul", tag)))
    return rec.records


def suite_graded_ring(params: SuiteParams) -> list[CheckRecord]:
    rec = Recorder("graded-ring", params.timing)
    alg, spec = sl2_pairs(params.p, params.l, params.N, params.fault)[0]

    def axioms():
        bad = alg.defects() + spec.defects(alg)
        return not bad, {"defects": bad[:3]} if bad else {"algebra": alg.label}

    rec.check("lie-axioms", "lie-axioms", axioms)
    Q = quotient_for(alg, spec, params.m)
    rec.check("graded-dimension", "graded-dimension", lambda: graded_dimension_check(Q))
    rec.check("filtration-basis", "filtration-basis", lambda: filtration_basis_check(Q))
    rec.check("b-commute", "b-commute", lambda: b_commute_check(Q))
    rec.check("symbol-multiplicative", "symbol-multiplicative",
              lambda: symbol_multiplicative_sweep(Q, params.count("symbol"), _rng(params, "graded", "symbol")))
    rec.check("convolution", "convolution",
              lambda: convolution_sweep(Q, params.count("convolution"), _rng(params, "graded", "conv")))
    rec.check("subalgebra-span", "subalgebra-span",
              lambda: subalgebra_span_check(Q, params.count("span"), _rng(params, "graded", "span")))
    return rec.records


def suite_filtration(params: SuiteParams, sample_degree: int = 4) -> list[CheckRecord]:
    rec = Recorder("filtration", params.timing)
    configs = [(params.p, params.l, params.m)]
    if params.p != 2:
        configs.append((2, 2, 3))
    for p, l, m in configs:
        N = max(params.N, m + l + 2)
        for idx, (alg, spec) in enumerate(sl2_pairs(p, l, N)):
            Q = quotient_for(alg, spec, m)
            tag = f"p{p}.l{l}.pair{idx}"
            for name, fn in filtration_checks(Q, sample_degree):
                variant = name.rsplit(".", 1)[1]
                rec.check(f"{tag}.{name}", f"filtration-{variant}", fn)
    return rec.records


def suite_derivation_formula(params: SuiteParams) -> list[CheckRecord]:
    rec = Recorder("derivation-formula", params.timing)
    p, l = params.p, params.l
    N = max(params.N, params.m + l + 4)
    if p != 2:
        alg, spec = sl2_pairs(p, l, N)[0]
        Q = quotient_for(alg, spec, max(params.m, required_exponent(p, p**l)))
        for name in NAMES:
            rec.check(f"rho.{name}", "rho-formula",
                      lambda name=name: (verify_rho_formula(Q, alg[name]), {"u": name, "m": Q.m}))
        r_values = (0, 1) if p == 3 else (0,)
        rec.check("display.odd", "derivation-display", lambda: display_check(p, l, None, r_values, params.m, N))
    l2 = l if p == 2 else 2
    N2 = max(params.N, 5 + l2 + 2)
    for pair in ("01", "12", "single"):
        rec.check(f"display.p2.{pair}", "derivation-display",
                  lambda pair=pair: display_check(2, l2, pair, (0, 1), 1, N2))
    return rec.records


def suite_frobenius(params: SuiteParams) -> list[CheckRecord]:
    rec = Recorder("frobenius", params.timing)
    n = params.count("ideals")
    rec.check("control-equivalence", "control", lambda: control_sweep(n, _rng(params, "frob", "control"), params.D))
    for p, d, t in ((2, 2, 1), (2, 3, 2), (3, 2, 2), (3, 3, 1)):
        rec.check(f"kernel.p{p}.d{d}.t{t}", "kernel", lambda p=p, d=d, t=t: kernel_sweep(p, d, t, 6))
    rec.check("reflexive-closure", "reflexive-closure", lambda: closure_sweep(n, _rng(params, "frob", "closure")))

    def examples():
        y1, y2 = GradedPoly.var(3, 2, 0), GradedPoly.var(3, 2, 1)
        got = {"(y1,y2)": pseudo_null_test([y1, y2]), "(y1)": pseudo_null_test([y1]),
               "(y1*y2,y1^2)": pseudo_null_test([y1 * y2, y1 * y1])}
        return got == {"(y1,y2)": True, "(y1)": False, "(y1*y2,y1^2)": False}, got

    rec.check("pseudo-null-examples", "pseudo-null", examples)
    return rec.records


def suite_delta_cleaning(params: SuiteParams) -> list[CheckRecord]:
    rec = Recorder("delta-cleaning", params.timing)
    alg, spec = sl2_pairs(params.p, params.l, params.N)[0]
    Q = quotient_for(alg, spec, params.m)
    rec.check("delta-closed-form", "delta", lambda: delta_sweep(Q, params.count("delta"), _rng(params, "delta", "delta")))
    rec.check("clean.one-plus-b1", "cleaning", lambda: cleaning_one_plus_b(Q))
    rec.check("clean.unit-products", "cleaning-loop",
              lambda: cleaning_sweep(Q, params.count("cleaning"), _rng(params, "delta", "clean")))
    rec.check("a-closure.ideal", "a-closure",
              lambda: closure_of_ideal_sweep(Q, params.count("closure"), _rng(params, "delta", "closure")))
    return rec.records


def suite_hypothesis(params: SuiteParams) -> list[CheckRecord]:
    rec = Recorder("hypothesis", params.timing)
    rng = _rng(params, "hypothesis", "samples")
    for name, fn in hypothesis_checks(params.p, params.l, params.D_max, params.s, rng):
        rec.check(f"bruteforce.{name}", "hypothesis", fn)
    l2 = params.l if params.p == 2 else 2
    rec.check("single-step-witness", "hypothesis-failure", lambda: single_step_witness(l2, params.s, params.D_max))

    systems = []
    if params.p != 2:
        systems.append(("odd", sl2_derivations(params.p, params.l, None, (params.s, params.s + 1))))
    for pair in ("01", "12"):
        systems.append((f"p2.{pair}", sl2_derivations(2, l2, pair, (params.s, params.s + 1))))
    for tag, system in systems:
        for x in ("e", "f", "h"):
            X = GradedPoly.parse(x, system.p, NAMES)
            rec.check(f"elimination.{tag}.X={x}", "elimination",
                      lambda X=X, system=system, tag=tag: elimination_sweep(
                          system, X, min(params.D_max, 5), params.s, _rng(params, "elim", f"{tag}{X}")))

    def ceiling():
        system = systems[0][1].trivial()
        X = GradedPoly.parse("e", system.p, NAMES)
        rep = hypothesis_bruteforce(system, X, 3, params.s)
        return not rep.holds, {"system": rep.label, "violations_found": len(rep.violations)}

    rec.check("trivial-family-detects", "hypothesis", ceiling)

    def cross():
        system = sl2_derivations(2, l2, "single", (params.s, params.s + 1))
        X = GradedPoly.parse("h", 2, NAMES)
        lin = hypothesis_bruteforce(system, X, 3, params.s, "linear")
        enum = hypothesis_bruteforce(system, X, 3, params.s, "enumerate")
        lin_deg = sorted({v.degree() for v in lin.violations})
        enum_deg = sorted({v.degree() for v in enum.violations})
        by_deg = {n: sum(1 for v in enum.violations if v.degree() == n) for n in enum_deg}
        # every violation count must be p^closure - p^good
        expected = {n: 2 ** lin.degrees[n]["closure"] - 2 ** lin.degrees[n]["good"] for n in lin_deg}
        return lin_deg == enum_deg and by_deg == expected, {"linear": lin_deg, "enumerate": by_deg}

    rec.check("enumerate-cross-check", "hypothesis", cross)
    return rec.records


RUNNERS = {
    "bch": suite_bch,
    "graded-ring": suite_graded_ring,
    "filtration": suite_filtration,
    "derivation-formula": suite_derivation_formula,
    "frobenius": suite_frobenius,
    "delta-cleaning": suite_delta_cleaning,
    "hypothesis": suite_hypothesis,
}


def run_suites(params: SuiteParams, names=SUITES) -> list[CheckRecord]:
    out = []
    for name in names:
        out.extend(RUNNERS[name](params))
    return sorted(out, key=lambda r: (r.suite, r.check_id))
