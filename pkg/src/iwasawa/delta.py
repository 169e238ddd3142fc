"""The delta-invariant, sources of derivations and the cleaning algorithm.

Everything runs inside a finite quotient A = F_p[G/G^{p^m}] with A_1 the
image of F_p[G_1]; A_1 is spanned by the b^alpha with alpha in the
N-span (p divides alpha_i for every Frobenius index i).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import gf
from .errors import (
    HypothesisFailed,
    InSubalgebra,
    PremiseFailed,
    WindowExceeded,
    ZeroElement,
)
from .group_algebra import (
    TOP,
    GroupAlgebraElement,
    QuotientAlgebra,
    commutator_filtration_check,
    induced_derivation,
    jadic_degree,
    principal_symbol,
    subalgebra_decompose,
)
from .lie import GroupElement, LieElement
from .poly import (
    DerivationOp,
    GradedPoly,
    TruncatedIdeal,
    apply_derivation,
    divides,
    frobenius_decompose,
    gcd_all,
    monomials_of_degree,
)


def delta(w: GroupAlgebraElement) -> float | int:
    """Closed form: lowest non-N degree minus lowest degree (TOP on A_1)."""
    if w.is_zero():
        raise ZeroElement("delta is undefined at zero")
    _, y = subalgebra_decompose(w)
    if y.is_zero():
        return TOP
    return jadic_degree(y) - jadic_degree(w)


def _a1_basis(Q: QuotientAlgebra) -> np.ndarray:
    """b-coefficients of the G_1-coset group elements, one per row."""
    cache = Q.__dict__.get("_a1_rows")
    if cache is None:
        idx = Q.subgroup_indices()
        rows = np.zeros((len(idx), Q.dim), dtype=np.int64)
        for r, lam in enumerate(idx):
            v = np.zeros(Q.dim, dtype=np.int64)
            v[lam] = 1
            rows[r] = Q.from_group_basis(v)
        cache = gf.rref(rows, Q.p)[0]
        Q.__dict__["_a1_rows"] = cache
    return cache


def _a1_in_degree(Q: QuotientAlgebra, n: int) -> np.ndarray:
    """Basis of A_1 intersected with J^n."""
    basis = _a1_basis(Q)
    low = Q.total_degree < n
    if not low.any():
        return basis
    ker = gf.nullspace(basis[:, low].T, Q.p)
    if ker.shape[0] == 0:
        return np.zeros((0, Q.dim), dtype=np.int64)
    return (ker @ basis) % Q.p


def delta_bruteforce(w: GroupAlgebraElement) -> float | int:
    """max k with w in (A_1 cap J^n) + J^{n+k}, n the J-adic degree of w.

    A_1 is generated from the group elements of G_1 rather than from the
    N-span, so this is independent of the closed form.
    """
    if w.is_zero():
        raise ZeroElement("delta is undefined at zero")
    Q = w.Q
    n = int(jadic_degree(w))
    sub = _a1_in_degree(Q, n)
    top = int(Q.total_degree.max())
    best = 0
    for k in range(1, top - n + 2):
        cols = Q.total_degree < n + k
        target = w.coeffs[cols]
        if sub.shape[0] == 0:
            member = not target.any()
        else:
            r, piv = gf.rref(sub[:, cols], Q.p)
            member = gf.in_span(r, piv, target, Q.p)
        if not member:
            return best
        best = k
    return TOP


def leading_error_symbol(w: GroupAlgebraElement) -> GradedPoly:
    """Y_w: the symbol of the non-N part of w."""
    if delta(w) == TOP:
        raise InSubalgebra("w lies in A_1")
    _, y = subalgebra_decompose(w)
    return principal_symbol(y)


# ---------------------------------------------------------------------------
# sources of derivations

@dataclass(frozen=True)
class DerivationSource:
    """a_r = exp(p^r u) with theta(a_r) = p^{r+k} - 1 and theta_1 = p theta."""

    u: LieElement
    k: int

    @property
    def p(self) -> int:
        return self.u.algebra.p

    def is_trivial(self) -> bool:
        return self.u.is_zero()

    def member(self, r: int) -> GroupElement:
        return GroupElement(self.u * self.p**r)

    def theta(self, r: int) -> int:
        return self.p ** (r + self.k) - 1

    def theta1(self, r: int) -> int:
        return self.p * self.theta(r)

    def r_max(self, Q: QuotientAlgebra) -> int:
        """Largest r whose induced derivation fits the safe window."""
        return Q.m - self.k - 1

    def induced(self, Q: QuotientAlgebra, r: int) -> DerivationOp:
        if self.is_trivial():
            return DerivationOp.zero(Q.p, Q.d)
        return induced_derivation(Q, self.member(r), self.theta(r))

    def certify(self, Q: QuotientAlgebra, r_values, sample_degree: int) -> list[dict]:
        """Check the theta and theta_1 bounds on monomials up to sample_degree."""
        out = []
        if self.is_trivial():
            return out
        for r in r_values:
            a = self.member(r)
            for variant in ("c", "d"):
                rep = commutator_filtration_check(Q, a, self.k + r, sample_degree, variant)
                out.append({"r": r, "variant": variant, "holds": rep.holds, "checked": rep.checked})
                if not rep.holds:
                    raise HypothesisFailed(f"filtration bound {variant} fails at r = {r}: {rep.worst}")
        return out


def make_source(u: LieElement, k: int, spec) -> DerivationSource:
    alg = u.algebra
    if u.is_zero():
        return DerivationSource(u, k)
    if k < alg.eps:
        raise HypothesisFailed(f"k = {k} below epsilon")
    if alg.depth(u) < k:
        raise HypothesisFailed(f"[u, L] is not inside p^{k} L")
    if alg.depth_on(u, spec) < k + 1:
        raise HypothesisFailed(f"[u, L1] is not inside p^{k + 1} L")
    return DerivationSource(u, k)


def basis_sources(Q: QuotientAlgebra) -> list[DerivationSource]:
    """Sources exp(p^r v_i) from the basis vectors that satisfy the hypotheses."""
    alg = Q.algebra
    out = []
    for i in range(alg.d):
        u = alg.basis(i)
        k = alg.depth(u)
        try:
            out.append(make_source(u, k, Q.spec))
        except HypothesisFailed:
            continue
    return out


@dataclass(frozen=True)
class ClosureVerdict:
    holds: bool
    r_range: tuple[int, int]
    failures: tuple = ()

    def __bool__(self) -> bool:
        return self.holds


def a_closure_test(
    Y: GradedPoly,
    X: GradedPoly,
    src: DerivationSource,
    Q: QuotientAlgebra,
    r_min: int = 0,
    r_max: int | None = None,
) -> ClosureVerdict:
    """Whether every induced derivation D_r with r in [r_min, r_max] maps Y into XB."""
    if r_max is None:
        r_max = src.r_max(Q) if not src.is_trivial() else r_min
    if not src.is_trivial() and r_max < r_min:
        raise WindowExceeded(f"no r in [{r_min}, {r_max}] fits the window {Q.window}")
    fails = []
    for r in range(r_min, r_max + 1):
        D = src.induced(Q, r)
        img = apply_derivation(D, Y)
        if img.degree() >= Q.window:
            raise WindowExceeded(f"image of degree {img.degree()} leaves the window")
        if not divides(X, img)[0]:
            fails.append((r, img))
    return ClosureVerdict(not fails, (r_min, r_max), tuple(fails))


# ---------------------------------------------------------------------------
# ideals of the quotient

def two_sided_ideal(Q: QuotientAlgebra, gens) -> np.ndarray:
    """rref basis, in group-basis coordinates, of the two-sided ideal generated by gens."""
    p = Q.p
    moves = list(Q._left_gens)
    rights = []
    for i in range(Q.d):
        rights.append(Q._right_perm(Q._gen_matrix(i)))
    rows = np.array([Q.to_group_basis(g.coeffs) for g in gens], dtype=np.int64)
    basis = gf.rref(rows, p)[0]
    while True:
        grown = [basis]
        for perm in moves + rights:
            moved = np.zeros_like(basis)
            moved[:, perm] = basis
            grown.append(moved)
        new = gf.rref(np.vstack(grown), p)[0]
        if new.shape[0] == basis.shape[0]:
            return new
        basis = new


def graded_ideal(Q: QuotientAlgebra, ideal_group_basis: np.ndarray, max_degree: int) -> dict[int, list[GradedPoly]]:
    """Symbols gr I in each degree n <= max_degree, as spanning lists of polynomials."""
    p = Q.p
    rows = np.array([Q.from_group_basis(v) for v in ideal_group_basis], dtype=np.int64)
    out: dict[int, list[GradedPoly]] = {}
    for n in range(max_degree + 1):
        low = Q.total_degree < n
        if low.any():
            ker = gf.nullspace(rows[:, low].T, p)
            sub = (ker @ rows) % p if ker.shape[0] else np.zeros((0, Q.dim), dtype=np.int64)
        else:
            sub = rows
        cols = np.nonzero(Q.total_degree == n)[0]
        if sub.shape[0] == 0:
            out[n] = []
            continue
        top = gf.rref(sub[:, cols], p)[0]
        polys = []
        for v in top:
            polys.append(
                GradedPoly(p, Q.d, {tuple(int(a) for a in Q.exponents[cols[i]]): int(c) for i, c in enumerate(v) if c}, Q.names)
            )
        out[n] = polys
    return out


# ---------------------------------------------------------------------------
# cleaning

@dataclass
class CleaningStep:
    u: GroupAlgebraElement
    w: GroupAlgebraElement
    delta_before: float | int
    delta_after: float | int
    certificate: dict = field(default_factory=dict)

    def __iter__(self):
        return iter((self.u, self.w))


def cleaning_step(w: GroupAlgebraElement, D: int | None = None) -> CleaningStep:
    """One step w -> w u with delta(w u) > delta(w)."""
    Q = w.Q
    dw = delta(w)
    if dw == TOP:
        raise InSubalgebra("w already lies in A_1")
    X = principal_symbol(w)
    T = Q.frobenius
    if dw > 0:
        Y = leading_error_symbol(w)
        split = frobenius_decompose(Y, T)
        C = Q.poly_zero()
        Z = Q.poly_zero()
        cofactors = {}
        for alpha, comp in split.components.items():
            mono = GradedPoly.monomial(Q.p, split.shift(alpha), 1, Q.names)
            if not any(alpha):
                Z = Z + comp
                continue
            ok, q = divides(X, comp)
            if not ok:
                raise PremiseFailed(
                    "Y_w is not in XB + B_1",
                    {"X": X.to_json(), "Y": Y.to_json(), "component": list(alpha)},
                )
            cofactors[alpha] = q
            C = C + q * mono
        u = Q.one() - Q.lift_symbol(C)
        cert = {"X": X.to_json(), "Y": Y.to_json(), "C": C.to_json(), "Z": Z.to_json()}
    else:
        bound = D if D is not None else min(Q.window - 1, X.degree() + Q.p)
        ideal = TruncatedIdeal([X], max(bound, X.degree() + Q.p), T)
        if not ideal.control_test():
            raise PremiseFailed("XB is not controlled by B_1", {"X": X.to_json()})
        n = X.degree()
        gens = [GradedPoly(Q.p, Q.d, {m: int(c) for m, c in zip(monomials_of_degree(Q.d, k), v) if c})
                for k in range(n, ideal.D + 1) for v in ideal.b1_part(k)]
        X1 = gcd_all(gens)
        ok, U = divides(X, X1)
        if not ok or not U.is_constant():
            raise PremiseFailed("no homogeneous unit U with X_1 = X U", {"X": X.to_json()})
        u = Q.lift_symbol(U)
        cert = {"X": X.to_json(), "X1": X1.to_json()}
    w2 = w * u
    d2 = delta(w2)
    if not d2 > dw:
        raise PremiseFailed("delta did not increase", {"before": dw, "after": d2, **cert})
    return CleaningStep(u, w2, dw, d2, cert)


@dataclass
class CleaningResult:
    u: GroupAlgebraElement
    w: GroupAlgebraElement
    trace: list

    def __iter__(self):
        return iter((self.u, self.w))


def cleaning_loop(w: GroupAlgebraElement, max_steps: int | None = None) -> CleaningResult:
    """Repeat cleaning steps until w u lies in A_1."""
    Q = w.Q
    u = Q.one()
    trace = [delta(w)]
    limit = max_steps if max_steps is not None else int(Q.total_degree.max()) + 2
    cur = w
    while trace[-1] != TOP:
        if len(trace) > limit:
            raise PremiseFailed("step budget exhausted", trace)
        try:
            step = cleaning_step(cur)
        except PremiseFailed as exc:
            raise PremiseFailed(str(exc), {"trace": trace, "detail": exc.trace}) from exc
        u = u * step.u
        cur = step.w
        trace.append(step.delta_after)
    return CleaningResult(u, cur, trace)


def _principal_spaces(w: GroupAlgebraElement) -> tuple[np.ndarray, np.ndarray]:
    """rref bases of w A and A w in group-basis coordinates."""
    Q = w.Q
    gw = Q.to_group_basis(w.coeffs)
    supp = np.nonzero(gw)[0]
    right = np.zeros((Q.dim, Q.dim), dtype=np.int64)
    left = np.zeros((Q.dim, Q.dim), dtype=np.int64)
    ar = np.arange(Q.dim)
    for lam in supp:
        # w g^mu has coefficient gw[lam] at g^lam g^mu
        right[ar, Q._row(int(lam))] += gw[lam]
    for mu in range(Q.dim):
        # g^mu w has coefficient gw[lam] at g^mu g^lam
        left[mu, Q._row(mu)[supp]] += gw[supp]
    return gf.rref(right % Q.p, Q.p)[0], gf.rref(left % Q.p, Q.p)[0]


def is_normal(w: GroupAlgebraElement) -> bool:
    """w A = A w."""
    right, left = _principal_spaces(w)
    return right.shape == left.shape and bool((right == left).all())
