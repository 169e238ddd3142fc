"""Modular group algebras F_p[G/G^{p^m}] of uniform groups.

Elements are stored in the basis b^alpha = b_1^{a_1} ... b_d^{a_d} with
b_i = g_i - 1.  Products go through the group basis g^lambda =
g_1^{l_1} ... g_d^{l_d}, where multiplication permutes basis vectors; a
coset of G^{p^m} is identified by its log-coordinates mod p^m.
"""

from __future__ import annotations

import math
from collections import OrderedDict
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    HypothesisFailed,
    MixedAlgebra,
    PrecisionExhausted,
    RealizationNotInjective,
    WindowExceeded,
    ZeroElement,
)
from .lie import GroupElement, LieElement, PowerfulLieAlgebra, SubalgebraSpec
from .padic import epsilon, log_series, matmul_mod
from .poly import DerivationOp, GradedPoly

TOP = math.inf

_ROW_CACHE = 4096


def _pascal(side: int, p: int) -> np.ndarray:
    """P[l, a] = C(l, a) mod p."""
    out = np.zeros((side, side), dtype=np.int64)
    for l in range(side):
        for a in range(l + 1):
            out[l, a] = math.comb(l, a) % p
    return out


def _signed_pascal(side: int, p: int) -> np.ndarray:
    """S[a, l] = (-1)^(a - l) C(a, l) mod p, inverse of the plain transform."""
    out = np.zeros((side, side), dtype=np.int64)
    for a in range(side):
        for l in range(a + 1):
            out[a, l] = ((-1) ** (a - l) * math.comb(a, l)) % p
    return out


class QuotientAlgebra:
    """F_p[G/G^{p^m}] for G = exp(L), with the Frobenius data of ``spec``."""

    def __init__(self, algebra: PowerfulLieAlgebra, spec: SubalgebraSpec, m: int) -> None:
        if m < 1:
            raise ValueError("quotient exponent m must be >= 1")
        if algebra.N < m:
            raise PrecisionExhausted(f"Lie precision {algebra.N} < quotient exponent {m}")
        if len(spec.scales) != algebra.d:
            raise ValueError("subalgebra spec has the wrong rank")
        self.algebra = algebra
        self.spec = spec
        self.p = p = algebra.p
        self.d = d = algebra.d
        self.m = m
        self.side = side = p**m
        self.dim = side**d
        self.shape = (side,) * d
        self.names = algebra.names
        self.frobenius = spec.frobenius_indices
        self.window = side
        self._W = m + max(algebra.scales)
        self._mod = p**self._W

        grids = np.indices(self.shape).reshape(d, -1)
        self.exponents = grids.T.copy()
        self.total_degree = grids.sum(axis=0)
        self.pascal = _pascal(side, p)
        self.signed_pascal = _signed_pascal(side, p)

        self._matrices = self._group_matrices()
        keys = self._keys(self._matrices)
        lookup = np.full(self.dim, -1, dtype=np.int64)
        lookup[keys] = np.arange(self.dim)
        if (lookup < 0).any():
            raise RealizationNotInjective("group basis does not hit every coset of G^(p^m)")
        self._lookup = lookup
        self._left_gens = [self._left_perm(self._gen_matrix(i)) for i in range(d)]
        self._rows: OrderedDict[int, np.ndarray] = OrderedDict()
        self._rows[0] = np.arange(self.dim)
        self._nmask = np.ones(self.dim, dtype=bool)
        for i in self.frobenius:
            self._nmask &= self.exponents[:, i] % p == 0

    # -- group side -------------------------------------------------------------

    def _gen_matrix(self, i: int) -> np.ndarray:
        return self.algebra.exp_matrix(self.algebra.basis(i), self._W)

    def _group_matrices(self) -> np.ndarray:
        alg, mod = self.algebra, self._mod
        n = len(alg.realization[0])
        acc = None
        for i in range(self.d):
            gen = self._gen_matrix(i)
            powers = np.empty((self.side, n, n), dtype=np.int64)
            powers[0] = np.eye(n, dtype=np.int64)
            for k in range(1, self.side):
                powers[k] = matmul_mod(powers[k - 1], gen, mod)
            if acc is None:
                acc = powers
            else:
                acc = matmul_mod(acc[:, None], powers[None, :], mod).reshape(-1, n, n)
        return acc

    def _keys(self, mats: np.ndarray) -> np.ndarray:
        """Flat coset index from log-coordinates mod p^m of each matrix."""
        alg, p, W = self.algebra, self.p, self._W
        n = mats.shape[-1]
        logs = log_series(mats, p, W, epsilon(p))
        coords = []
        for (r, c), s, unit in zip(alg._supports, alg.scales, alg._units):  # type: ignore[attr-defined]
            col = logs[..., r, c].astype(np.int64)
            if (col % p**s).any():
                raise RealizationNotInjective("log entry fails the support scaling")
            coords.append((col // p**s) * pow(int(unit), -1, self.side) % self.side)
        coords = np.stack(coords, axis=-1)
        # the recovered coordinates must reproduce the whole matrix
        check = p ** (self.m + min(alg.scales))
        real = np.asarray(alg.realization, dtype=np.int64)
        rebuilt = np.einsum("bi,irc->brc", coords, real) % check
        if ((logs.reshape(-1, n, n) % check) != rebuilt.reshape(-1, n, n)).any():
            raise RealizationNotInjective("matrix logs leave the realized subalgebra")
        return np.ravel_multi_index(tuple(coords.T), self.shape)

    def coset_index(self, g: GroupElement) -> int:
        """Index lambda of the group-basis element in the coset of g."""
        if g.algebra != self.algebra:
            raise MixedAlgebra("group element from another algebra")
        coords = tuple(c % self.side for c in g.log.coords)
        return int(self._lookup[np.ravel_multi_index(coords, self.shape)])

    def _left_perm(self, mat: np.ndarray) -> np.ndarray:
        return self._lookup[self._keys(matmul_mod(mat[None], self._matrices, self._mod))]

    def _right_perm(self, mat: np.ndarray) -> np.ndarray:
        return self._lookup[self._keys(matmul_mod(self._matrices, mat[None], self._mod))]

    def left_permutation(self, g: GroupElement) -> np.ndarray:
        """perm[lambda] = index of g * g^lambda."""
        return self._left_perm(g.matrix(self._W))

    def right_permutation(self, g: GroupElement) -> np.ndarray:
        return self._right_perm(g.matrix(self._W))

    def _row(self, lam: int) -> np.ndarray:
        """row[mu] = index of g^lambda g^mu."""
        row = self._rows.get(lam)
        if row is not None:
            self._rows.move_to_end(lam)
            return row
        exps = self.exponents[lam]
        i = int(np.nonzero(exps)[0][0])
        prev = exps.copy()
        prev[i] -= 1
        row = self._left_gens[i][self._row(int(np.ravel_multi_index(tuple(prev), self.shape)))]
        self._rows[lam] = row
        if len(self._rows) > _ROW_CACHE:
            self._rows.popitem(last=False)
        return row

    # -- basis changes ------------------------------------------------------------

    def _axis_apply(self, vec: np.ndarray, mat: np.ndarray) -> np.ndarray:
        """Apply ``mat`` along every exponent axis; leading axes are batch axes."""
        vec = np.asarray(vec, dtype=np.int64)
        lead = vec.shape[:-1]
        arr = vec.reshape(lead + self.shape)
        off = len(lead)
        for ax in range(self.d):
            arr = np.moveaxis(np.tensordot(arr, mat, axes=([off + ax], [0])) % self.p, -1, off + ax)
        return arr.reshape(lead + (self.dim,))

    def to_group_basis(self, coeffs: np.ndarray) -> np.ndarray:
        return self._axis_apply(coeffs, self.signed_pascal)

    def from_group_basis(self, coeffs: np.ndarray) -> np.ndarray:
        return self._axis_apply(coeffs, self.pascal)

    # -- elements -----------------------------------------------------------------

    def element(self, coeffs) -> "GroupAlgebraElement":
        arr = np.asarray(coeffs, dtype=np.int64).reshape(-1) % self.p
        if arr.shape != (self.dim,):
            raise ValueError(f"expected {self.dim} coefficients")
        return GroupAlgebraElement(self, arr)

    def zero(self) -> "GroupAlgebraElement":
        return GroupAlgebraElement(self, np.zeros(self.dim, dtype=np.int64))

    def one(self) -> "GroupAlgebraElement":
        return self.b_monomial((0,) * self.d)

    def index(self, alpha: Sequence[int]) -> int:
        return int(np.ravel_multi_index(tuple(alpha), self.shape))

    def b_monomial(self, alpha: Sequence[int], c: int = 1) -> "GroupAlgebraElement":
        v = np.zeros(self.dim, dtype=np.int64)
        if all(0 <= a < self.side for a in alpha):
            v[self.index(alpha)] = c % self.p
        return GroupAlgebraElement(self, v)

    def b(self, i: int) -> "GroupAlgebraElement":
        alpha = [0] * self.d
        alpha[i] = 1
        return self.b_monomial(alpha)

    def from_terms(self, terms: dict) -> "GroupAlgebraElement":
        v = np.zeros(self.dim, dtype=np.int64)
        for alpha, c in terms.items():
            if all(a < self.side for a in alpha):
                v[self.index(alpha)] += c
        return self.element(v)

    def from_group_coeffs(self, coeffs) -> "GroupAlgebraElement":
        return self.element(self.from_group_basis(np.asarray(coeffs) % self.p))

    def group_basis_element(self, lam: Sequence[int]) -> "GroupAlgebraElement":
        v = np.zeros(self.dim, dtype=np.int64)
        v[self.index(lam)] = 1
        return self.from_group_coeffs(v)

    def group_element(self, g: GroupElement) -> "GroupAlgebraElement":
        v = np.zeros(self.dim, dtype=np.int64)
        v[self.coset_index(g)] = 1
        return self.from_group_coeffs(v)

    def lift_symbol(self, f: GradedPoly) -> "GroupAlgebraElement":
        """Element whose b-coefficients are those of f (monomials beyond p^m drop)."""
        return self.from_terms(dict(f.terms))

    # -- multiplication -------------------------------------------------------------

    def group_product(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Convolution of group-basis coefficient vectors."""
        out = np.zeros(self.dim, dtype=np.int64)
        for lam in np.nonzero(x)[0]:
            row = self._row(int(lam))
            out[row] += x[lam] * y
        return out % self.p

    def multiply(self, a: "GroupAlgebraElement", b: "GroupAlgebraElement") -> "GroupAlgebraElement":
        if a.Q is not self or b.Q is not self:
            raise MixedAlgebra("product of elements from different quotients")
        x, y = self.to_group_basis(a.coeffs), self.to_group_basis(b.coeffs)
        return self.element(self.from_group_basis(self.group_product(x, y)))

    def commutator_with(self, g: GroupElement, x: "GroupAlgebraElement") -> "GroupAlgebraElement":
        """[g, x] = g x - x g."""
        perms = self._perm_pair(g)
        return self._commutator(perms, x)

    def _perm_pair(self, g: GroupElement) -> tuple[np.ndarray, np.ndarray]:
        key = tuple(c % self.side for c in g.log.coords)
        cache = self.__dict__.setdefault("_perm_cache", {})
        if key not in cache:
            mat = g.matrix(self._W)
            cache[key] = (self._left_perm(mat), self._right_perm(mat))
        return cache[key]

    def _commutator(self, perms, x: "GroupAlgebraElement") -> "GroupAlgebraElement":
        left, right = perms
        gx = self.to_group_basis(x.coeffs)
        out = np.zeros(self.dim, dtype=np.int64)
        out[left] += gx
        out[right] -= gx
        return self.element(self.from_group_basis(out % self.p))

    def right_multiplication(self, g: GroupElement) -> np.ndarray:
        """Matrix M with (x g) = x M on b-coefficient row vectors."""
        perm = self._perm_pair(g)[1]
        rows = self.to_group_basis(np.eye(self.dim, dtype=np.int64))
        moved = np.zeros_like(rows)
        moved[:, perm] = rows
        return self.from_group_basis(moved)

    # -- structure ----------------------------------------------------------------

    def in_n_span(self, alpha: Sequence[int]) -> bool:
        return all(alpha[i] % self.p == 0 for i in self.frobenius)

    def n_mask(self) -> np.ndarray:
        return self._nmask.copy()

    def subgroup_indices(self) -> np.ndarray:
        """Group-basis indices of the cosets inside G_1 = exp(L_1)."""
        keys = np.indices(self.shape).reshape(self.d, -1)
        ok = np.ones(self.dim, dtype=bool)
        for i in self.frobenius:
            ok &= keys[i] % self.p == 0
        return self._lookup[np.nonzero(ok)[0]]

    def graded_dimension(self, n: int) -> int:
        return int((self.total_degree == n).sum())

    def poly_zero(self) -> GradedPoly:
        return GradedPoly.zero(self.p, self.d, self.names)

    def __repr__(self) -> str:
        return f"QuotientAlgebra({self.algebra.label or 'L'}, p={self.p}, m={self.m}, dim={self.dim})"


def build_quotient(algebra: PowerfulLieAlgebra, spec: SubalgebraSpec, m: int) -> QuotientAlgebra:
    return QuotientAlgebra(algebra, spec, m)


@dataclass(frozen=True, eq=False)
class GroupAlgebraElement:
    Q: QuotientAlgebra
    coeffs: np.ndarray

    def _same(self, other: "GroupAlgebraElement") -> None:
        if other.Q is not self.Q:
            raise MixedAlgebra("elements of different quotient algebras")

    def __add__(self, other: "GroupAlgebraElement") -> "GroupAlgebraElement":
        self._same(other)
        return self.Q.element(self.coeffs + other.coeffs)

    def __sub__(self, other: "GroupAlgebraElement") -> "GroupAlgebraElement":
        self._same(other)
        return self.Q.element(self.coeffs - other.coeffs)

    def __neg__(self) -> "GroupAlgebraElement":
        return self.Q.element(-self.coeffs)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.Q.element(self.coeffs * other)
        return self.Q.multiply(self, other)

    def __rmul__(self, other: int) -> "GroupAlgebraElement":
        return self.Q.element(self.coeffs * other)

    def __pow__(self, e: int) -> "GroupAlgebraElement":
        out = self.Q.one()
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GroupAlgebraElement):
            return NotImplemented
        return other.Q is self.Q and bool((self.coeffs == other.coeffs).all())

    def __hash__(self) -> int:
        return hash(self.coeffs.tobytes())

    def is_zero(self) -> bool:
        return not self.coeffs.any()

    def support(self) -> np.ndarray:
        return np.nonzero(self.coeffs)[0]

    def terms(self) -> dict[tuple[int, ...], int]:
        return {tuple(int(a) for a in self.Q.exponents[i]): int(self.coeffs[i]) for i in self.support()}

    def jadic_degree(self) -> float | int:
        return jadic_degree(self)

    def symbol(self) -> GradedPoly:
        return principal_symbol(self)

    def component(self, n: int) -> GradedPoly:
        """The degree-n part of the b-expansion, as a polynomial in the y_i."""
        Q = self.Q
        idx = np.nonzero((Q.total_degree == n) & (self.coeffs != 0))[0]
        return GradedPoly(
            Q.p, Q.d, {tuple(int(a) for a in Q.exponents[i]): int(self.coeffs[i]) for i in idx}, Q.names
        )

    def constant_term(self) -> int:
        return int(self.coeffs[0])

    def is_unit(self) -> bool:
        # J is nilpotent, so units are exactly the elements outside J
        return self.constant_term() != 0

    def inverse(self) -> "GroupAlgebraElement":
        if not self.is_unit():
            raise ZeroElement("element lies in the augmentation ideal")
        Q = self.Q
        c = pow(self.constant_term(), -1, Q.p)
        n = Q.one() - self * c
        out, term = Q.one(), Q.one()
        while True:
            term = term * n
            if term.is_zero():
                break
            out = out + term
        return out * c

    def __repr__(self) -> str:
        t = self.terms()
        if not t:
            return "0"
        parts = []
        for alpha, c in sorted(t.items(), key=lambda ac: (sum(ac[0]), ac[0])):
            mono = "*".join(f"b{i + 1}^{a}" if a > 1 else f"b{i + 1}" for i, a in enumerate(alpha) if a)
            parts.append((f"{c}*" if c != 1 or not mono else "") + (mono or ""))
        return " + ".join(parts)


def jadic_degree(x: GroupAlgebraElement) -> float | int:
    """min |alpha| over the support; TOP for zero."""
    supp = x.support()
    if supp.size == 0:
        return TOP
    return int(x.Q.total_degree[supp].min())


def principal_symbol(x: GroupAlgebraElement) -> GradedPoly:
    n = jadic_degree(x)
    if n == TOP:
        raise ZeroElement("zero has no principal symbol")
    return x.component(int(n))


def subalgebra_decompose(w: GroupAlgebraElement) -> tuple[GroupAlgebraElement, GroupAlgebraElement]:
    """Split w into its N-span part and the remainder."""
    mask = w.Q._nmask
    x = np.where(mask, w.coeffs, 0)
    return w.Q.element(x), w.Q.element(w.coeffs - x)


def monomials_up_to(Q: QuotientAlgebra, n: int, n_span_only: bool = False) -> list[tuple[int, ...]]:
    idx = np.nonzero(Q.total_degree <= n)[0]
    if n_span_only:
        idx = idx[Q._nmask[idx]]
    out = [tuple(int(a) for a in Q.exponents[i]) for i in idx]
    return sorted(out, key=lambda a: (sum(a), a))


def _check_source_hypotheses(u: LieElement, spec: SubalgebraSpec, k: int) -> None:
    alg = u.algebra
    if k < alg.eps:
        raise HypothesisFailed(f"k = {k} is below epsilon = {alg.eps}")
    if alg.depth(u) < k:
        raise HypothesisFailed(f"[u, L] is not inside p^{k} L")
    if alg.depth_on(u, spec) < k + 1:
        raise HypothesisFailed(f"[u, L1] is not inside p^{k + 1} L")


@dataclass(frozen=True)
class FiltrationReport:
    holds: bool
    variant: str
    shift: int
    checked: int
    worst: tuple | None = None

    def __bool__(self) -> bool:
        return self.holds


def commutator_filtration_check(
    Q: QuotientAlgebra,
    a: GroupElement,
    k: int,
    sample_degree: int,
    variant: str = "c",
) -> FiltrationReport:
    """Degree bounds for [a, b^alpha] with |alpha| <= sample_degree.

    Variant "c" tests every monomial against the shift p^k - 1; variant "d"
    tests N-span monomials against p^{k+1} - p.
    """
    _check_source_hypotheses(a.log, Q.spec, k)
    p = Q.p
    if variant == "c":
        shift, only_n = p**k - 1, False
    elif variant == "d":
        shift, only_n = p ** (k + 1) - p, True
    else:
        raise ValueError("variant must be 'c' or 'd'")
    perms = Q._perm_pair(a)
    checked = 0
    for alpha in monomials_up_to(Q, sample_degree, only_n):
        c = Q._commutator(perms, Q.b_monomial(alpha))
        checked += 1
        deg = jadic_degree(c)
        if deg < sum(alpha) + shift:
            return FiltrationReport(False, variant, shift, checked, (alpha, deg))
    return FiltrationReport(True, variant, shift, checked)


def induced_derivation(Q: QuotientAlgebra, a: GroupElement, theta: int) -> DerivationOp:
    """The graded derivation y_j -> symbol of [a, b_j] in degree 1 + theta."""
    if 1 + theta >= Q.window:
        raise WindowExceeded(f"degree {1 + theta} is outside the safe window {Q.window}")
    perms = Q._perm_pair(a)
    images = []
    for j in range(Q.d):
        c = Q._commutator(perms, Q.b(j))
        deg = jadic_degree(c)
        if deg < 1 + theta:
            raise HypothesisFailed(f"[a, b_{j + 1}] has degree {deg} < {1 + theta}")
        images.append(c.component(1 + theta))
    return DerivationOp(Q.p, Q.d, tuple(images))


def rho_matrix(u: LieElement, spec: SubalgebraSpec, k: int | None = None) -> list[list[int]]:
    """Matrix (c_ij) of v_j + L_1 -> p^-k [u, v_j] + pL; rows i, columns j in T."""
    alg = u.algebra
    depth = alg.depth(u)
    if depth >= alg.N:
        raise HypothesisFailed("u is central: its depth is not determined")
    if k is None:
        k = depth
    if depth != k:
        raise HypothesisFailed(f"[u, L] has depth {depth}, not {k}")
    if k + 1 >= alg.N:
        raise PrecisionExhausted(f"depth {k + 1} is not visible at precision {alg.N}")
    if alg.depth_on(u, spec) < k + 1:
        raise HypothesisFailed(f"[u, L1] is not inside p^{k + 1} L")
    p = alg.p
    cols = spec.frobenius_indices
    out = [[0] * len(cols) for _ in range(alg.d)]
    for c, j in enumerate(cols):
        b = u.bracket(alg.basis(j))
        for i, x in enumerate(b.coords):
            out[i][c] = (x // p**k) % p
    return out


def rho_derivation(u: LieElement, spec: SubalgebraSpec, k: int | None = None) -> DerivationOp:
    """sum over j in T of (sum_i c_ij y_i^{p^k}) d/dy_j."""
    alg = u.algebra
    if k is None:
        k = alg.depth(u)
    c = rho_matrix(u, spec, k)
    p, d = alg.p, alg.d
    terms = {}
    for col, j in enumerate(spec.frobenius_indices):
        img = GradedPoly.zero(p, d, alg.names)
        for i in range(d):
            if c[i][col]:
                img = img + GradedPoly.var(p, d, i, p**k, alg.names).scale(c[i][col])
        terms[j] = img
    return DerivationOp.from_terms(p, d, terms)


def verify_rho_formula(Q: QuotientAlgebra, u: LieElement, k: int | None = None) -> bool:
    """Whether the induced derivation of exp(u) at shift p^k - 1 matches rho_u."""
    if u.algebra != Q.algebra:
        raise MixedAlgebra("u is not in the quotient's Lie algebra")
    alg = u.algebra
    if k is None:
        k = alg.depth(u)
    expected = rho_derivation(u, Q.spec, k)
    got = induced_derivation(Q, GroupElement(u), Q.p**k - 1)
    return all(got.images[j] == expected.images[j] for j in Q.frobenius)


def required_exponent(p: int, degree: int) -> int:
    """Smallest m with degree < p^m."""
    m = 1
    while p**m <= degree:
        m += 1
    return m
