"""Sparse polynomials over F_p, Frobenius calculus and truncated ideals.

Polynomials live in B = F_p[y_1, ..., y_d] with every variable of weight 1.
The Frobenius subring B_1 is generated by y_j^p for j in a chosen index set
T and by the remaining variables unchanged.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import gf
from .errors import (
    DegreeBoundTooSmall,
    IndexOutOfRange,
    ZeroDivisor,
    ZeroIdeal,
)

Monomial = tuple[int, ...]


def grlex_key(a: Monomial) -> tuple:
    return (sum(a), a)


class GradedPoly:
    """Immutable sparse polynomial; ``terms`` maps exponent tuples to residues."""

    __slots__ = ("p", "d", "terms", "names", "_hash")

    def __init__(
        self,
        p: int,
        d: int,
        terms: Mapping[Monomial, int] | Iterable[tuple[Monomial, int]] = (),
        names: Sequence[str] | None = None,
    ) -> None:
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Monomial, int] = {}
        for mono, c in items:
            mono = tuple(int(x) for x in mono)
            if len(mono) != d or min(mono, default=0) < 0:
                raise ValueError(f"bad exponent {mono} for {d} variables")
            acc[mono] = (acc.get(mono, 0) + int(c)) % p
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "terms", {m: c for m, c in acc.items() if c})
        object.__setattr__(self, "names", tuple(names) if names else None)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, key, value):
        raise AttributeError("GradedPoly is immutable")

    # -- constructors ---------------------------------------------------------

    def _new(self, terms) -> "GradedPoly":
        return GradedPoly(self.p, self.d, terms, self.names)

    @classmethod
    def zero(cls, p: int, d: int, names=None) -> "GradedPoly":
        return cls(p, d, {}, names)

    @classmethod
    def constant(cls, p: int, d: int, c: int = 1, names=None) -> "GradedPoly":
        return cls(p, d, {(0,) * d: c}, names)

    @classmethod
    def var(cls, p: int, d: int, i: int, power: int = 1, names=None) -> "GradedPoly":
        mono = [0] * d
        mono[i] = power
        return cls(p, d, {tuple(mono): 1}, names)

    @classmethod
    def monomial(cls, p: int, mono: Monomial, c: int = 1, names=None) -> "GradedPoly":
        return cls(p, len(mono), {tuple(mono): c}, names)

    @classmethod
    def parse(cls, text: str, p: int, names: Sequence[str]) -> "GradedPoly":
        """Read expressions like ``"h^3*f - 2*e^3 + 1"``."""
        d = len(names)
        index = {n: i for i, n in enumerate(names)}
        src = text.replace(" ", "").replace("**", "^")
        if not src:
            raise ValueError("empty polynomial")
        if src[0] not in "+-":
            src = "+" + src
        out: dict[Monomial, int] = {}
        for sign, body in re.findall(r"([+-])([^+-]+)", src):
            coef = -1 if sign == "-" else 1
            mono = [0] * d
            for factor in body.split("*"):
                if re.fullmatch(r"\d+", factor):
                    coef *= int(factor)
                    continue
                name, _, power = factor.partition("^")
                if name not in index:
                    raise ValueError(f"unknown variable {name!r}")
                mono[index[name]] += int(power) if power else 1
            key = tuple(mono)
            out[key] = out.get(key, 0) + coef
        return cls(p, d, out, names)

    # -- protocol -------------------------------------------------------------

    def _check(self, other: "GradedPoly") -> None:
        if other.p != self.p or other.d != self.d:
            raise ValueError("polynomials over different rings")

    def _lift(self, other) -> "GradedPoly":
        if isinstance(other, GradedPoly):
            self._check(other)
            return other
        if isinstance(other, int):
            return GradedPoly.constant(self.p, self.d, other, self.names)
        return NotImplemented

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = GradedPoly.constant(self.p, self.d, other)
        if not isinstance(other, GradedPoly):
            return NotImplemented
        return self.p == other.p and self.d == other.d and self.terms == other.terms

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash((self.p, self.d, frozenset(self.terms.items())))
            object.__setattr__(self, "_hash", h)
        return h

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        t = dict(self.terms)
        for m, c in other.terms.items():
            t[m] = t.get(m, 0) + c
        return self._new(t)

    __radd__ = __add__

    def __neg__(self) -> "GradedPoly":
        return self._new({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        p = self.p
        t: dict[Monomial, int] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                t[m] = (t.get(m, 0) + c1 * c2) % p
        return self._new(t)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "GradedPoly":
        if e < 0:
            raise ValueError("negative power")
        result = GradedPoly.constant(self.p, self.d, 1, self.names)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # -- inspection -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(m) for m in self.terms), default=-1)

    def low_degree(self) -> int:
        return min((sum(m) for m in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self.terms}) <= 1

    def homogeneous_component(self, n: int) -> "GradedPoly":
        return self._new({m: c for m, c in self.terms.items() if sum(m) == n})

    def components(self) -> dict[int, "GradedPoly"]:
        degs = sorted({sum(m) for m in self.terms})
        return {n: self.homogeneous_component(n) for n in degs}

    def is_constant(self) -> bool:
        return all(not any(m) for m in self.terms)

    def is_unit(self) -> bool:
        return bool(self.terms) and self.is_constant()

    def leading(self) -> tuple[Monomial, int]:
        if not self.terms:
            raise ZeroDivisor("zero polynomial has no leading term")
        m = max(self.terms, key=grlex_key)
        return m, self.terms[m]

    def monic(self) -> "GradedPoly":
        if not self.terms:
            return self
        _, c = self.leading()
        inv = pow(c, -1, self.p)
        return self._new({m: v * inv for m, v in self.terms.items()})

    def scale(self, c: int) -> "GradedPoly":
        return self._new({m: v * c for m, v in self.terms.items()})

    def with_names(self, names: Sequence[str]) -> "GradedPoly":
        return GradedPoly(self.p, self.d, self.terms, names)

    def sorted_terms(self) -> list[tuple[Monomial, int]]:
        return sorted(self.terms.items(), key=lambda mc: grlex_key(mc[0]), reverse=True)

    def deg_in(self, i: int) -> int:
        return max((m[i] for m in self.terms), default=-1)

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        names = self.names or tuple(f"y{i + 1}" for i in range(self.d))
        parts = []
        for m, c in self.sorted_terms():
            factors = [n if e == 1 else f"{n}^{e}" for n, e in zip(names, m) if e]
            if not factors:
                parts.append(str(c))
            elif c == 1:
                parts.append("*".join(factors))
            else:
                parts.append(f"{c}*" + "*".join(factors))
        return " + ".join(parts)

    def to_json(self) -> list:
        return [[list(m), c] for m, c in self.sorted_terms()]


# ---------------------------------------------------------------------------
# division and gcd

def divmod_poly(Y: GradedPoly, X: GradedPoly) -> tuple[GradedPoly, GradedPoly]:
    """Division of Y by X under grlex; the remainder is zero iff X divides Y."""
    if X.is_zero():
        raise ZeroDivisor("division by the zero polynomial")
    X._check(Y)
    p = X.p
    lm, lc = X.leading()
    inv = pow(lc, -1, p)
    xt = list(X.terms.items())
    rem = dict(Y.terms)
    quo: dict[Monomial, int] = {}
    out: dict[Monomial, int] = {}
    while rem:
        m = max(rem, key=grlex_key)
        c = rem.pop(m)
        if all(a >= b for a, b in zip(m, lm)):
            q = tuple(a - b for a, b in zip(m, lm))
            qc = c * inv % p
            quo[q] = qc
            for xm, xc in xt:
                if xm == lm:
                    continue
                mm = tuple(a + b for a, b in zip(xm, q))
                v = (rem.get(mm, 0) - qc * xc) % p
                if v:
                    rem[mm] = v
                else:
                    rem.pop(mm, None)
        else:
            out[m] = c
    return X._new(quo), X._new(out)


def divides(X: GradedPoly, Y: GradedPoly) -> tuple[bool, GradedPoly | None]:
    """Whether Y lies in XB, with the cofactor when it does."""
    q, r = divmod_poly(Y, X)
    return (True, q) if r.is_zero() else (False, None)


def _exact_div(a: GradedPoly, b: GradedPoly) -> GradedPoly:
    q, r = divmod_poly(a, b)
    if not r.is_zero():
        raise ArithmeticError("inexact division")
    return q


def _as_univariate(f: GradedPoly, i: int) -> dict[int, GradedPoly]:
    out: dict[int, dict] = {}
    for m, c in f.terms.items():
        rest = m[:i] + (0,) + m[i + 1 :]
        out.setdefault(m[i], {})[rest] = c
    return {k: f._new(v) for k, v in out.items()}


def _from_univariate(parts: Mapping[int, GradedPoly], i: int, like: GradedPoly) -> GradedPoly:
    t: dict[Monomial, int] = {}
    for k, g in parts.items():
        for m, c in g.terms.items():
            mm = m[:i] + (m[i] + k,) + m[i + 1 :]
            t[mm] = (t.get(mm, 0) + c) % like.p
    return like._new(t)


def _content(f: GradedPoly, i: int) -> GradedPoly:
    g = GradedPoly.zero(f.p, f.d, f.names)
    for c in _as_univariate(f, i).values():
        g = multivariate_gcd(g, c)
        if g.is_unit():
            break
    return g


def _prem(a: dict[int, GradedPoly], b: dict[int, GradedPoly]) -> dict[int, GradedPoly]:
    db = max(b)
    lb = b[db]
    r = {k: v for k, v in a.items() if not v.is_zero()}
    while r and max(r) >= db:
        dr = max(r)
        lr = r[dr]
        shift = dr - db
        new = {k: v * lb for k, v in r.items()}
        for k, v in b.items():
            kk = k + shift
            new[kk] = new.get(kk, GradedPoly.zero(lb.p, lb.d)) - v * lr
        r = {k: v for k, v in new.items() if not v.is_zero()}
    return r


def multivariate_gcd(f: GradedPoly, g: GradedPoly) -> GradedPoly:
    """Monic (grlex) greatest common divisor; gcd(f, 0) = monic(f)."""
    f._check(g)
    if f.is_zero():
        return g.monic()
    if g.is_zero():
        return f.monic()
    if f.is_constant() or g.is_constant():
        return GradedPoly.constant(f.p, f.d, 1, f.names)
    used = [i for i in range(f.d) if f.deg_in(i) > 0 or g.deg_in(i) > 0]
    i = used[-1]
    if f.deg_in(i) <= 0:
        return multivariate_gcd(f, _content(g, i))
    if g.deg_in(i) <= 0:
        return multivariate_gcd(_content(f, i), g)
    cf, cg = _content(f, i), _content(g, i)
    c = multivariate_gcd(cf, cg)
    a = _as_univariate(_exact_div(f, cf), i)
    b = _as_univariate(_exact_div(g, cg), i)
    if max(a) < max(b):
        a, b = b, a
    while b and max(b) > 0:
        r = _prem(a, b)
        a = b
        if not r:
            b = {}
            break
        rp = _from_univariate(r, i, f)
        b = _as_univariate(_exact_div(rp, _content(rp, i)), i)
    if b:
        # the last remainder is free of y_i: the primitive parts are coprime
        return c.monic()
    prim = _from_univariate(a, i, f)
    prim = _exact_div(prim, _content(prim, i))
    return (c * prim).monic()


def gcd_all(polys: Iterable[GradedPoly]) -> GradedPoly:
    polys = list(polys)
    if not polys:
        raise ZeroIdeal("empty generator list")
    g = GradedPoly.zero(polys[0].p, polys[0].d, polys[0].names)
    for f in polys:
        g = multivariate_gcd(g, f)
        if g.is_unit():
            break
    return g


def reflexive_closure(gens: Sequence[GradedPoly]) -> GradedPoly:
    """Principal generator of the reflexive closure of the ideal (gens)."""
    if not gens or all(g.is_zero() for g in gens):
        raise ZeroIdeal("all generators are zero")
    return gcd_all(gens)


def pseudo_null_test(ann_gens: Sequence[GradedPoly]) -> bool:
    """Whether R/I is pseudo-null for I generated by ``ann_gens``."""
    if not ann_gens or all(g.is_zero() for g in ann_gens):
        return False
    return gcd_all(ann_gens).is_unit()


# ---------------------------------------------------------------------------
# Frobenius calculus

def _indices(frobenius: int | Iterable[int], d: int) -> tuple[int, ...]:
    if isinstance(frobenius, int):
        if not 0 <= frobenius <= d:
            raise IndexOutOfRange(f"t = {frobenius} outside [0, {d}]")
        return tuple(range(frobenius))
    idx = tuple(sorted(set(int(i) for i in frobenius)))
    if idx and (idx[0] < 0 or idx[-1] >= d):
        raise IndexOutOfRange(f"Frobenius indices {idx} outside [0, {d})")
    return idx


@dataclass(frozen=True)
class FrobeniusSplit:
    """f = sum over alpha in [p-1]^T of u_alpha y^alpha with u_alpha in B_1."""

    p: int
    d: int
    indices: tuple[int, ...]
    components: Mapping[tuple[int, ...], GradedPoly] = field(default_factory=dict)

    @property
    def t(self) -> int:
        return len(self.indices)

    def shift(self, alpha: tuple[int, ...]) -> Monomial:
        mono = [0] * self.d
        for i, a in zip(self.indices, alpha):
            mono[i] = a
        return tuple(mono)

    def reassemble(self) -> GradedPoly:
        out = GradedPoly.zero(self.p, self.d)
        for alpha, u in self.components.items():
            out = out + u * GradedPoly.monomial(self.p, self.shift(alpha))
        return out


def in_b1(f: GradedPoly, frobenius) -> bool:
    idx = _indices(frobenius, f.d)
    return all(m[i] % f.p == 0 for m in f.terms for i in idx)


def frobenius_decompose(f: GradedPoly, frobenius) -> FrobeniusSplit:
    idx = _indices(frobenius, f.d)
    p = f.p
    buckets: dict[tuple[int, ...], dict[Monomial, int]] = {}
    for m, c in f.terms.items():
        alpha = tuple(m[i] % p for i in idx)
        rest = list(m)
        for i, a in zip(idx, alpha):
            rest[i] -= a
        buckets.setdefault(alpha, {})[tuple(rest)] = c
    comps = {a: f._new(t) for a, t in sorted(buckets.items())}
    return FrobeniusSplit(p, f.d, idx, comps)


def diff(f: GradedPoly, j: int) -> GradedPoly:
    """Ordinary partial derivative with respect to y_j."""
    if not 0 <= j < f.d:
        raise IndexOutOfRange(f"variable index {j} outside [0, {f.d})")
    t = {}
    for m, c in f.terms.items():
        if m[j] % f.p:
            mm = m[:j] + (m[j] - 1,) + m[j + 1 :]
            t[mm] = c * m[j]
    return f._new(t)


def partial_j(f: GradedPoly, j: int, frobenius) -> GradedPoly:
    """The B_1-linear derivation lowering the j-th Frobenius exponent."""
    idx = _indices(frobenius, f.d)
    if j not in idx:
        raise IndexOutOfRange(f"index {j} is not a Frobenius index {idx}")
    split = frobenius_decompose(f, idx)
    pos = idx.index(j)
    out = GradedPoly.zero(f.p, f.d, f.names)
    for alpha, u in split.components.items():
        if alpha[pos]:
            lowered = list(alpha)
            lowered[pos] -= 1
            out = out + u * GradedPoly.monomial(f.p, split.shift(tuple(lowered)), alpha[pos])
    return out


@dataclass(frozen=True)
class DerivationOp:
    """A derivation of B given by the images of y_1, ..., y_d."""

    p: int
    d: int
    images: tuple[GradedPoly, ...]

    def __post_init__(self) -> None:
        if len(self.images) != self.d:
            raise ValueError(f"need {self.d} generator images")
        for g in self.images:
            if g.p != self.p or g.d != self.d:
                raise ValueError("image lives in a different ring")

    @classmethod
    def zero(cls, p: int, d: int) -> "DerivationOp":
        return cls(p, d, tuple(GradedPoly.zero(p, d) for _ in range(d)))

    @classmethod
    def from_terms(cls, p: int, d: int, terms: Mapping[int, GradedPoly]) -> "DerivationOp":
        """sum of terms[j] * d/dy_j."""
        imgs = [GradedPoly.zero(p, d) for _ in range(d)]
        for j, g in terms.items():
            imgs[j] = imgs[j] + g
        return cls(p, d, tuple(imgs))

    def is_zero(self) -> bool:
        return all(g.is_zero() for g in self.images)

    def is_b1_linear(self, frobenius) -> bool:
        idx = set(_indices(frobenius, self.d))
        return all(g.is_zero() for j, g in enumerate(self.images) if j not in idx)

    def __call__(self, f: GradedPoly) -> GradedPoly:
        return apply_derivation(self, f)

    def __add__(self, other: "DerivationOp") -> "DerivationOp":
        return DerivationOp(self.p, self.d, tuple(a + b for a, b in zip(self.images, other.images)))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DerivationOp):
            return NotImplemented
        return self.p == other.p and self.images == other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def render(self, names: Sequence[str]) -> str:
        parts = []
        for j, g in enumerate(self.images):
            if not g.is_zero():
                parts.append(f"({g.with_names(names)})*d/d{names[j]}")
        return " + ".join(parts) or "0"


def apply_derivation(D: DerivationOp, f: GradedPoly) -> GradedPoly:
    out = GradedPoly.zero(f.p, f.d, f.names)
    for j, g in enumerate(D.images):
        if not g.is_zero():
            out = out + g * diff(f, j)
    return out


# ---------------------------------------------------------------------------
# degree-truncated ideals

@lru_cache(maxsize=None)
def monomials_of_degree(d: int, n: int) -> tuple[Monomial, ...]:
    """All exponents of total degree n, in decreasing grlex order."""
    if n < 0:
        return ()
    out = []
    for cut in itertools.combinations(range(n + d - 1), d - 1):
        prev = -1
        mono = []
        for c in cut:
            mono.append(c - prev - 1)
            prev = c
        mono.append(n + d - 2 - prev)
        out.append(tuple(mono))
    return tuple(sorted(out, reverse=True))


@lru_cache(maxsize=None)
def _mono_index(d: int, n: int) -> dict[Monomial, int]:
    return {m: i for i, m in enumerate(monomials_of_degree(d, n))}


def to_vector(f: GradedPoly, n: int) -> np.ndarray:
    idx = _mono_index(f.d, n)
    v = np.zeros(len(idx), dtype=np.int64)
    for m, c in f.terms.items():
        if sum(m) != n:
            raise ValueError(f"term {m} is not of degree {n}")
        v[idx[m]] = c
    return v


def from_vector(v, p: int, d: int, n: int, names=None) -> GradedPoly:
    monos = monomials_of_degree(d, n)
    return GradedPoly(p, d, {monos[i]: int(c) for i, c in enumerate(v) if c}, names)


def multiples(g: GradedPoly, n: int) -> np.ndarray:
    """Rows m*g for all monomials m of degree n - deg g."""
    k = n - g.degree()
    monos = monomials_of_degree(g.d, k)
    idx = _mono_index(g.d, n)
    out = np.zeros((len(monos), len(idx)), dtype=np.int64)
    for r, mono in enumerate(monos):
        for gm, c in g.terms.items():
            out[r, idx[tuple(a + b for a, b in zip(gm, mono))]] = c
    return out


def b1_monomial_rows(d: int, n: int, p: int, frobenius) -> np.ndarray:
    idx = _indices(frobenius, d)
    monos = monomials_of_degree(d, n)
    keep = [i for i, m in enumerate(monos) if all(m[j] % p == 0 for j in idx)]
    out = np.zeros((len(keep), len(monos)), dtype=np.int64)
    for r, i in enumerate(keep):
        out[r, i] = 1
    return out


class TruncatedIdeal:
    """Homogeneous ideal of B recorded degree by degree up to ``D``."""

    def __init__(self, gens: Sequence[GradedPoly], D: int, frobenius=None) -> None:
        gens = [g for g in gens if not g.is_zero()]
        if not gens:
            raise ZeroIdeal("ideal needs a nonzero generator")
        for g in gens:
            if not g.is_homogeneous():
                raise ValueError(f"generator {g} is not homogeneous")
        self.p = gens[0].p
        self.d = gens[0].d
        self.gens = tuple(gens)
        self.D = D
        self.frobenius = _indices(self.d if frobenius is None else frobenius, self.d)
        self.spaces: dict[int, tuple[np.ndarray, list[int]]] = {}
        for n in range(D + 1):
            rows = [multiples(g, n) for g in gens if g.degree() <= n]
            width = len(monomials_of_degree(self.d, n))
            if rows:
                self.spaces[n] = gf.rref(np.vstack(rows), self.p)
            else:
                self.spaces[n] = (np.zeros((0, width), dtype=np.int64), [])

    def dimension(self, n: int) -> int:
        return len(self.spaces[n][1])

    def basis(self, n: int) -> list[GradedPoly]:
        return [from_vector(v, self.p, self.d, n) for v in self.spaces[n][0]]

    def contains(self, f: GradedPoly) -> bool:
        for n, comp in f.components().items():
            if n > self.D:
                raise DegreeBoundTooSmall(f"degree {n} beyond truncation {self.D}")
            basis, piv = self.spaces[n]
            if not gf.in_span(basis, piv, to_vector(comp, n), self.p):
                return False
        return True

    def _require_bound(self) -> None:
        need = max(g.degree() for g in self.gens) + self.p
        if self.D < need:
            raise DegreeBoundTooSmall(f"degree bound {self.D} < {need}")

    def b1_part(self, n: int) -> np.ndarray:
        """rref basis of the degree-n part of I intersected with B_1."""
        basis, _ = self.spaces[n]
        return gf.intersect(basis, b1_monomial_rows(self.d, n, self.p, self.frobenius), self.p)

    def d_stable_test(self) -> bool:
        self._require_bound()
        for n in range(1, self.D + 1):
            for f in self.basis(n):
                for j in self.frobenius:
                    if not self.contains(partial_j(f, j, self.frobenius)):
                        return False
        return True

    def control_test(self) -> bool:
        self._require_bound()
        parts = {k: self.b1_part(k) for k in range(self.D + 1)}
        for n in range(self.D + 1):
            rows = []
            for k in range(n + 1):
                for v in parts[k]:
                    rows.append(multiples(from_vector(v, self.p, self.d, k), n))
            basis, _ = self.spaces[n]
            if rows:
                ctrl = gf.rref(np.vstack(rows), self.p)[0]
            else:
                ctrl = np.zeros((0, basis.shape[1]), dtype=np.int64)
            if ctrl.shape != basis.shape or (ctrl != basis).any():
                return False
        return True


def random_homogeneous(rng, p: int, d: int, n: int, density: float = 0.5, names=None) -> GradedPoly:
    terms = {}
    for m in monomials_of_degree(d, n):
        if rng.random() < density:
            terms[m] = rng.randrange(1, p)
    return GradedPoly(p, d, terms, names)


def random_poly(rng, p: int, d: int, max_deg: int, density: float = 0.3) -> GradedPoly:
    out = GradedPoly.zero(p, d)
    for n in range(max_deg + 1):
        out = out + random_homogeneous(rng, p, d, n, density)
    return out
