"""Powerful Z_p-Lie algebras with faithful matrix realizations.

The Campbell-Hausdorff product is evaluated as log(exp(U) exp(V)) on the
realization, and pulled back to basis coordinates through one
distinguished matrix position per basis element.  Whether an element lies
in p^k L is decided coordinate-wise in the fixed basis.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .errors import (
    HypothesisFailed,
    InvalidAlgebra,
    MixedAlgebra,
    PrecisionExhausted,
    RealizationNotInjective,
    UnsupportedParameters,
)
from .padic import (
    TruncatedPadic,
    as_int_array,
    epsilon,
    exp_series,
    log_series,
    matmul_mod,
    min_valuation,
    vp,
)


def _exact_matmul(a, b):
    n = len(a)
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n))
        for i in range(n)
    )


def _find_supports(mats) -> tuple[tuple[int, int], ...]:
    n = len(mats[0])
    out = []
    for i, m in enumerate(mats):
        for r in range(n):
            for c in range(n):
                if m[r][c] and all(o[r][c] == 0 for j, o in enumerate(mats) if j != i):
                    out.append((r, c))
                    break
            else:
                continue
            break
        else:
            raise RealizationNotInjective(f"basis element {i} has no private entry")
    return tuple(out)


@dataclass(frozen=True)
class PowerfulLieAlgebra:
    """Free Z_p-Lie algebra of rank d, truncated mod p^N.

    ``structure[i][j]`` holds the coordinates of [v_i, v_j]; ``realization[i]``
    is an exact integer matrix representing v_i.
    """

    p: int
    N: int
    names: tuple[str, ...]
    structure: tuple[tuple[tuple[int, ...], ...], ...]
    realization: tuple[tuple[tuple[int, ...], ...], ...]
    label: str = ""
    validate: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self) -> None:
        mod = self.p**self.N
        d = len(self.names)
        st = tuple(
            tuple(tuple(int(c) % mod for c in self.structure[i][j]) for j in range(d))
            for i in range(d)
        )
        object.__setattr__(self, "structure", st)
        supports = _find_supports(self.realization)
        scales = []
        units = []
        for m, (r, c) in zip(self.realization, supports):
            s = vp(m[r][c], self.p, 10**6)
            scales.append(s)
            units.append(m[r][c] // self.p**s)
        object.__setattr__(self, "_supports", supports)
        object.__setattr__(self, "_scales", tuple(scales))
        object.__setattr__(self, "_units", tuple(units))
        if self.validate:
            bad = self.defects()
            if bad:
                raise InvalidAlgebra(f"{self.label or 'algebra'}: {bad[0]['check']} fails", bad[0])

    # -- basic data ---------------------------------------------------------

    @property
    def d(self) -> int:
        return len(self.names)

    @property
    def eps(self) -> int:
        return epsilon(self.p)

    @property
    def scales(self) -> tuple[int, ...]:
        return self._scales  # type: ignore[attr-defined]

    @property
    def working_precision(self) -> int:
        """Matrix precision at which coordinates are recovered mod p^N."""
        return self.N + max(self.scales)

    def element(self, coords: Sequence[int]) -> "LieElement":
        if len(coords) != self.d:
            raise ValueError(f"expected {self.d} coordinates")
        return LieElement(self, tuple(int(c) % self.p**self.N for c in coords))

    def basis(self, i: int) -> "LieElement":
        return self.element([int(j == i) for j in range(self.d)])

    def zero(self) -> "LieElement":
        return self.element([0] * self.d)

    def __getitem__(self, name: str) -> "LieElement":
        return self.basis(self.names.index(name))

    # -- bracket and realization -------------------------------------------

    def bracket(self, a: "LieElement", b: "LieElement") -> "LieElement":
        if a.algebra is not self and a.algebra != self:
            raise MixedAlgebra("left operand from another algebra")
        if b.algebra is not self and b.algebra != self:
            raise MixedAlgebra("right operand from another algebra")
        d, mod = self.d, self.p**self.N
        out = [0] * d
        for i, ai in enumerate(a.coords):
            if not ai:
                continue
            for j, bj in enumerate(b.coords):
                if not bj:
                    continue
                c = ai * bj
                for k, s in enumerate(self.structure[i][j]):
                    if s:
                        out[k] += c * s
        return LieElement(self, tuple(x % mod for x in out))

    def realize(self, u: "LieElement", prec: int | None = None) -> np.ndarray:
        prec = self.working_precision if prec is None else prec
        mod = self.p**prec
        n = len(self.realization[0])
        acc = [[0] * n for _ in range(n)]
        for c, m in zip(u.coords, self.realization):
            if c:
                for r in range(n):
                    for s in range(n):
                        acc[r][s] += c * m[r][s]
        return as_int_array(acc, mod)

    def from_matrix(self, x: np.ndarray, prec: int | None = None) -> "LieElement":
        """Coordinates of the Lie element realized by ``x`` (known mod p^prec)."""
        prec = self.working_precision if prec is None else prec
        p = self.p
        if prec - max(self.scales) < self.N:
            raise PrecisionExhausted(
                f"matrix precision {prec} cannot give coordinates mod p^{self.N}"
            )
        coords = []
        for (r, c), s, unit in zip(self._supports, self.scales, self._units):  # type: ignore[attr-defined]
            v = int(x[r][c]) % p**prec
            if v % p**s:
                raise RealizationNotInjective(
                    f"entry ({r},{c}) = {v} not divisible by p^{s}"
                )
            coords.append((v // p**s) * pow(unit, -1, p**self.N))
        u = self.element(coords)
        check = min(prec, self.N + min(self.scales))
        diff = (np.asarray(x, dtype=object) - self.realize(u, prec).astype(object)) % p**check
        if any(int(v) for v in diff.ravel()):
            raise RealizationNotInjective("matrix is not in the image of the realization")
        return u

    # -- validation -----------------------------------------------------------

    def defects(self) -> list[dict]:
        """Violations of antisymmetry, Jacobi, powerfulness, or the realization."""
        out: list[dict] = []
        d, p, N = self.d, self.p, self.N
        mod = p**N
        basis = [self.basis(i) for i in range(d)]
        for i in range(d):
            for j in range(d):
                s = [(x + y) % mod for x, y in zip(self.structure[i][j], self.structure[j][i])]
                if any(s):
                    out.append({"check": "antisymmetry", "indices": [i, j], "value": s})
        for i in range(d):
            for j in range(i + 1, d):
                for k in range(j + 1, d):
                    a, b, c = basis[i], basis[j], basis[k]
                    jac = (
                        a.bracket(b.bracket(c))
                        + b.bracket(c.bracket(a))
                        + c.bracket(a.bracket(b))
                    )
                    if any(jac.coords):
                        out.append({"check": "jacobi", "indices": [i, j, k], "value": list(jac.coords)})
        for i in range(d):
            for j in range(d):
                for k, c in enumerate(self.structure[i][j]):
                    if vp(c, p, N) < self.eps:
                        out.append({"check": "powerful", "indices": [i, j, k], "value": c})
        check = p ** (N + min(self.scales))
        for i in range(d):
            for j in range(i + 1, d):
                ri, rj = self.realization[i], self.realization[j]
                comm = np.asarray(_exact_matmul(ri, rj), dtype=object) - np.asarray(
                    _exact_matmul(rj, ri), dtype=object
                )
                img = np.asarray(self.realize(basis[i].bracket(basis[j]), N + min(self.scales)), dtype=object)
                diff = (comm - img) % check
                if any(int(v) for v in diff.ravel()):
                    out.append({"check": "homomorphism", "indices": [i, j], "value": diff.tolist()})
        return out

    def with_structure(self, structure) -> "PowerfulLieAlgebra":
        """Copy with replaced structure constants and validation disabled."""
        return replace(self, structure=structure, validate=False)

    # -- depths ---------------------------------------------------------------

    def depth(self, u: "LieElement") -> int:
        """Largest k <= N with [u, L] in p^k L."""
        return min(u.bracket(self.basis(i)).valuation() for i in range(self.d))

    def depth_on(self, u: "LieElement", spec: "SubalgebraSpec") -> int:
        """Largest k <= N with [u, L1] in p^k L."""
        return min(
            min(self.N, s + u.bracket(self.basis(i)).valuation())
            for i, s in enumerate(spec.scales)
        )

    # -- group side -----------------------------------------------------------

    def exp_matrix(self, u: "LieElement", prec: int | None = None) -> np.ndarray:
        prec = self.working_precision if prec is None else prec
        x = self.realize(u, prec)
        v = min_valuation(x, self.p, prec)
        if v < self.eps:
            raise PrecisionExhausted("realization entries not divisible by p^eps")
        return exp_series(x, self.p, prec, v)

    def log_matrix(self, m: np.ndarray, prec: int | None = None) -> "LieElement":
        prec = self.working_precision if prec is None else prec
        n = m.shape[-1]
        x = (as_int_array(m, self.p**prec) - np.eye(n, dtype=np.int64)) % self.p**prec
        v = min_valuation(x, self.p, prec)
        if v < self.eps:
            raise RealizationNotInjective("matrix is not congruent to 1 mod p^eps")
        return self.from_matrix(log_series(m, self.p, prec, v), prec)

    def bch(self, u: "LieElement", v: "LieElement") -> "LieElement":
        """Phi(u, v) with exp(u) exp(v) = exp(Phi(u, v))."""
        if u.algebra != self or v.algebra != self:
            raise MixedAlgebra("bch operands from another algebra")
        w = self.working_precision
        prod = matmul_mod(self.exp_matrix(u), self.exp_matrix(v), self.p**w)
        return self.log_matrix(prod)


@dataclass(frozen=True, eq=False)
class LieElement:
    algebra: PowerfulLieAlgebra
    coords: tuple[int, ...]

    def _same(self, other: "LieElement") -> None:
        if other.algebra is not self.algebra and other.algebra != self.algebra:
            raise MixedAlgebra("elements of different algebras")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LieElement):
            return NotImplemented
        return self.coords == other.coords and (
            self.algebra is other.algebra or self.algebra == other.algebra
        )

    def __hash__(self) -> int:
        return hash(self.coords)

    def __add__(self, other: "LieElement") -> "LieElement":
        self._same(other)
        return self.algebra.element([a + b for a, b in zip(self.coords, other.coords)])

    def __sub__(self, other: "LieElement") -> "LieElement":
        self._same(other)
        return self.algebra.element([a - b for a, b in zip(self.coords, other.coords)])

    def __neg__(self) -> "LieElement":
        return self.algebra.element([-a for a in self.coords])

    def __mul__(self, c: int) -> "LieElement":
        if isinstance(c, TruncatedPadic):
            c = c.value
        return self.algebra.element([a * int(c) for a in self.coords])

    __rmul__ = __mul__

    def bracket(self, other: "LieElement") -> "LieElement":
        return self.algebra.bracket(self, other)

    def valuation(self) -> int:
        a = self.algebra
        return min(vp(c, a.p, a.N) for c in self.coords)

    def coordinate(self, i: int) -> TruncatedPadic:
        return TruncatedPadic(self.algebra.p, self.algebra.N, self.coords[i])

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __repr__(self) -> str:
        terms = [f"{c}*{n}" for c, n in zip(self.coords, self.algebra.names) if c]
        return " + ".join(terms) or "0"


def bracket(a: LieElement, b: LieElement) -> LieElement:
    return a.algebra.bracket(a, b)


def bch(u: LieElement, v: LieElement) -> LieElement:
    return u.algebra.bch(u, v)


@dataclass(frozen=True)
class SubalgebraSpec:
    """L1 spanned by p^{s_i} v_i with every s_i in {0, 1}.

    The basis vectors with s_i = 1 are the ones whose classes span L/L1;
    their count is ``t``.
    """

    scales: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "scales", tuple(int(s) for s in self.scales))
        if any(s not in (0, 1) for s in self.scales):
            raise ValueError("pL <= L1 <= L forces every scale into {0, 1}")

    @property
    def t(self) -> int:
        return sum(self.scales)

    @property
    def frobenius_indices(self) -> tuple[int, ...]:
        return tuple(i for i, s in enumerate(self.scales) if s == 1)

    def contains(self, u: LieElement) -> bool:
        p = u.algebra.p
        return all(c % p**s == 0 for c, s in zip(u.coords, self.scales))

    def defects(self, algebra: PowerfulLieAlgebra) -> list[dict]:
        out = []
        p = algebra.p
        for i, si in enumerate(self.scales):
            for j, sj in enumerate(self.scales):
                b = algebra.basis(i).bracket(algebra.basis(j)) * p ** (si + sj)
                if not self.contains(b):
                    out.append({"check": "subalgebra", "indices": [i, j], "value": list(b.coords)})
        return out


@dataclass(frozen=True)
class GroupElement:
    """exp(u) in the uniform group attached to ``u.algebra``."""

    log: LieElement

    @property
    def algebra(self) -> PowerfulLieAlgebra:
        return self.log.algebra

    @classmethod
    def exp(cls, u: LieElement) -> "GroupElement":
        return cls(u)

    @classmethod
    def identity(cls, algebra: PowerfulLieAlgebra) -> "GroupElement":
        return cls(algebra.zero())

    def matrix(self, prec: int | None = None) -> np.ndarray:
        return self.algebra.exp_matrix(self.log, prec)

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return group_mul(self, other)

    def inverse(self) -> "GroupElement":
        return GroupElement(-self.log)

    def __pow__(self, m: int) -> "GroupElement":
        return GroupElement(self.log * m)

    def in_power_subgroup(self, k: int) -> bool:
        """Membership in G^{p^k} = exp(p^k L)."""
        if k > self.algebra.N:
            raise PrecisionExhausted(f"cannot decide G^(p^{k}) at precision {self.algebra.N}")
        return self.log.valuation() >= k


def group_mul(g: GroupElement, h: GroupElement) -> GroupElement:
    return GroupElement(g.algebra.bch(g.log, h.log))


def group_product(*gs: GroupElement) -> GroupElement:
    """Product computed by multiplying realizations, with one final log."""
    alg = gs[0].algebra
    mod = alg.p**alg.working_precision
    acc = gs[0].matrix()
    for g in gs[1:]:
        if g.algebra != alg:
            raise MixedAlgebra("group elements from different algebras")
        acc = matmul_mod(acc, g.matrix(), mod)
    return GroupElement(alg.log_matrix(acc))


def group_commutator(g: GroupElement, h: GroupElement) -> GroupElement:
    """(g, h) = g^-1 h^-1 g h."""
    return group_product(g.inverse(), h.inverse(), g, h)


def check_bch_congruence(v: LieElement, w: LieElement, k: int) -> bool:
    """Phi(-v + p^k w, v) = p^k w modulo p^{k+1} L."""
    alg = v.algebra
    if k < 0:
        raise ValueError("k must be non-negative")
    if k + 1 > alg.N:
        raise PrecisionExhausted(f"depth {k + 1} exceeds precision {alg.N}")
    pkw = w * alg.p**k
    phi = alg.bch(-v + pkw, v)
    return (phi - pkw).valuation() >= k + 1


def check_commutator_congruence(u: LieElement, v: LieElement, k: int) -> bool:
    """(exp u, exp v) = exp[u, v] modulo G^{p^{k+1}}, given [u, L] in p^k L."""
    alg = u.algebra
    if k < alg.eps:
        raise HypothesisFailed(f"need k >= {alg.eps}, got {k}")
    if k + 1 > alg.N:
        raise PrecisionExhausted(f"depth {k + 1} exceeds precision {alg.N}")
    if alg.depth(u) < k:
        raise HypothesisFailed(f"[u, L] is not inside p^{k} L")
    a, b = GroupElement(u), GroupElement(v)
    c = group_product(a.inverse(), b.inverse(), a, b, GroupElement(-u.bracket(v)))
    return c.in_power_subgroup(k + 1)


# ---------------------------------------------------------------------------
# constructors

def algebra_from_realization(
    p: int, N: int, names: Sequence[str], mats, label: str = "", validate: bool = True
) -> PowerfulLieAlgebra:
    """Structure constants read off exactly from the realization's commutators."""
    mats = tuple(tuple(tuple(int(v) for v in r) for r in m) for m in mats)
    d = len(mats)
    stub = PowerfulLieAlgebra(
        p, N, tuple(names), tuple(tuple((0,) * d for _ in range(d)) for _ in range(d)),
        mats, label, validate=False,
    )
    supports, scales, units = stub._supports, stub.scales, stub._units  # type: ignore[attr-defined]
    structure = []
    for i in range(d):
        row = []
        for j in range(d):
            ab = _exact_matmul(mats[i], mats[j])
            ba = _exact_matmul(mats[j], mats[i])
            coords = []
            for (r, c), s, unit in zip(supports, scales, units):
                v = ab[r][c] - ba[r][c]
                if v % (unit * p**s):
                    raise InvalidAlgebra("realization is not closed under brackets", (i, j))
                coords.append(v // (unit * p**s))
            row.append(tuple(coords))
        structure.append(tuple(row))
    return PowerfulLieAlgebra(p, N, tuple(names), tuple(structure), mats, label, validate)


def sl2_algebra(p: int, scales: tuple[int, int, int], N: int, label: str = "") -> PowerfulLieAlgebra:
    se, sf, sh = scales
    e = ((0, p**se), (0, 0))
    f = ((0, 0), (p**sf, 0))
    h = ((p**sh, 0), (0, -(p**sh)))
    return algebra_from_realization(p, N, ("e", "f", "h"), (e, f, h), label)


def abelian_algebra(p: int, d: int, N: int) -> PowerfulLieAlgebra:
    """Z_p^d realized by diagonal matrices p^eps * diag(x)."""
    s = p ** epsilon(p)
    mats = [tuple(tuple(s if (r == c == i) else 0 for c in range(d)) for r in range(d)) for i in range(d)]
    return algebra_from_realization(p, N, tuple(f"x{i + 1}" for i in range(d)), mats, f"Z_{p}^{d}")


def build_chevalley_sl2(p: int, l: int, N: int) -> list[tuple[PowerfulLieAlgebra, SubalgebraSpec]]:
    """sl2(p^l Z_p) with its Frobenius subalgebras.

    For odd p this is the single pair (L, pL).  For p = 2 it is the two-step
    chain L0 > L1 > L2 = pL0 with L1 = pe + pf + h Z_2, returned as the pairs
    (L0, L1) and (L1, L2); L1 carries its own basis (pe, pf, h), again
    called (e, f, h).
    """
    if p < 2:
        raise UnsupportedParameters(f"p = {p} is not a prime")
    if p == 2:
        if l < 2:
            raise UnsupportedParameters("p = 2 requires l >= 2")
        top = sl2_algebra(2, (l, l, l), N, f"sl2(2^{l}Z_2)")
        mid = sl2_algebra(2, (l + 1, l + 1, l), N, f"L1 of sl2(2^{l}Z_2)")
        pairs = [(top, SubalgebraSpec((1, 1, 0))), (mid, SubalgebraSpec((0, 0, 1)))]
    else:
        if l < 1:
            raise UnsupportedParameters("odd p requires l >= 1")
        alg = sl2_algebra(p, (l, l, l), N, f"sl2({p}^{l}Z_{p})")
        pairs = [(alg, SubalgebraSpec((1, 1, 1)))]
    for alg, spec in pairs:
        bad = spec.defects(alg)
        if bad:
            raise InvalidAlgebra("subalgebra not closed", bad[0])
    return pairs


def sl2_single_step(p: int, l: int, N: int) -> tuple[PowerfulLieAlgebra, SubalgebraSpec]:
    """The pair (L, pL) for any p; at p = 2 this is the pair lacking derivations."""
    if p == 2 and l < 2:
        raise UnsupportedParameters("p = 2 requires l >= 2")
    return sl2_algebra(p, (l, l, l), N, f"sl2({p}^{l}Z_{p})"), SubalgebraSpec((1, 1, 1))
