"""Fixed-precision p-adic integers and truncated matrix exp/log.

Scalars live in Z/p^N.  The exponential and logarithm series have
rational coefficients; each term is computed at a raised working
precision and then divided exactly by the p-part of its denominator, so
no non-integral term is ever reduced silently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    EntryNotSmallEnough,
    NotAUnit,
    NotCongruentToIdentity,
    PrecisionExhausted,
    PrecisionMismatch,
)


def epsilon(p: int) -> int:
    """2 for p = 2, else 1: the divisibility that makes exp converge."""
    return 2 if p == 2 else 1


def vp(x: int, p: int, cap: int) -> int:
    """p-adic valuation of the integer ``x``, clamped at ``cap``."""
    if x == 0:
        return cap
    v = 0
    while v < cap and x % p == 0:
        x //= p
        v += 1
    return v


def vp_factorial(k: int, p: int) -> int:
    v, q = 0, p
    while q <= k:
        v += k // q
        q *= p
    return v


def _unit_part(x: int, p: int) -> int:
    while x % p == 0:
        x //= p
    return x


@dataclass(frozen=True)
class TruncatedPadic:
    """An element of Z/p^N, stored as its residue in [0, p^N)."""

    p: int
    N: int
    value: int = 0

    def __post_init__(self) -> None:
        if self.p < 2 or self.N < 1:
            raise ValueError(f"bad prime/precision ({self.p}, {self.N})")
        object.__setattr__(self, "value", int(self.value) % self.p**self.N)

    @property
    def modulus(self) -> int:
        return self.p**self.N

    def _coerce(self, other: object) -> "TruncatedPadic":
        if isinstance(other, TruncatedPadic):
            if (other.p, other.N) != (self.p, self.N):
                raise PrecisionMismatch(
                    f"Z/{self.p}^{self.N} vs Z/{other.p}^{other.N}"
                )
            return other
        if isinstance(other, (int, np.integer)):
            return TruncatedPadic(self.p, self.N, int(other))
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return TruncatedPadic(self.p, self.N, self.value + o.value)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return TruncatedPadic(self.p, self.N, self.value - o.value)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return TruncatedPadic(self.p, self.N, o.value - self.value)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return TruncatedPadic(self.p, self.N, self.value * o.value)

    __rmul__ = __mul__

    def __neg__(self) -> "TruncatedPadic":
        return TruncatedPadic(self.p, self.N, -self.value)

    def __pow__(self, e: int) -> "TruncatedPadic":
        if e < 0:
            return self.inverse() ** (-e)
        return TruncatedPadic(self.p, self.N, pow(self.value, e, self.modulus))

    def __int__(self) -> int:
        return self.value

    def __eq__(self, other: object) -> bool:
        if isinstance(other, TruncatedPadic):
            return (self.p, self.N, self.value) == (other.p, other.N, other.value)
        if isinstance(other, (int, np.integer)):
            return self.value == int(other) % self.modulus
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.p, self.N, self.value))

    def valuation(self) -> int:
        return vp(self.value, self.p, self.N)

    def is_unit(self) -> bool:
        return self.value % self.p != 0

    def inverse(self) -> "TruncatedPadic":
        if not self.is_unit():
            raise NotAUnit(f"{self.value} is not a unit mod {self.p}^{self.N}")
        return TruncatedPadic(self.p, self.N, pow(self.value, -1, self.modulus))

    def __repr__(self) -> str:
        return f"{self.value} (mod {self.p}^{self.N})"


def valuation(x: TruncatedPadic) -> int:
    return x.valuation()


# ---------------------------------------------------------------------------
# integer matrix kernels shared by the scalar and batched entry points

def _dtype_for(modulus: int, n: int):
    return np.int64 if n * modulus * modulus < 2**62 else object


def as_int_array(mats, modulus: int) -> np.ndarray:
    """Integer array of residues mod ``modulus`` with an overflow-safe dtype."""
    if isinstance(mats, np.ndarray) and mats.dtype.kind in "iu":
        if _dtype_for(modulus, mats.shape[-1]) is np.int64:
            return mats.astype(np.int64) % modulus
    arr = np.asarray(mats, dtype=object)
    n = arr.shape[-1]
    out = arr % modulus
    dtype = _dtype_for(modulus, n)
    return out.astype(dtype) if dtype is not object else out


def matmul_mod(a: np.ndarray, b: np.ndarray, modulus: int) -> np.ndarray:
    n = a.shape[-1]
    dtype = _dtype_for(modulus, n)
    if dtype is object or a.dtype == object or b.dtype == object:
        a = a.astype(object)
        b = b.astype(object)
    return np.matmul(a, b) % modulus


def min_valuation(x: np.ndarray, p: int, cap: int) -> int:
    """Minimum valuation over all entries of an integer array."""
    best = cap
    for v in np.asarray(x).ravel():
        v = int(v)
        if v:
            best = min(best, vp(v, p, cap))
            if best == 0:
                break
    return best


def _exp_terms(p: int, prec: int, vmin: int) -> int:
    # first k from which every term is provably 0 mod p^prec;
    # v(k!) <= (k - 1)/(p - 1) gives a monotone lower bound
    k = 1
    while k * vmin - (k - 1) / (p - 1) < prec:
        k += 1
    return k


def _log_terms(p: int, prec: int, vmin: int) -> int:
    k = 1
    while k * vmin - int(math.log(k, p) + 1e-9) < prec:
        k += 1
    return k


def exp_series(x: np.ndarray, p: int, prec: int, vmin: int) -> np.ndarray:
    """sum_k x^k / k! mod p^prec for integer matrices with entries in p^vmin Z.

    ``x`` has shape (..., n, n).  Requires vmin >= 1.
    """
    if vmin < 1:
        raise EntryNotSmallEnough("exp needs entries divisible by p")
    n = x.shape[-1]
    stop = _exp_terms(p, prec, vmin)
    extra = vp_factorial(stop - 1, p)
    work = p ** (prec + extra)
    mod = p**prec
    x = as_int_array(x, work)
    eye = np.broadcast_to(np.eye(n, dtype=x.dtype), x.shape)
    total = np.array(eye % mod, dtype=x.dtype)
    power = np.array(eye, dtype=x.dtype)
    for k in range(1, stop):
        power = matmul_mod(power, x, work)
        v = vp_factorial(k, p)
        if v > k * vmin:
            raise PrecisionExhausted(f"term {k} of exp is not integral")
        unit_inv = pow(_unit_part(math.factorial(k), p), -1, mod)
        term = ((power // p**v) % mod) * unit_inv % mod
        total = (total + term) % mod
    return as_int_array(total, mod)


def log_series(m: np.ndarray, p: int, prec: int, vmin: int) -> np.ndarray:
    """sum_k (-1)^(k+1) (m - 1)^k / k mod p^prec, with m - 1 in p^vmin."""
    if vmin < 1:
        raise NotCongruentToIdentity("log needs matrices congruent to 1 mod p")
    n = m.shape[-1]
    stop = _log_terms(p, prec, vmin)
    extra = max(vp(k, p, prec + 64) for k in range(1, stop)) if stop > 1 else 0
    work = p ** (prec + extra)
    mod = p**prec
    m = as_int_array(m, work)
    eye = np.eye(n, dtype=m.dtype)
    x = (m - eye) % work
    total = np.zeros_like(x) % mod
    power = np.array(np.broadcast_to(eye, x.shape), dtype=x.dtype)
    for k in range(1, stop):
        power = matmul_mod(power, x, work)
        v = vp(k, p, prec + 64)
        unit_inv = pow(_unit_part(k, p), -1, mod)
        term = ((power // p**v) % mod) * unit_inv % mod
        total = (total + term) % mod if k % 2 else (total - term) % mod
    return as_int_array(total, mod)


# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PadicMatrix:
    """Square matrix over Z/p^N; entries stored as residues."""

    p: int
    N: int
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        mod = self.p**self.N
        rows = tuple(tuple(int(v) % mod for v in r) for r in self.rows)
        if any(len(r) != len(rows) for r in rows):
            raise ValueError("PadicMatrix must be square")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def from_array(cls, p: int, N: int, arr) -> "PadicMatrix":
        return cls(p, N, tuple(tuple(int(v) for v in r) for r in np.asarray(arr)))

    @classmethod
    def identity(cls, p: int, N: int, n: int) -> "PadicMatrix":
        return cls(p, N, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def zero(cls, p: int, N: int, n: int) -> "PadicMatrix":
        return cls(p, N, tuple((0,) * n for _ in range(n)))

    @property
    def n(self) -> int:
        return len(self.rows)

    def to_array(self) -> np.ndarray:
        return as_int_array(self.rows, self.p**self.N)

    def entry(self, i: int, j: int) -> TruncatedPadic:
        return TruncatedPadic(self.p, self.N, self.rows[i][j])

    def _check(self, other: "PadicMatrix") -> None:
        if (self.p, self.N, self.n) != (other.p, other.N, other.n):
            raise PrecisionMismatch("matrices over different rings or sizes")

    def __matmul__(self, other: "PadicMatrix") -> "PadicMatrix":
        self._check(other)
        mod = self.p**self.N
        return PadicMatrix.from_array(
            self.p, self.N, matmul_mod(self.to_array(), other.to_array(), mod)
        )

    def __add__(self, other: "PadicMatrix") -> "PadicMatrix":
        self._check(other)
        return PadicMatrix.from_array(self.p, self.N, self.to_array() + other.to_array())

    def __sub__(self, other: "PadicMatrix") -> "PadicMatrix":
        self._check(other)
        return PadicMatrix.from_array(self.p, self.N, self.to_array() - other.to_array())

    def __neg__(self) -> "PadicMatrix":
        return PadicMatrix.from_array(self.p, self.N, -self.to_array())

    def scale(self, c: int) -> "PadicMatrix":
        return PadicMatrix.from_array(self.p, self.N, self.to_array() * int(c))

    def min_valuation(self) -> int:
        return min_valuation(self.to_array(), self.p, self.N)

    def is_identity(self) -> bool:
        return self == PadicMatrix.identity(self.p, self.N, self.n)


def mat_exp(m: PadicMatrix, min_entry_valuation: int | None = None) -> PadicMatrix:
    """Exponential of ``m``; every entry must have valuation >= epsilon(p)."""
    need = epsilon(m.p) if min_entry_valuation is None else min_entry_valuation
    v = m.min_valuation()
    if v < need:
        raise EntryNotSmallEnough(f"entry valuation {v} < {need}")
    out = exp_series(m.to_array(), m.p, m.N, max(v, 1))
    return PadicMatrix.from_array(m.p, m.N, out)


def mat_log(m: PadicMatrix) -> PadicMatrix:
    eye = PadicMatrix.identity(m.p, m.N, m.n)
    v = (m - eye).min_valuation()
    if v < epsilon(m.p):
        raise NotCongruentToIdentity(f"m - 1 has an entry of valuation {v}")
    out = log_series(m.to_array(), m.p, m.N, v)
    return PadicMatrix.from_array(m.p, m.N, out)


def padic_vector(p: int, N: int, values: Iterable[int]) -> tuple[TruncatedPadic, ...]:
    return tuple(TruncatedPadic(p, N, v) for v in values)


def residues(xs: Sequence[TruncatedPadic]) -> tuple[int, ...]:
    return tuple(x.value for x in xs)
