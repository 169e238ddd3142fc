from __future__ import annotations

from fractions import Fraction
from math import factorial

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from iwasawa.errors import EntryNotSmallEnough, NotCongruentToIdentity
from iwasawa.padic import (
    PadicMatrix,
    TruncatedPadic,
    epsilon,
    mat_exp,
    mat_log,
    valuation,
    vp_factorial,
)


def frac_mod(x: Fraction, mod: int) -> int:
    return x.numerator * pow(x.denominator, -1, mod) % mod


def test_valuation_examples():
    assert valuation(TruncatedPadic(3, 5, 9)) == 2
    assert valuation(TruncatedPadic(3, 5, 0)) == 5
    assert valuation(TruncatedPadic(2, 4, 6)) == 1


def test_epsilon():
    assert epsilon(2) == 2 and epsilon(3) == 1 and epsilon(7) == 1


@pytest.mark.parametrize("p", [2, 3, 5])
def test_vp_factorial_legendre(p):
    for k in range(60):
        f = factorial(k)
        v = 0
        while f % p == 0:
            f //= p
            v += 1
        assert vp_factorial(k, p) == v


def test_exp_examples():
    assert mat_exp(PadicMatrix.zero(3, 3, 2)) == PadicMatrix.identity(3, 3, 2)
    m = mat_exp(PadicMatrix(3, 3, ((0, 3), (0, 0))))
    assert m.rows == ((1, 3), (0, 1))
    got = mat_exp(PadicMatrix(3, 3, ((3, 0), (0, 0)))).rows[0][0]
    # exact rational series until the terms vanish mod 27
    oracle = sum(Fraction(3**k, factorial(k)) for k in range(40))
    assert got == frac_mod(oracle, 27) == 13


def test_log_examples():
    assert mat_log(PadicMatrix.identity(3, 3, 2)) == PadicMatrix.zero(3, 3, 2)
    assert mat_log(PadicMatrix(3, 3, ((1, 3), (0, 1)))).rows == ((0, 3), (0, 0))


def test_domain_errors():
    with pytest.raises(EntryNotSmallEnough):
        mat_exp(PadicMatrix(3, 3, ((1, 0), (0, 0))))
    with pytest.raises(EntryNotSmallEnough):
        mat_exp(PadicMatrix(2, 5, ((2, 0), (0, 0))))
    with pytest.raises(NotCongruentToIdentity):
        mat_log(PadicMatrix(3, 3, ((2, 0), (0, 1))))


@pytest.mark.parametrize("p", [2, 3])
def test_exp_log_roundtrip_rank_one(p):
    # exhaustive on the diagonal slice x = p^eps * a mod p^N
    N = 4
    e = epsilon(p)
    for a in range(p ** (N - e)):
        m = PadicMatrix(p, N, ((p**e * a, 0), (0, 0)))
        assert mat_log(mat_exp(m)) == m


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 3**6), st.integers(0, 3**6), st.integers(0, 3**6))
def test_truncated_ring_laws(a, b, c):
    x, y, z = (TruncatedPadic(3, 6, v) for v in (a, b, c))
    assert (x + y) * z == x * z + y * z
    assert x * y == y * x
    assert (x - y) + y == x
    if x.is_unit():
        assert x * x.inverse() == TruncatedPadic(3, 6, 1)


def test_matrix_mul_associative():
    rng = np.random.default_rng(0)
    for _ in range(20):
        a, b, c = (PadicMatrix.from_array(5, 4, rng.integers(0, 625, (3, 3))) for _ in range(3))
        assert (a @ b) @ c == a @ (b @ c)
        assert a @ PadicMatrix.identity(5, 4, 3) == a
