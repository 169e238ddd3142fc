from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from iwasawa.errors import ZeroIdeal
from iwasawa.poly import (
    DerivationOp,
    GradedPoly,
    TruncatedIdeal,
    apply_derivation,
    diff,
    divides,
    divmod_poly,
    frobenius_decompose,
    in_b1,
    multivariate_gcd,
    partial_j,
    pseudo_null_test,
    random_poly,
    reflexive_closure,
)

Y = ("y1", "y2", "y3")


def P(text, p=3, names=Y):
    return GradedPoly.parse(text, p, names)


def test_divides_examples():
    ok, q = divides(P("y1"), P("y1*y2"))
    assert ok and q == P("y2")
    assert divides(P("1"), P("y1^2 + y3"))[0]
    assert not divides(P("y1 + y2"), P("y1^2 + y2^2"))[0]


def test_divides_remainder_oracle():
    # y1 = -y2 substituted into y1^2 + y2^2 leaves 2*y2^2
    q, r = divmod_poly(P("y1^2 + y2^2"), P("y1 + y2"))
    assert q * P("y1 + y2") + r == P("y1^2 + y2^2")
    assert not r.is_zero()


def test_gcd_and_closure_examples():
    assert reflexive_closure([P("y1^2*y2"), P("y1*y2^2")]) == P("y1*y2")
    assert reflexive_closure([P("y1*y3 + y2^2")]) == P("y1*y3 + y2^2")
    assert reflexive_closure([P("y1"), P("y2")]) == P("1")
    with pytest.raises(ZeroIdeal):
        reflexive_closure([P("0")])


def test_pseudo_null_examples():
    assert pseudo_null_test([P("y1"), P("y2")])
    assert not pseudo_null_test([P("y1")])
    assert not pseudo_null_test([P("y1^2"), P("y1*y2")])


def test_frobenius_examples():
    p = 3
    g = P("y1^3 + y2^3*y3^3")
    s = frobenius_decompose(P("y1^3") * g, 3)
    assert list(s.components) == [(0, 0, 0)]
    s = frobenius_decompose(P("y1"), 3)
    assert s.components == {(1, 0, 0): P("1")}
    s = frobenius_decompose(P("y1^5*y2"), 2)
    assert s.components == {(2, 1): P("y1^3")}
    assert s.reassemble() == P("y1^5*y2")
    assert p == 3


def test_apply_derivation_examples():
    zero = DerivationOp.zero(3, 3)
    assert apply_derivation(zero, P("y1^2*y2")).is_zero()
    b = P("y2^2 + y3")
    D = DerivationOp.from_terms(3, 3, {0: b})
    assert apply_derivation(D, P("y1")) == b


polys = st.integers(0, 10**6).map(lambda s: random_poly(random.Random(s), 3, 3, 3, 0.3))


@settings(max_examples=40, deadline=None)
@given(polys, polys)
def test_leibniz(f, g):
    D = DerivationOp.from_terms(3, 3, {0: P("y2^3"), 2: P("2*y1*y3")})
    assert D(f * g) == D(f) * g + f * D(g)


@settings(max_examples=40, deadline=None)
@given(polys, polys, polys)
def test_gcd_properties(f, g, h):
    if h.is_zero() or (f.is_zero() and g.is_zero()):
        return
    c = multivariate_gcd(f * h, g * h)
    assert divides(h, c)[0]
    assert divides(c, f * h)[0] and divides(c, g * h)[0]


@settings(max_examples=40, deadline=None)
@given(polys, polys)
def test_exact_division(f, g):
    if g.is_zero():
        return
    ok, q = divides(g, f * g)
    assert ok and q == f


@pytest.mark.parametrize("t", [1, 2, 3])
def test_partial_kernel_is_b1(t):
    for text in ("y1^3*y2", "y1^2", "y1^3*y2^6*y3", "y2^4 + y3"):
        f = P(text)
        killed = all(partial_j(f, j, t).is_zero() for j in range(t))
        assert killed == in_b1(f, t)


def test_partial_agrees_with_ordinary_diff_on_low_exponents():
    f = P("y1^2*y2 + 2*y1*y3^2")
    assert partial_j(f, 0, 3) == diff(f, 0)


def test_control_examples():
    # (y1^3) is generated by a B_1 element; (y1) is not D-stable
    a = TruncatedIdeal([P("y1^3")], 8, 3)
    assert a.d_stable_test() and a.control_test()
    b = TruncatedIdeal([P("y1")], 5, 3)
    assert not b.d_stable_test() and not b.control_test()
    assert b.contains(P("y1*y2^2"))
    assert not b.contains(P("y2"))
