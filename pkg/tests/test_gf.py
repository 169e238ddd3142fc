from __future__ import annotations

import itertools

import numpy as np
from hypothesis import given, settings, strategies as st

from iwasawa import gf


def span_set(rows, p, width=None):
    rows = np.asarray(rows, dtype=np.int64)
    width = rows.shape[-1] if width is None else width
    out = {tuple([0] * width)}
    for c in itertools.product(range(p), repeat=rows.shape[0]):
        out.add(tuple((np.array(c, dtype=np.int64) @ rows) % p))
    return out


matrices = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 4).flatmap(
        lambda c: st.lists(st.lists(st.integers(0, 2), min_size=c, max_size=c), min_size=r, max_size=r)
    )
)


@settings(max_examples=80, deadline=None)
@given(matrices)
def test_rref_preserves_row_space(a):
    a = np.array(a, dtype=np.int64)
    r, piv = gf.rref(a, 3)
    assert span_set(a, 3) == span_set(r, 3, a.shape[1])
    assert len(piv) == gf.rank(a, 3) == r.shape[0]


@settings(max_examples=80, deadline=None)
@given(matrices)
def test_nullspace(a):
    a = np.array(a, dtype=np.int64)
    k = gf.nullspace(a, 3)
    assert k.shape[0] == a.shape[1] - gf.rank(a, 3)
    if k.shape[0]:
        assert not ((a @ k.T) % 3).any()


@settings(max_examples=60, deadline=None)
@given(matrices, matrices)
def test_intersect_and_sum_bruteforce(a, b):
    a = np.array(a, dtype=np.int64)
    b = np.array(b, dtype=np.int64)
    if a.shape[1] != b.shape[1]:
        return
    p = 2
    a %= p
    b %= p
    inter = gf.intersect(a, b, p)
    expect = span_set(a, p) & span_set(b, p)
    got = span_set(inter, p, a.shape[1])
    assert got == expect
    total = gf.sum_spaces(a, b, p)
    assert span_set(total, p, a.shape[1]) == {
        tuple((np.array(x) + np.array(y)) % p) for x in span_set(a, p) for y in span_set(b, p)
    }


def test_in_span():
    basis, piv = gf.rref(np.array([[1, 1, 0], [0, 1, 1]]), 2)
    assert gf.in_span(basis, piv, np.array([1, 0, 1]), 2)
    assert not gf.in_span(basis, piv, np.array([1, 0, 0]), 2)
