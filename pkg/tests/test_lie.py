from __future__ import annotations

import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from iwasawa.errors import (
    HypothesisFailed,
    InvalidAlgebra,
    PrecisionExhausted,
    UnsupportedParameters,
)
from iwasawa.lie import (
    GroupElement,
    SubalgebraSpec,
    abelian_algebra,
    build_chevalley_sl2,
    check_bch_congruence,
    check_commutator_congruence,
    group_commutator,
    group_product,
    sl2_algebra,
    sl2_single_step,
)
from iwasawa.suites import inject_jacobi_fault


def coords(alg, x, y):
    return alg.bracket(alg[x], alg[y]).coords


def test_sl2_relations_p3():
    alg, spec = build_chevalley_sl2(3, 1, 8)[0]
    mod = 3**8
    assert coords(alg, "h", "e") == (6, 0, 0)
    assert coords(alg, "h", "f") == (0, (-6) % mod, 0)
    assert coords(alg, "e", "f") == (0, 0, 3)
    assert spec.t == 3


def test_p2_chain_relations():
    (top, s0), (mid, s1) = build_chevalley_sl2(2, 2, 10)
    # [pe, pf] = p^(l+2) h in the basis (pe, pf, h) of L1
    assert coords(mid, "e", "f") == (0, 0, 16)
    # matrix oracle: commutator of the realizations
    pe = np.array(mid.realization[0], dtype=object)
    pf = np.array(mid.realization[1], dtype=object)
    h = np.array(mid.realization[2], dtype=object)
    assert ((pe @ pf - pf @ pe) == 16 * h).all()
    assert (s0.t, s1.t) == (2, 1)
    assert not top.defects() and not mid.defects()


def test_parameter_errors():
    with pytest.raises(UnsupportedParameters):
        build_chevalley_sl2(2, 1, 8)
    with pytest.raises(UnsupportedParameters):
        sl2_single_step(2, 1, 8)


def test_fault_injection_breaks_jacobi_only():
    alg = build_chevalley_sl2(3, 1, 8)[0][0]
    bad = inject_jacobi_fault(alg)
    checks = {d["check"] for d in bad.defects()}
    assert "jacobi" in checks and "antisymmetry" not in checks and "powerful" not in checks
    with pytest.raises(InvalidAlgebra):
        type(alg)(bad.p, bad.N, bad.names, bad.structure, bad.realization)


@pytest.mark.parametrize("p,l", [(2, 2), (3, 1), (5, 1)])
def test_bch_matches_matrix_product(p, l):
    alg = sl2_algebra(p, (l, l, l), 6)
    rng = random.Random(p)
    mod = p ** (alg.N + l)
    for _ in range(20):
        u = alg.element([rng.randrange(p**6) for _ in range(3)])
        v = alg.element([rng.randrange(p**6) for _ in range(3)])
        w = alg.bch(u, v)
        lhs = np.array(alg.exp_matrix(w), dtype=object) % mod
        rhs = (np.array(alg.exp_matrix(u), dtype=object) @ np.array(alg.exp_matrix(v), dtype=object)) % mod
        assert (lhs == rhs).all()


def test_bch_trivial_and_sublattice():
    alg = sl2_algebra(3, (1, 1, 1), 8)
    e = alg["e"]
    assert check_bch_congruence(e * 5, alg.zero(), 2)
    # rank-one sublattice Z e, exhaustive mod p^3
    for a in range(27):
        for b in range(27):
            for k in range(3):
                assert check_bch_congruence(e * a, e * b, k)


def test_commutator_examples():
    alg = sl2_algebra(3, (1, 1, 1), 8)
    assert check_commutator_congruence(alg["h"], alg.zero(), 1)
    assert check_commutator_congruence(alg["h"], alg["e"], 1)
    with pytest.raises(HypothesisFailed):
        check_commutator_congruence(alg["h"], alg["e"], 2)
    with pytest.raises(PrecisionExhausted):
        check_bch_congruence(alg["h"], alg["e"], 8)


def test_group_commutator_identity_for_commuting():
    alg = abelian_algebra(3, 2, 6)
    g, h = GroupElement(alg.basis(0) * 4), GroupElement(alg.basis(1) * 7)
    assert group_commutator(g, h) == GroupElement.identity(alg)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(0, 3**8 - 1), min_size=3, max_size=3), st.integers(-5, 5))
def test_power_law(c, m):
    alg = sl2_algebra(3, (1, 1, 1), 8)
    u = alg.element(c)
    g = GroupElement(u if m >= 0 else -u)
    prod = group_product(*([g] * abs(m))) if m else GroupElement.identity(alg)
    assert prod.log == u * m


def test_subalgebra_spec():
    alg, spec = build_chevalley_sl2(3, 1, 8)[0]
    assert spec.contains(alg["e"] * 3) and not spec.contains(alg["e"])
    assert not spec.defects(alg)
    with pytest.raises(ValueError):
        SubalgebraSpec((2, 0, 0))


def test_depths():
    alg, spec = build_chevalley_sl2(3, 1, 8)[0]
    assert alg.depth(alg["h"]) == 1
    assert alg.depth(alg["h"] * 3) == 2
    assert alg.depth_on(alg["e"], spec) == 2
