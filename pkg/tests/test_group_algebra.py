from __future__ import annotations

import random

import numpy as np
import pytest

from iwasawa.errors import HypothesisFailed, WindowExceeded, ZeroElement
from iwasawa.group_algebra import (
    TOP,
    build_quotient,
    commutator_filtration_check,
    induced_derivation,
    jadic_degree,
    principal_symbol,
    rho_matrix,
    subalgebra_decompose,
    verify_rho_formula,
)
from iwasawa.lie import GroupElement, SubalgebraSpec, abelian_algebra, build_chevalley_sl2, group_product
from iwasawa.poly import GradedPoly


@pytest.fixture(scope="module")
def Q3():
    alg, spec = build_chevalley_sl2(3, 1, 8)[0]
    return build_quotient(alg, spec, 2)


def test_dimension_and_identity():
    alg, spec = build_chevalley_sl2(3, 1, 8)[0]
    Q = build_quotient(alg, spec, 1)
    assert Q.dim == 27
    x = Q.b(0) + Q.b(2) * 2
    assert Q.one() * x == x == x * Q.one()


def test_products_match_group_convolution(Q3):
    # oracle: multiply group elements through the Lie realization directly
    alg = Q3.algebra
    rng = random.Random(1)
    for _ in range(25):
        lam = [rng.randrange(9) for _ in range(3)]
        mu = [rng.randrange(9) for _ in range(3)]
        gs = [GroupElement(alg.basis(i) * lam[i]) for i in range(3)]
        gs += [GroupElement(alg.basis(i) * mu[i]) for i in range(3)]
        v = np.zeros(Q3.dim, dtype=np.int64)
        v[Q3.coset_index(group_product(*gs))] = 1
        assert Q3.group_basis_element(lam) * Q3.group_basis_element(mu) == Q3.from_group_coeffs(v)


def test_b_products_via_group_basis(Q3):
    alg = Q3.algebra
    one = GroupElement.identity(alg)
    for i in range(3):
        for j in range(3):
            gi, gj = GroupElement(alg.basis(i)), GroupElement(alg.basis(j))
            # (g_i - 1)(g_j - 1) = g_i g_j - g_i - g_j + 1
            expect = (
                Q3.group_element(group_product(gi, gj)) - Q3.group_element(gi)
                - Q3.group_element(gj) + Q3.group_element(one)
            )
            assert Q3.b(i) * Q3.b(j) == expect


def test_associativity_and_inverse(Q3):
    rng = random.Random(2)
    for _ in range(10):
        x, y, z = (Q3.element([rng.randrange(3) if rng.random() < 0.02 else 0 for _ in range(Q3.dim)]) for _ in range(3))
        assert (x * y) * z == x * (y * z)
    u = Q3.one() + Q3.b(1) * 2 + Q3.b(0) * Q3.b(2)
    assert u * u.inverse() == Q3.one() == u.inverse() * u


def test_jadic_and_symbol(Q3):
    assert jadic_degree(Q3.b(0)) == 1
    assert jadic_degree(Q3.zero()) == TOP
    with pytest.raises(ZeroElement):
        principal_symbol(Q3.zero())
    x = Q3.b(0) * Q3.b(1) + Q3.b(2) ** 3
    assert principal_symbol(x) == GradedPoly.parse("e*f", 3, ("e", "f", "h"))


def test_subalgebra_decompose_example(Q3):
    w = Q3.b(0) ** 3 + Q3.b(1)
    x, y = subalgebra_decompose(w)
    assert x == Q3.b(0) ** 3 and y == Q3.b(1)
    x, y = subalgebra_decompose(Q3.b(0) ** 3 * Q3.b(1) ** 6)
    assert y.is_zero()


def test_filtration_examples(Q3):
    alg = Q3.algebra
    a = GroupElement(alg["e"])
    assert jadic_degree(Q3.commutator_with(a, Q3.b(1))) >= 3
    assert Q3.commutator_with(a, Q3.one()).is_zero()
    assert commutator_filtration_check(Q3, a, 1, 4, "c").holds
    assert commutator_filtration_check(Q3, a, 1, 4, "d").holds
    with pytest.raises(HypothesisFailed):
        commutator_filtration_check(Q3, a, 2, 4, "c")


def test_p2_h_filtration_d():
    alg, spec = build_chevalley_sl2(2, 2, 8)[0]
    Q = build_quotient(alg, spec, 3)
    rep = commutator_filtration_check(Q, GroupElement(alg["h"]), 3, 4, "d")
    assert rep.holds and rep.checked > 0


def test_induced_derivation_h(Q3):
    alg = Q3.algebra
    D = induced_derivation(Q3, GroupElement(alg["h"]), 2)
    names = ("e", "f", "h")
    assert D.images == (
        GradedPoly.parse("2*e^3", 3, names),
        GradedPoly.parse("-2*f^3", 3, names),
        GradedPoly.zero(3, 3, names),
    )
    with pytest.raises(WindowExceeded):
        induced_derivation(Q3, GroupElement(alg["h"]), 8)


def test_induced_derivation_leibniz(Q3):
    # the symbol of [a, b^alpha b^beta] in degree |alpha| + |beta| + theta
    alg = Q3.algebra
    rng = random.Random(3)
    for name in ("e", "f", "h"):
        a = GroupElement(alg[name])
        D = induced_derivation(Q3, a, 2)
        for _ in range(17):
            al = [rng.randrange(2) for _ in range(3)]
            be = [rng.randrange(2) for _ in range(3)]
            x, y = Q3.b_monomial(al), Q3.b_monomial(be)
            n = sum(al) + sum(be) + 2
            if n >= Q3.window:
                continue
            direct = Q3.commutator_with(a, x * y).component(n)
            assert direct == D(principal_symbol(x * y))


def test_central_action_gives_zero_derivation():
    alg = abelian_algebra(3, 2, 6)
    Q = build_quotient(alg, SubalgebraSpec((1, 1)), 2)
    assert induced_derivation(Q, GroupElement(alg.basis(0)), 2).is_zero()
    with pytest.raises(HypothesisFailed):
        rho_matrix(alg.basis(0), SubalgebraSpec((1, 1)))


def test_rho_matrix_examples(Q3):
    alg, spec = Q3.algebra, Q3.spec
    assert rho_matrix(alg["h"], spec) == [[2, 0, 0], [0, (-2) % 3, 0], [0, 0, 0]]
    c = rho_matrix(alg["e"], spec)
    assert [row[1] for row in c] == [0, 0, 1]
    assert [row[2] for row in c] == [(-2) % 3, 0, 0]
    for name in ("e", "f", "h"):
        assert verify_rho_formula(Q3, alg[name])


def test_graded_dimension_and_commuting(Q3):
    import itertools
    from collections import Counter

    counts = Counter(sum(a) for a in itertools.product(range(9), repeat=3))
    assert [Q3.graded_dimension(n) for n in range(25)] == [counts[n] for n in range(25)]
    for i in range(3):
        for j in range(3):
            assert jadic_degree(Q3.b(i) * Q3.b(j) - Q3.b(j) * Q3.b(i)) >= 3
