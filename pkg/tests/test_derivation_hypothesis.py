from __future__ import annotations

import pytest

from iwasawa.derivation_hypothesis import (
    NAMES,
    eliminate_and_check,
    hypothesis_bruteforce,
    is_violation,
    sl2_derivations,
)
from iwasawa.errors import NotInClosure, SearchSpaceTooLarge, UnsupportedParameters
from iwasawa.poly import GradedPoly
from iwasawa.suites import display_check


def P(text, p):
    return GradedPoly.parse(text, p, NAMES)


def test_odd_system_display():
    S = sl2_derivations(3, 1, None, (0,))
    assert S.members[("h", 0)].render(NAMES) == "(2*e^3)*d/de + (f^3)*d/df"
    assert S.members[("e", 0)].render(NAMES) == "(h^3)*d/df + (e^3)*d/dh"


@pytest.mark.parametrize("pair", ["01", "12"])
def test_p2_members_match_group_pipeline(pair):
    ok, wit = display_check(2, 2, pair, (0,), 1, 9)
    assert ok, wit


def test_odd_members_match_group_pipeline():
    ok, wit = display_check(3, 1, None, (0, 1), 2, 8)
    assert ok, wit


def test_parameter_errors():
    with pytest.raises(UnsupportedParameters):
        sl2_derivations(2, 1, "01")
    with pytest.raises(UnsupportedParameters):
        sl2_derivations(2, 2, None)
    with pytest.raises(UnsupportedParameters):
        sl2_derivations(3, 1, "01")


def test_elimination_trivial_cases():
    S = sl2_derivations(3, 1, None, (0, 1))
    rep = eliminate_and_check(P("1", 3), P("e*f^2 + h", 3), 0, S)
    assert rep.holds
    rep = eliminate_and_check(P("e", 3), P("e^3*f^3 + h^6", 3), 0, S)
    assert rep.holds
    assert all(c["reason"] == "vanishes" for c in rep.conclusions.values())


def test_elimination_certifies_closure_element():
    S = sl2_derivations(3, 1, None, (0, 1))
    rep = eliminate_and_check(P("e", 3), P("e^4*h^3", 3), 0, S)
    assert rep.holds
    with pytest.raises(NotInClosure):
        eliminate_and_check(P("e", 3), P("e*f^3", 3), 0, S)


def test_bruteforce_empty_for_odd_system():
    S = sl2_derivations(3, 1, None, (0, 1))
    assert hypothesis_bruteforce(S, P("e", 3), 6, 0).holds


def test_single_step_witness():
    S = sl2_derivations(2, 2, "single", (0, 1))
    X, Y = P("h", 2), P("h*e^2*f^2", 2)
    assert is_violation(S, X, Y, 0)
    rep = hypothesis_bruteforce(S, X, 5, 0)
    assert not rep.holds and rep.violations[0] == X


def test_enumerate_agrees_with_linear():
    S = sl2_derivations(2, 2, "01", (0, 1))
    for x in ("e", "h"):
        lin = hypothesis_bruteforce(S, P(x, 2), 3, 0, "linear")
        enum = hypothesis_bruteforce(S, P(x, 2), 3, 0, "enumerate")
        assert lin.holds == enum.holds
    with pytest.raises(SearchSpaceTooLarge):
        hypothesis_bruteforce(S, P("e", 2), 6, 0, "enumerate", limit=1000)


def test_trivial_family_is_weaker():
    S = sl2_derivations(3, 1, None, (0, 1)).trivial()
    assert not hypothesis_bruteforce(S, P("e", 3), 2, 0).holds
