"""Acceptance criteria, one test per criterion, at the stated sizes and time limits."""

from __future__ import annotations

import json
import random
import subprocess
import sys
import time

import pytest

from iwasawa.derivation_hypothesis import NAMES, hypothesis_bruteforce, sl2_derivations
from iwasawa.group_algebra import GroupElement, build_quotient, verify_rho_formula
from iwasawa.lie import build_chevalley_sl2
from iwasawa.poly import GradedPoly, random_homogeneous
from iwasawa import suites as S

GRID = [(2, 2), (3, 1), (5, 1)]


class Clock:
    def __init__(self, limit: float) -> None:
        self.limit = limit

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0
        if exc[0] is None:
            assert self.elapsed < self.limit, f"took {self.elapsed:.1f} s, limit {self.limit} s"


def ok(result):
    holds, witness = result
    assert holds, witness
    return witness


@pytest.mark.criterion(1, "BCH congruence, p in {2,3,5}, N = 10, 500 triples each")
def test_criterion_1_bch():
    with Clock(10):
        for p, l in GRID:
            alg = build_chevalley_sl2(p, l, 10)[0][0]
            assert ok(S.bch_congruence_sweep(alg, 500, random.Random(f"bch{p}"), 3))["samples"] == 500


@pytest.mark.criterion(2, "group commutator congruence, 300 instances, exp laws")
def test_criterion_2_commutator():
    with Clock(10):
        for p, l in GRID:
            alg = build_chevalley_sl2(p, l, 10)[0][0]
            rng = random.Random(f"comm{p}")
            ok(S.commutator_sweep(alg, 300, rng))
            ok(S.exp_power_sweep(alg, 40, rng))
            ok(S.exp_congruence_sweep(alg, 40, rng))
            ok(S.exp_additive_sweep(alg, 40, rng))
            ok(S.group_mul_sweep(alg, 20, rng))


@pytest.mark.criterion(3, "graded ring at p = 3, m = 2, d = 3")
def test_criterion_3_graded_ring():
    with Clock(30):
        alg, spec = build_chevalley_sl2(3, 1, 8)[0]
        Q = build_quotient(alg, spec, 2)
        ok(S.graded_dimension_check(Q))
        ok(S.b_commute_check(Q))
        assert ok(S.symbol_multiplicative_sweep(Q, 200, random.Random("sym")))["samples"] == 200
        ok(S.filtration_basis_check(Q))
        ok(S.convolution_sweep(Q, 50, random.Random("conv")))
        ok(S.subalgebra_span_check(Q, 20, random.Random("span")))


@pytest.mark.criterion(4, "filtration bounds (c), (d) for |alpha| <= 4, p = 3 and the p = 2 chain")
def test_criterion_4_filtration():
    with Clock(60):
        seen = set()
        for p, l, m in ((3, 1, 2), (2, 2, 3)):
            for idx, (alg, spec) in enumerate(build_chevalley_sl2(p, l, 10)):
                Q = build_quotient(alg, spec, m)
                for name in NAMES:
                    u = alg[name]
                    k = alg.depth(u)
                    if alg.depth_on(u, spec) < k + 1:
                        # the hypotheses fail: h on the pair (L1, L2)
                        assert (p, idx, name) == (2, 1, "h")
                        continue
                    for variant in ("c", "d"):
                        rep = S.commutator_filtration_check(Q, GroupElement(u), k, 4, variant)
                        assert rep.holds, (p, idx, name, variant, rep.worst)
                    seen.add((p, idx, name))
        assert len(seen) == 3 + 3 + 2


@pytest.mark.criterion(5, "derivation formula and the displayed operators")
def test_criterion_5_derivation_formula():
    with Clock(60):
        alg, spec = build_chevalley_sl2(3, 1, 8)[0]
        Q = build_quotient(alg, spec, 2)
        for name in NAMES:
            assert verify_rho_formula(Q, alg[name])
        ok(S.display_check(3, 1, None, (0, 1), 2, 8))
        for pair in ("01", "12"):
            wit = ok(S.display_check(2, 2, pair, (0, 1), 1, 9))
            assert {(m["u"], m["r"]) for m in wit["members"]} == (
                {(u, r) for u in NAMES for r in (0, 1)} if pair == "01" else {(u, r) for u in "ef" for r in (0, 1)}
            )


@pytest.mark.criterion(6, "Frobenius control equivalence, kernel sweep, reflexive closure")
def test_criterion_6_frobenius():
    with Clock(60):
        wit = ok(S.control_sweep(200, random.Random("control"), 8))
        assert wit["stable"] > 0 and wit["unstable"] > 0
        for p in (2, 3):
            for d in (2, 3):
                for t in range(1, d + 1):
                    ok(S.kernel_sweep(p, d, t, 6))
        ok(S.closure_sweep(200, random.Random("closure")))


@pytest.mark.criterion(7, "delta closed form vs brute force, cleaning loop")
def test_criterion_7_delta_cleaning():
    with Clock(60):
        alg, spec = build_chevalley_sl2(3, 1, 8)[0]
        Q = build_quotient(alg, spec, 2)
        ok(S.delta_sweep(Q, 200, random.Random("delta")))
        ok(S.cleaning_one_plus_b(Q))
        assert ok(S.cleaning_sweep(Q, 50, random.Random("clean")))["samples"] == 50


@pytest.mark.criterion(8, "derivation hypothesis brute force and the p = 2 single-step witness")
def test_criterion_8_hypothesis():
    with Clock(300):
        odd = sl2_derivations(3, 1, None, (0, 1))
        rng = random.Random("samples")
        xs = [GradedPoly.parse(x, 3, NAMES) for x in ("e", "f", "h", "e*f-h^2", "e*f+h^2")]
        xs += [g for g in (random_homogeneous(rng, 3, 3, 2, 0.6, NAMES) for _ in range(3)) if not g.is_zero()]
        for X in xs:
            rep = hypothesis_bruteforce(odd, X, 6, 0)
            assert rep.holds, (X, rep.violations[:3])
        for pair in ("01", "12"):
            system = sl2_derivations(2, 2, pair, (0, 1))
            for x in ("e", "f", "h"):
                rep = hypothesis_bruteforce(system, GradedPoly.parse(x, 2, NAMES), 6, 0)
                assert rep.holds, (pair, x, rep.violations[:3])
        ok(S.single_step_witness(2, 0, 6))


def _cli(*args):
    return subprocess.run([sys.executable, "-m", "iwasawa", *args], capture_output=True, text=True)


@pytest.mark.criterion(9, "end to end: default exit 0, Jacobi fault exit 1, determinism")
def test_criterion_9_end_to_end():
    first = _cli()
    assert first.returncode == 0, first.stdout[-2000:] + first.stderr[-2000:]
    records = [json.loads(x) for x in first.stdout.splitlines()]
    assert {r["suite"] for r in records} == set(S.SUITES)
    assert all(r["verdict"] == "pass" for r in records)
    second = _cli()
    assert second.stdout == first.stdout
    fault = _cli("--inject-fault", "jacobi")
    assert fault.returncode == 1
    failed = [json.loads(x) for x in fault.stdout.splitlines() if json.loads(x)["verdict"] == "fail"]
    assert [(r["suite"], r["check_id"]) for r in failed] == [("graded-ring", "lie-axioms")]
    assert any(d["check"] == "jacobi" for d in failed[0]["witness"]["defects"])
