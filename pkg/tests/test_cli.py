from __future__ import annotations

import json

import pytest

from iwasawa.cli import CONFIG_ENV, RunConfig, main, parse_config, run
from iwasawa.errors import InvalidParameter, IoError
from iwasawa.report import emit_report, group_reports, parse_records, to_records
from iwasawa.suites import FAIL, PASS, SUITES, UNDECIDABLE, CheckRecord, Recorder


def rec(verdict, check="c"):
    return CheckRecord("s", check, "a", verdict, {"x": 1}, None)


def test_defaults():
    cfg = parse_config([], env={})
    assert (cfg.p, cfg.l, cfg.m, cfg.N, cfg.D, cfg.D_max, cfg.s, cfg.seed) == (3, 1, 2, 8, 8, 6, 0, 0)
    assert cfg.suites == list(SUITES)


@pytest.mark.parametrize(
    "argv",
    [
        ["--prime", "2", "--level", "1"],
        ["--prime", "4"],
        ["--precision", "4"],
        ["--degree-bound", "9"],
        ["--suites", "bch,nope"],
    ],
)
def test_invalid(argv):
    with pytest.raises(InvalidParameter):
        parse_config(argv, env={})


def test_precedence(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"m": 1, "seed": 5, "degree_bound": 2}))
    cfg = parse_config(["--quotient-exp", "2"], env={CONFIG_ENV: str(path)})
    assert cfg.m == 2 and cfg.seed == 5 and cfg.D == 2
    cfg = parse_config(["--config", str(path), "--quotient-exp", "2", "--seed", "9"], env={})
    assert cfg.seed == 9
    path.write_text(json.dumps({"bogus": 1}))
    with pytest.raises(InvalidParameter):
        parse_config([], env={CONFIG_ENV: str(path)})


def test_exit_codes():
    assert emit_report(group_reports([rec(PASS)], {}))[1] == 0
    assert emit_report(group_reports([rec(PASS), rec(FAIL, "d")], {}))[1] == 1
    assert emit_report(group_reports([rec(PASS), rec(UNDECIDABLE, "d")], {}))[1] == 2
    assert emit_report(group_reports([rec(FAIL), rec(UNDECIDABLE, "d")], {}))[1] == 1


def test_records_roundtrip():
    records = [rec(PASS, "b"), rec(FAIL, "a")]
    text = to_records(group_reports(records, {}))
    back = parse_records(text)
    assert [r.check_id for r in back] == ["a", "b"]
    assert to_records(group_reports(back, {})) == text
    assert all(set(json.loads(line)) == {"suite", "check_id", "anchor", "verdict", "witness", "elapsed_ms"}
               for line in text.splitlines())


def test_recorder_marks_precision_errors_undecidable():
    from iwasawa.anchors import ANCHORS
    from iwasawa.errors import HypothesisFailed, PrecisionExhausted

    r = Recorder("x")

    def boom():
        raise PrecisionExhausted("too deep")

    def bad():
        raise HypothesisFailed("no")

    assert r.check("a", "delta", boom).verdict == UNDECIDABLE
    assert r.check("b", "delta", bad).verdict == FAIL
    assert r.records[0].anchor in ANCHORS.values()


def test_io_error(tmp_path):
    with pytest.raises(IoError):
        emit_report(group_reports([rec(PASS)], {}), "records", str(tmp_path / "missing" / "out.jsonl"))


def test_suite_selection_and_human(tmp_path, capsys):
    out = tmp_path / "r.txt"
    assert main(["--suites", "frobenius", "--format", "human", "--out", str(out), "--samples", '{"ideals": 20}']) == 0
    text = out.read_text()
    assert "frobenius" in text and "bch" not in text
    cfg = parse_config(["--suites", "bch", "--samples", '{"bch": 30, "commutator": 30, "laws": 5}'], env={})
    lines, status = run(cfg)
    assert status == 0
    assert {json.loads(x)["suite"] for x in lines.splitlines()} == {"bch"}


def test_suite_independence():
    small = '{"bch": 12, "commutator": 12, "laws": 3, "ideals": 10}'
    alone = run(parse_config(["--suites", "frobenius", "--samples", small], env={}))[0]
    both = run(parse_config(["--suites", "bch,frobenius", "--samples", small], env={}))[0]
    fro = [x for x in both.splitlines() if json.loads(x)["suite"] == "frobenius"]
    assert alone.splitlines() == fro


def test_timing_flag():
    cfg = parse_config(["--suites", "frobenius", "--samples", '{"ideals": 5}', "--timing"], env={})
    lines, _ = run(cfg)
    assert all(json.loads(x)["elapsed_ms"] is not None for x in lines.splitlines())
    assert isinstance(RunConfig().echo(), dict)
