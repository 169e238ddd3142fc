"""Serialization of check records and the exit-status rule."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable

from .errors import IoError
from .suites import FAIL, PASS, UNDECIDABLE, CheckRecord

FIELDS = ("suite", "check_id", "anchor", "verdict", "witness", "elapsed_ms")


@dataclass
class SuiteReport:
    suite: str
    params: dict
    records: list[CheckRecord] = field(default_factory=list)

    @property
    def verdict(self) -> str:
        return overall([r.verdict for r in self.records])


def overall(verdicts: Iterable[str]) -> str:
    verdicts = list(verdicts)
    if FAIL in verdicts:
        return FAIL
    if UNDECIDABLE in verdicts:
        return UNDECIDABLE
    return PASS


def exit_status(records: Iterable[CheckRecord]) -> int:
    return {PASS: 0, FAIL: 1, UNDECIDABLE: 2}[overall(r.verdict for r in records)]


def group_reports(records: Iterable[CheckRecord], params: dict) -> list[SuiteReport]:
    by: dict[str, SuiteReport] = {}
    for r in sorted(records, key=lambda r: (r.suite, r.check_id)):
        by.setdefault(r.suite, SuiteReport(r.suite, params)).records.append(r)
    return list(by.values())


def to_records(reports: Iterable[SuiteReport]) -> str:
    lines = []
    for rep in reports:
        for r in sorted(rep.records, key=lambda r: (r.suite, r.check_id)):
            lines.append(json.dumps(r.as_dict(), sort_keys=True, separators=(",", ":")))
    return "\n".join(lines) + ("\n" if lines else "")


def parse_records(text: str) -> list[CheckRecord]:
    out = []
    for line in text.splitlines():
        if line.strip():
            d = json.loads(line)
            out.append(CheckRecord(*(d[k] for k in FIELDS)))
    return out


def to_human(reports: Iterable[SuiteReport]) -> str:
    rows = [("suite", "check", "verdict", "ms")]
    for rep in reports:
        for r in rep.records:
            ms = "" if r.elapsed_ms is None else f"{r.elapsed_ms:.1f}"
            rows.append((r.suite, r.check_id, r.verdict, ms))
    widths = [max(len(row[i]) for row in rows) for i in range(4)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in rows]
    lines.insert(1, "  ".join("-" * w for w in widths))
    for rep in reports:
        for r in rep.records:
            if r.verdict != PASS:
                lines.append(f"\n[{r.verdict}] {r.suite}/{r.check_id}: {r.anchor}")
                lines.append("  witness: " + json.dumps(r.witness, sort_keys=True))
    total = [r for rep in reports for r in rep.records]
    lines.append(f"\n{len(total)} checks, overall {overall(r.verdict for r in total)}")
    return "\n".join(lines) + "\n"


def emit_report(reports: list[SuiteReport], fmt: str = "records", out: str | None = None) -> tuple[str, int]:
    """Serialize the reports; write them to ``out`` when given."""
    if fmt == "records":
        text = to_records(reports)
    elif fmt == "human":
        text = to_human(reports)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if out is not None:
        try:
            with open(out, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise IoError(f"cannot write {out}: {exc}") from exc
    return text, exit_status(r for rep in reports for r in rep.records)
