"""Command-line harness: iwasawa [flags] runs the verification suites."""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass, field

from .errors import InvalidParameter, IoError
from .report import emit_report, group_reports
from .suites import SUITES, SuiteParams, run_suites

CONFIG_ENV = "IWASAWA_CONFIG"

FAULTS = ("jacobi",)

# flag dest -> RunConfig field
KEYS = {
    "prime": "p",
    "level": "l",
    "quotient_exp": "m",
    "precision": "N",
    "degree_bound": "D",
    "bruteforce_degree": "D_max",
    "power_start": "s",
    "seed": "seed",
    "suites": "suites",
    "format": "format",
    "out": "out",
    "samples": "samples",
    "inject_fault": "fault",
    "timing": "timing",
}


@dataclass
class RunConfig:
    p: int = 3
    l: int = 1
    m: int = 2
    N: int = 8
    D: int = 8
    D_max: int = 6
    s: int = 0
    seed: int = 0
    suites: list[str] = field(default_factory=lambda: list(SUITES))
    out: str | None = None
    format: str = "records"
    samples: dict | None = None
    fault: str | None = None
    timing: bool = False

    def params(self) -> SuiteParams:
        return SuiteParams(self.p, self.l, self.m, self.N, self.D, self.D_max, self.s,
                           self.seed, self.samples, self.fault, self.timing)

    def echo(self) -> dict:
        d = asdict(self)
        d.pop("out")
        return d


def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % q for q in range(2, int(n**0.5) + 1))


def validate(cfg: RunConfig) -> RunConfig:
    if not _is_prime(cfg.p):
        raise InvalidParameter(f"p = {cfg.p} is not prime")
    if cfg.p == 2 and cfg.l < 2:
        raise InvalidParameter("p = 2 requires l >= 2")
    if cfg.l < 1:
        raise InvalidParameter("l >= 1 required")
    if cfg.m < 1:
        raise InvalidParameter("m >= 1 required")
    if cfg.N < cfg.m + cfg.l + 2:
        raise InvalidParameter(f"N >= m + l + 2 required (N = {cfg.N}, m + l + 2 = {cfg.m + cfg.l + 2})")
    if cfg.D >= cfg.p**cfg.m:
        raise InvalidParameter(f"D < p^m required for the safe window (D = {cfg.D}, p^m = {cfg.p**cfg.m})")
    if cfg.D_max < 0 or cfg.s < 0:
        raise InvalidParameter("degree and power bounds must be non-negative")
    unknown = [s for s in cfg.suites if s not in SUITES]
    if unknown:
        raise InvalidParameter(f"unknown suites {unknown}; choose from {list(SUITES)}")
    if cfg.fault is not None and cfg.fault not in FAULTS:
        raise InvalidParameter(f"unknown fault {cfg.fault!r}")
    if cfg.format not in ("human", "records"):
        raise InvalidParameter(f"unknown format {cfg.format!r}")
    return cfg


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="iwasawa", description="Run the finite-scale verification suites.")
    ap.add_argument("--prime", type=int)
    ap.add_argument("--level", type=int)
    ap.add_argument("--quotient-exp", type=int, help="m in K[G/G^(p^m)]")
    ap.add_argument("--precision", type=int, help="p-adic precision N")
    ap.add_argument("--degree-bound", type=int, help="graded degree bound D")
    ap.add_argument("--bruteforce-degree", type=int, help="D_max for the hypothesis brute force")
    ap.add_argument("--power-start", type=int, help="s in the power range {s, s+1}")
    ap.add_argument("--seed", type=int)
    ap.add_argument("--suites", help=f"comma-separated subset of {','.join(SUITES)}")
    ap.add_argument("--format", choices=("human", "records"))
    ap.add_argument("--out", help="write the report here instead of stdout")
    ap.add_argument("--config", help=f"JSON config file (default: ${CONFIG_ENV})")
    ap.add_argument("--samples", help="JSON object overriding per-sweep sample counts")
    ap.add_argument("--inject-fault", choices=FAULTS)
    ap.add_argument("--timing", action="store_true", default=None, help="record elapsed_ms per check")
    return ap


def _coerce(key: str, value):
    if key == "suites" and isinstance(value, str):
        return [s.strip() for s in value.split(",") if s.strip()]
    if key == "samples" and isinstance(value, str):
        try:
            return json.loads(value)
        except json.JSONDecodeError as exc:
            raise InvalidParameter(f"--samples is not JSON: {exc}") from exc
    return value


def load_file(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidParameter(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise InvalidParameter("config file must hold a JSON object")
    names = set(KEYS.values())
    out = {}
    for k, v in data.items():
        key = KEYS.get(k.replace("-", "_"), k)
        if key not in names:
            raise InvalidParameter(f"unknown config key {k!r}")
        out[key] = _coerce(key, v)
    return out


def parse_config(argv: list[str] | None = None, env: dict | None = None) -> RunConfig:
    """Flags over file over defaults."""
    env = os.environ if env is None else env
    args = build_parser().parse_args(argv)
    values: dict = {}
    path = args.config or env.get(CONFIG_ENV)
    if path:
        values.update(load_file(path))
    for dest, key in KEYS.items():
        v = getattr(args, dest)
        if v is not None:
            values[key] = _coerce(key, v)
    return validate(RunConfig(**values))


def run(cfg: RunConfig) -> tuple[str, int]:
    records = run_suites(cfg.params(), cfg.suites)
    reports = group_reports(records, cfg.echo())
    return emit_report(reports, cfg.format, cfg.out)


def main(argv: list[str] | None = None) -> int:
    try:
        cfg = parse_config(argv)
    except InvalidParameter as exc:
        print(f"iwasawa: {exc}", file=sys.stderr)
        return 2
    try:
        text, status = run(cfg)
    except IoError as exc:
        print(f"iwasawa: {exc}", file=sys.stderr)
        return 2
    if cfg.out is None:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
