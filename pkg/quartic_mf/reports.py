"""Responsibility: Run configuration, report schema, stable hashing and report merging."""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field as dc_field
from pathlib import Path
from typing import Any, Sequence

from .config import DEFAULT_PRIME, DEFAULT_SEED, DEFAULT_THREADS, DEFAULT_TIMEOUT_S, OUT_DIR, SCHEMA_VERSION
from .logging_utils import LOGGER, kv

EVIDENCE = (
    "Computations run over F_p. A full-rank or vanishing result mod p certifies the "
    "corresponding generic statement in characteristic 0 by semicontinuity of rank."
)
STATUSES = ("pass", "fail", "recorded", "discrepancy", "timeout", "error")


class ReportError(ValueError):
    """A report file that cannot be merged (unreadable, or wrong schema)."""


@dataclass
class RunConfig:
    task: str
    prime: int = DEFAULT_PRIME
    seed: int = DEFAULT_SEED
    trials: int = 5
    family: str | None = None
    i: int | None = None
    case: str | None = None
    moment: str | None = None
    threads: int = DEFAULT_THREADS
    out: str = str(OUT_DIR)
    timeout_s: float = DEFAULT_TIMEOUT_S
    extended: bool = False
    hilbert: bool = False

    def slug(self) -> str:
        parts = [self.task]
        for key in ("family", "case", "moment"):
            value = getattr(self, key)
            if value:
                parts.append(value)
        if self.i is not None:
            parts.append(f"i{self.i}")
        parts += [f"p{self.prime}", f"s{self.seed}"]
        return "-".join(parts)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class Check:
    name: str
    computed: Any
    expected: Any = None
    provenance: str = "RECORDED"
    extended: bool = False
    status: str = dc_field(default="")

    def __post_init__(self) -> None:
        if self.status:
            return
        if self.expected is None:
            self.status = "recorded"
        elif self.computed == self.expected:
            self.status = "pass"
        else:
            self.status = "discrepancy" if self.extended else "fail"

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "expected": self.expected,
            "provenance": self.provenance,
            "computed": self.computed,
            "status": self.status,
        }


def overall_status(checks: Sequence[Check], error: str | None = None, timed_out: bool = False) -> str:
    if timed_out:
        return "timeout"
    if error:
        return "error"
    statuses = {c.status for c in checks}
    for status in ("fail", "discrepancy", "pass"):
        if status in statuses:
            return status
    return "recorded"


def exit_code(status: str) -> int:
    return 1 if status in {"fail", "timeout", "error"} else 0


def _strip_volatile(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {k: _strip_volatile(v) for k, v in obj.items() if k not in {"elapsed_ms", "hash"}}
    if isinstance(obj, list):
        return [_strip_volatile(v) for v in obj]
    return obj


def report_hash(report: dict) -> str:
    """sha256 of the canonical JSON with every elapsed_ms removed."""
    canonical = json.dumps(_strip_volatile(report), sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(canonical.encode()).hexdigest()


def build_report(config: RunConfig, checks: Sequence[Check], data: dict | None = None, elapsed_ms: int = 0,
                 error: str | None = None, timed_out: bool = False) -> dict:
    report = {
        "schema": SCHEMA_VERSION,
        "task": config.task,
        "config": config.to_dict(),
        "status": overall_status(checks, error, timed_out),
        "checks": [c.to_dict() for c in checks],
        "data": data or {},
        "error": error,
        "evidence": EVIDENCE,
        "elapsed_ms": elapsed_ms,
    }
    report["hash"] = report_hash(report)
    return report


def write_report(report: dict, out_dir: Path, name: str) -> Path:
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / f"{name}.json"
    path.write_text(json.dumps(report, indent=2, sort_keys=True, default=str) + "\n", encoding="utf-8")
    LOGGER.info("Report written %s", kv(path=path, status=report.get("status")))
    return path


# -- merging ----------------------------------------------------------------------------

@dataclass
class MergeResult:
    rc: int
    merged: dict
    table: str


def _load(path: Path) -> dict:
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, ValueError) as exc:
        raise ReportError(f"cannot read report {path}: {exc}") from exc
    if not isinstance(payload, dict):
        raise ReportError(f"report {path} is not a JSON object")
    if payload.get("schema") != SCHEMA_VERSION:
        raise ReportError(f"report {path} has schema {payload.get('schema')!r}, expected {SCHEMA_VERSION!r}")
    for key in ("task", "config", "checks", "status"):
        if key not in payload:
            raise ReportError(f"report {path} lacks {key!r}")
    return payload


def _cell(value: Any) -> str:
    if value is None:
        return "-"
    return json.dumps(value) if not isinstance(value, str) else value


def render_table(rows: Sequence[dict]) -> str:
    header = ("check", "expected", "computed", "status")
    lines = [
        (row["name"], f"{_cell(row['expected'])} [{row['provenance']}]", _cell(row["computed"]), row["status"])
        for row in rows
    ]
    widths = [max([len(h)] + [len(line[k]) for line in lines]) for k, h in enumerate(header)]
    fmt = "  ".join(f"{{:<{w}}}" for w in widths)
    out = [fmt.format(*header), fmt.format(*("-" * w for w in widths))]
    out += [fmt.format(*line) for line in lines]
    return "\n".join(out) + "\n"


def report_merge(paths: Sequence[Path]) -> MergeResult:
    """One row per check across reports. Raises ReportError on unreadable or foreign-schema input."""
    reports = [_load(p) for p in paths]
    rows = []
    for report in reports:
        prime = report["config"].get("prime")
        for check in report["checks"]:
            rows.append({**check, "task": report["task"], "prime": prime})
    primes = sorted({r["config"].get("prime") for r in reports})
    flags = []
    if len(primes) > 1:
        flags.append(f"conflicting primes {primes}")
        LOGGER.warning("Merged reports disagree on the prime %s", kv(primes=primes))
    failed = [r for r in rows if r["status"] in {"fail", "timeout", "error"}]
    failed += [{"task": r["task"]} for r in reports if r["status"] in {"timeout", "error"} and not r["checks"]]
    rc = 1 if flags or failed else 0
    merged = {
        "schema": SCHEMA_VERSION,
        "reports": len(reports),
        "primes": primes,
        "flags": flags,
        "rows": rows,
        "status": "fail" if rc else "pass",
    }
    return MergeResult(rc, merged, render_table(rows) if rows else "")
