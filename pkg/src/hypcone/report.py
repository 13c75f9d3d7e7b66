"""Check records and their serialization (json-lines, csv, human text)."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field

CSV_COLUMNS = ("name", "ref", "residual", "tolerance", "passed", "samples", "expect", "skipped", "note")


@dataclass
class CheckResult:
    """One verified identity.

    ``passed`` is derived: residual <= tolerance for ordinary checks, and
    residual > tolerance for negative controls (``expect="fail"``).
    """

    name: str
    ref: str
    residual: float
    tolerance: float
    samples: int = 1
    expect: str = "pass"
    skipped: bool = False
    note: str = ""
    detail: dict = field(default_factory=dict)

    def __post_init__(self):
        self.residual = float(self.residual)
        self.tolerance = float(self.tolerance)
        if self.tolerance <= 0:
            raise ValueError(f"tolerance must be positive, got {self.tolerance}")
        if self.expect not in ("pass", "fail"):
            raise ValueError(f"expect must be 'pass' or 'fail', got {self.expect!r}")

    @property
    def within(self) -> bool:
        return bool(self.residual <= self.tolerance) and not math.isnan(self.residual)

    @property
    def passed(self) -> bool:
        if self.skipped:
            return True
        return self.within if self.expect == "pass" else not self.within

    def record(self) -> dict:
        out = asdict(self)
        out.pop("detail")
        out["residual"] = _fmt_float(self.residual)
        out["tolerance"] = _fmt_float(self.tolerance)
        out["passed"] = self.passed
        out["detail"] = _plain(self.detail)
        return out

    def __str__(self):
        status = "SKIP" if self.skipped else ("PASS" if self.passed else "FAIL")
        tag = " (negative control)" if self.expect == "fail" else ""
        return (
            f"[{status}] {self.name}{tag}: residual {self.residual:.3e} "
            f"vs tol {self.tolerance:.1e} over {self.samples} samples  <{self.ref}>"
        )


def relative_deviation(a, b, floor=1e-300):
    import numpy as np

    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    scale = np.maximum(np.maximum(np.abs(a), np.abs(b)), floor)
    return float(np.max(np.abs(a - b) / scale)) if a.size else 0.0


def _plain(obj):
    import numpy as np

    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (np.floating, float)):
        return _fmt_float(float(obj))
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def _fmt_float(x: float):
    if math.isnan(x) or math.isinf(x):
        return str(x)
    return float(f"{x:.12g}")


@dataclass
class Report:
    checks: list[CheckResult]
    config: dict = field(default_factory=dict)
    version: str = ""

    def sorted_checks(self) -> list[CheckResult]:
        return sorted(self.checks, key=lambda c: c.name)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def summary(self) -> dict:
        checks = self.checks
        return {
            "total": len(checks),
            "passed": sum(c.passed and not c.skipped for c in checks),
            "failed": sum(not c.passed for c in checks),
            "skipped": sum(c.skipped for c in checks),
            "ok": self.ok,
        }

    def to_jsonl(self) -> str:
        lines = [json.dumps({"type": "config", "version": self.version, "config": _plain(self.config)}, sort_keys=True)]
        for c in self.sorted_checks():
            lines.append(json.dumps({"type": "check", **c.record()}, sort_keys=True))
        lines.append(json.dumps({"type": "summary", **self.summary()}, sort_keys=True))
        return "\n".join(lines) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for c in self.sorted_checks():
            rec = c.record()
            writer.writerow([_csv_cell(rec[col]) for col in CSV_COLUMNS])
        return buf.getvalue()

    def to_human(self) -> str:
        lines = [str(c) for c in self.sorted_checks()]
        s = self.summary()
        lines.append(
            f"{s['total']} checks: {s['passed']} passed, {s['failed']} failed, {s['skipped']} skipped"
        )
        return "\n".join(lines) + "\n"

    def render(self, fmt: str) -> str:
        if fmt == "json-lines":
            return self.to_jsonl()
        if fmt == "csv":
            return self.to_csv()
        if fmt == "human":
            return self.to_human()
        raise ValueError(f"unknown report format {fmt!r}")


def _csv_cell(value):
    if isinstance(value, float):
        return repr(_fmt_float(value))
    return value


def write_csv_table(path, header, rows):
    """Plain CSV: comma separated, '.' decimal, header row, LF endings."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_csv_cell(float(v)) if isinstance(v, float) else v for v in row])
