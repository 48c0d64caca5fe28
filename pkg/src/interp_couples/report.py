"""Report records, aggregation and deterministic serialization (JSON / CSV)."""

from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any

import numpy as np

__all__ = ["SCHEMA", "Record", "Report", "summarize", "margin", "dumps", "emit", "emit_table", "load_report"]

SCHEMA = "interp-couples/1"


def margin(value: float, bound: float) -> float:
    """Relative slack (bound - value) / bound; a zero bound is met only by a zero value."""
    value, bound = float(value), float(bound)
    if bound == 0.0:
        return 0.0 if value <= 0.0 else -math.inf
    return (bound - value) / bound


@dataclass
class Record:
    label: str
    value: float
    bound: float
    margin: float
    passed: bool
    theta: float | None = None
    index: int | None = None
    norm_x: float | None = None

    @classmethod
    def compare(cls, label, value, bound, tolerance, *, theta=None, index=None, norm_x=None) -> "Record":
        value, bound = float(value), float(bound)
        ok = value <= bound * (1.0 + tolerance) if bound > 0 else value <= 0.0
        return cls(label, value, bound, margin(value, bound), bool(ok),
                   None if theta is None else float(theta),
                   None if index is None else int(index),
                   None if norm_x is None else float(norm_x))


def summarize(records) -> dict[str, Any]:
    """Deterministic aggregate: counts, worst relative margin and where it occurs."""
    records = list(records)
    if not records:
        raise ValueError("cannot summarize an empty record set")
    margins = [r.margin for r in records]
    worst = min(margins)
    # ties resolved by (label, theta, index) so the location is order independent too
    at = min((r for r in records if r.margin == worst),
             key=lambda r: (r.label, -1.0 if r.theta is None else r.theta, -1 if r.index is None else r.index))
    finite = [m for m in margins if math.isfinite(m)]
    passed = sum(1 for r in records if r.passed)
    return {
        "count": len(records),
        "passed": passed,
        "failed": len(records) - passed,
        "worst_margin": worst,
        "worst_label": at.label,
        "worst_theta": at.theta,
        "worst_index": at.index,
        "mean_margin": math.fsum(finite) / len(finite) if finite else None,
    }


@dataclass
class Report:
    kind: str
    records: list = field(default_factory=list)
    summary: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.summary.get("failed", 0) == 0

    def to_dict(self) -> dict:
        recs = [asdict(r) if isinstance(r, Record) else dict(r) for r in self.records]
        return {"schema": SCHEMA, "kind": self.kind, "meta": self.meta, "summary": self.summary, "records": recs}

    @classmethod
    def from_dict(cls, data: dict) -> "Report":
        if data.get("schema") != SCHEMA:
            raise ValueError(f"unsupported report schema {data.get('schema')!r}")
        names = {f.name for f in fields(Record)}
        recs = [Record(**r) if set(r) == names else r for r in data.get("records", [])]
        return cls(data["kind"], recs, data.get("summary", {}), data.get("meta", {}))


def _plain(obj):
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    return obj


def _fmt_float(v: float) -> str:
    if math.isnan(v):
        return "NaN"
    if math.isinf(v):
        return "Infinity" if v > 0 else "-Infinity"
    s = format(v, ".17g")
    if not any(ch in s for ch in ".en"):
        s += ".0"
    return s


def dumps(obj, indent: int = 1, _level: int = 0) -> str:
    """JSON text with floats at 17 significant digits and insertion-ordered keys."""
    obj = _plain(obj)
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _fmt_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(_plain(v), (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(dumps(v, indent, _level + 1) for v in obj) + "]"
        items = [pad + dumps(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _csv_text(rows: list[dict]) -> str:
    buf = io.StringIO()
    if not rows:
        return ""
    header = list(rows[0].keys())
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        out = []
        for key in header:
            v = _plain(row.get(key))
            if isinstance(v, float):
                out.append(_fmt_float(v))
            elif v is None:
                out.append("")
            else:
                out.append(str(v))
        w.writerow(out)
    return buf.getvalue()


def _atomic_write(path, text: str) -> None:
    path = Path(path)
    directory = path.parent if str(path.parent) else Path(".")
    try:
        fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=directory)
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.chmod(tmp, 0o644)
        os.replace(tmp, path)
    except OSError as exc:
        raise OSError(f"could not write report to {path}: {exc}") from exc


def render(report: Report, fmt: str) -> str:
    if fmt == "json":
        return dumps(report.to_dict()) + "\n"
    if fmt == "csv":
        return _csv_text(report.to_dict()["records"])
    raise ValueError(f"unknown format {fmt!r}")


def emit(report: Report, fmt: str, path) -> None:
    """Write a report atomically (temp file + rename)."""
    _atomic_write(path, render(report, fmt))


def emit_table(rows: list[dict], fmt: str, path, kind: str = "table", meta: dict | None = None) -> None:
    emit(Report(kind, rows, {}, meta or {}), fmt, path)


def load_report(path) -> Report:
    with open(path, encoding="utf-8") as fh:
        return Report.from_dict(json.load(fh))
