"""Structured comparison reports and deterministic file serialization.

JSON and CSV emitted here are byte-stable across runs: keys are sorted,
floats are fixed to 12 significant digits, and nothing time- or
machine-dependent is written.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .errors import UsageError

FLOAT_DIGITS = 12


@dataclass(frozen=True)
class QuantityDeviation:
    """Largest observed deviation of one named quantity between two gauges."""

    name: str
    max_dev: float


@dataclass(frozen=True)
class InvarianceReport:
    """Outcome of comparing two gauges.

    ``matched`` lists the quantities required to agree (the gauge-invariant
    observables); ``differed`` lists gauge-dependent quantities, reported for
    inspection but never checked. The report passes when every matched entry
    stays within ``tolerance``.
    """

    matched: tuple[QuantityDeviation, ...]
    differed: tuple[QuantityDeviation, ...]
    tolerance: float
    passed: bool

    @classmethod
    def from_groups(cls, matched, differed, tolerance) -> "InvarianceReport":
        matched = tuple(matched)
        differed = tuple(differed)
        if not matched and not differed:
            raise UsageError("invariance report needs at least one quantity")
        names = [q.name for q in matched] + [q.name for q in differed]
        if len(set(names)) != len(names):
            raise UsageError(f"matched and differed quantities must be disjoint: {names}")
        passed = all(q.max_dev <= tolerance for q in matched)
        return cls(matched=matched, differed=differed, tolerance=tolerance, passed=passed)

    def to_json_dict(self) -> dict:
        return {
            "matched": [{"name": q.name, "max_dev": q.max_dev} for q in self.matched],
            "differed": [{"name": q.name, "max_dev": q.max_dev} for q in self.differed],
            "tolerance": self.tolerance,
            "pass": self.passed,
        }


def _normalize_floats(obj):
    """Round every float to FLOAT_DIGITS significant digits, recursively."""
    if isinstance(obj, bool):
        return obj
    if isinstance(obj, float):
        return float(f"{obj:.{FLOAT_DIGITS}g}")
    if isinstance(obj, dict):
        return {k: _normalize_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_normalize_floats(v) for v in obj]
    return obj


def json_bytes(obj) -> bytes:
    """Deterministic JSON encoding: sorted keys, normalized floats, trailing newline."""
    text = json.dumps(_normalize_floats(obj), sort_keys=True, indent=2)
    return (text + "\n").encode("utf-8")


def write_json(obj, path: Path | str) -> Path:
    path = Path(path)
    path.write_bytes(json_bytes(obj))
    return path


def format_float(v: float) -> str:
    return f"{v:.{FLOAT_DIGITS}g}"


def csv_bytes(header: list[str], rows) -> bytes:
    """Deterministic CSV encoding; floats fixed to 12 significant digits."""
    lines = [",".join(header)]
    for row in rows:
        cells = []
        for v in row:
            if isinstance(v, bool):
                cells.append(str(v).lower())
            elif isinstance(v, float):
                cells.append(format_float(v))
            else:
                cells.append(str(v))
        lines.append(",".join(cells))
    return ("\n".join(lines) + "\n").encode("utf-8")


def write_csv(header, rows, path: Path | str) -> Path:
    path = Path(path)
    path.write_bytes(csv_bytes(list(header), rows))
    return path


def emit_report(report: InvarianceReport, path: Path | str, extra: dict | None = None) -> Path:
    """Serialize an invariance report to JSON, optionally with metadata keys."""
    payload = report.to_json_dict()
    if extra:
        overlap = set(payload) & set(extra)
        if overlap:
            raise UsageError(f"metadata keys collide with report fields: {sorted(overlap)}")
        payload.update(extra)
    return write_json(payload, path)
