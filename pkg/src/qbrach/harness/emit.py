"""Deterministic CSV and JSON serialization of sweep results."""

from __future__ import annotations

import csv
import io
import json
import math
import os
from dataclasses import dataclass, field
from typing import Any


@dataclass
class SweepResult:
    columns: list[str]
    rows: list[dict[str, Any]] = field(default_factory=list)
    metadata: dict[str, Any] = field(default_factory=dict)


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if not math.isfinite(value):
            return ""
        return format(value, ".17g")
    return str(value)


def _json_value(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def to_csv(result: SweepResult) -> bytes:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n", quoting=csv.QUOTE_MINIMAL)
    writer.writerow(result.columns)
    for row in result.rows:
        writer.writerow([_cell(row.get(c)) for c in result.columns])
    return buf.getvalue().encode("utf-8")


def to_json(result: SweepResult) -> bytes:
    # repr-based float output is the shortest string that round-trips binary64.
    doc = {
        "metadata": {k: _json_value(result.metadata[k]) for k in sorted(result.metadata)},
        "columns": list(result.columns),
        "rows": [{c: _json_value(row.get(c)) for c in result.columns} for row in result.rows],
    }
    return (json.dumps(doc, indent=2, allow_nan=False) + "\n").encode("utf-8")


def emit(result: SweepResult, fmt: str = "csv") -> bytes:
    if fmt == "csv":
        return to_csv(result)
    if fmt == "json":
        return to_json(result)
    raise ValueError(f"unknown format {fmt!r}")


def write(result: SweepResult, path: str, fmt: str = "csv") -> None:
    """Write the emitted bytes to ``path``; raises ``OSError`` if unwritable."""
    data = emit(result, fmt)
    parent = os.path.dirname(os.path.abspath(path))
    if not os.path.isdir(parent):
        raise FileNotFoundError(f"output directory does not exist: {parent}")
    with open(path, "wb") as fh:
        fh.write(data)
