"""
harness/emit.py

Byte-stable CSV and JSON renderings of an ExperimentResult, plus the JSON
reader. Floats are written with ``repr`` so identical results give identical
bytes.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Literal

from config import FLOAT_FORMAT
from harness.experiment import QUANTILE_COLUMNS, ExperimentResult, ExperimentRow

CSV_COLUMNS = (
    ["n", "ks"]
    + QUANTILE_COLUMNS
    + [f"ref_{c}" for c in QUANTILE_COLUMNS]
    + ["a", "b", "c", "d", "regime"]
)


def _csv_line(row: ExperimentRow) -> str:
    fields = [str(row.n), FLOAT_FORMAT(row.ks)]
    fields += [FLOAT_FORMAT(q) for q in row.quantiles]
    fields += [FLOAT_FORMAT(q) for q in row.ref_quantiles]
    fields += [FLOAT_FORMAT(v) for v in (row.a, row.b, row.c, row.d)]
    fields.append(row.regime.value)
    return ",".join(fields)


def to_csv(result: ExperimentResult) -> str:
    lines = [",".join(CSV_COLUMNS)]
    lines += [_csv_line(row) for row in result.rows]
    return "\n".join(lines) + "\n"


def to_json(result: ExperimentResult) -> str:
    return json.dumps(result.to_dict(), ensure_ascii=False, indent=2) + "\n"


def from_json(text: str) -> ExperimentResult:
    return ExperimentResult.from_dict(json.loads(text))


def render(result: ExperimentResult, fmt: Literal["csv", "json"]) -> bytes:
    if fmt == "csv":
        return to_csv(result).encode("utf-8")
    if fmt == "json":
        return to_json(result).encode("utf-8")
    raise ValueError(f"unknown format {fmt!r} (supported: csv, json)")


def emit(result: ExperimentResult, fmt: Literal["csv", "json"],
         path: Path | None = None) -> bytes:
    """Render ``result``; also write it to ``path`` when given."""
    payload = render(result, fmt)
    if path is not None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(payload)
    return payload
