"""Deterministic report emission.

Machine-readable output is line-delimited JSON with sorted keys; floats
serialize through Python's shortest round-trip repr, so a given set of
values always produces the same bytes.  Complex numbers become [re, im]
pairs.  The human summary is plain text built from the same values.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Sequence

import numpy as np


def jsonable(value):
    """Recursively convert numpy scalars, arrays, and complex numbers
    into plain JSON-compatible types."""
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [jsonable(v) for v in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (complex, np.complexfloating)):
        z = complex(value)
        return [z.real, z.imag]
    if isinstance(value, (float, np.floating)):
        return float(value)
    if value is None or isinstance(value, str):
        return value
    raise TypeError(f"cannot serialize {type(value).__name__} into a report")


def dumps_record(record: dict) -> str:
    return json.dumps(jsonable(record), sort_keys=True, allow_nan=False,
                      separators=(",", ":"))


def write_jsonl(path: str | Path, records: Sequence[dict]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    text = "".join(dumps_record(r) + "\n" for r in records)
    path.write_bytes(text.encode("utf-8"))
    return path


def write_text(path: str | Path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(text.encode("utf-8"))
    return path


def fnum(x: float) -> str:
    """Compact float rendering for summaries."""
    return "%.12g" % float(x)


def kv_block(pairs: Sequence[tuple[str, object]]) -> str:
    width = max(len(k) for k, _ in pairs)
    lines = []
    for key, value in pairs:
        if isinstance(value, float):
            value = fnum(value)
        lines.append(f"{key.ljust(width)}  {value}")
    return "\n".join(lines) + "\n"


def table(headers: Sequence[str], rows: Sequence[Sequence[object]]) -> str:
    cells = [[str(h) for h in headers]]
    for row in rows:
        cells.append([fnum(v) if isinstance(v, float) else str(v) for v in row])
    widths = [max(len(r[c]) for r in cells) for c in range(len(headers))]
    lines = []
    for i, row in enumerate(cells):
        lines.append("  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip())
        if i == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"
