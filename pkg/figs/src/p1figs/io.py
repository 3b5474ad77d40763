"""Schema-validated readers for the comparison grid CSV and report JSON.

The grid rows are kept verbatim (raw text) alongside the parsed numbers,
so re-exporting a table reproduces the input byte for byte: the renderer
never alters numbers.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

GRID_HEADER = "x,y_num,y_asym,h_num,h_asym,masked"


class SchemaError(Exception):
    """Input file missing or not conforming to the documented schema."""


@dataclass
class GridTable:
    raw_lines: list[str]          # header + rows, verbatim, newline-stripped
    x: np.ndarray
    y_num: np.ndarray
    y_asym: np.ndarray
    h_num: np.ndarray
    h_asym: np.ndarray
    masked: np.ndarray            # bool


def read_grid(path) -> GridTable:
    path = Path(path)
    if not path.is_file():
        raise SchemaError(f"grid CSV not found: {path}")
    raw = path.read_text(encoding="utf-8")
    lines = raw.splitlines()
    if not lines or lines[0] != GRID_HEADER:
        raise SchemaError(f"bad grid header in {path}: expected {GRID_HEADER!r}")
    cols: list[list[float]] = [[], [], [], [], []]
    masked: list[bool] = []
    for i, line in enumerate(lines[1:], start=2):
        parts = line.split(",")
        if len(parts) != 6:
            raise SchemaError(f"{path}:{i}: expected 6 fields, got {len(parts)}")
        try:
            for j in range(5):
                cols[j].append(float(parts[j]))
        except ValueError as exc:
            raise SchemaError(f"{path}:{i}: non-numeric field") from exc
        if parts[5] not in ("0", "1"):
            raise SchemaError(f"{path}:{i}: masked flag must be 0 or 1")
        masked.append(parts[5] == "1")
    if len(masked) < 2:
        raise SchemaError(f"{path}: fewer than 2 data rows")
    return GridTable(raw_lines=lines,
                     x=np.array(cols[0]), y_num=np.array(cols[1]),
                     y_asym=np.array(cols[2]), h_num=np.array(cols[3]),
                     h_asym=np.array(cols[4]), masked=np.array(masked, dtype=bool))


def write_grid(table: GridTable, path) -> None:
    """Re-export a table verbatim (bit-identical to the file it came from)."""
    Path(path).write_text("\n".join(table.raw_lines) + "\n", encoding="utf-8")


def read_report(path) -> dict:
    path = Path(path)
    if not path.is_file():
        raise SchemaError(f"report JSON not found: {path}")
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON") from exc
    for key in ("preset", "x_min", "exp_y", "exp_h", "pole_table"):
        if key not in data:
            raise SchemaError(f"{path}: missing key {key!r}")
    for key in ("exp_y", "exp_h"):
        if not isinstance(data[key], dict) or "value" not in data[key] \
                or "stderr" not in data[key]:
            raise SchemaError(f"{path}: {key} must carry value and stderr")
    return data
