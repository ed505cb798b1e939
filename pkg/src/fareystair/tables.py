"""Deterministic CSV/JSON tables with a metadata preamble."""

from __future__ import annotations

import json
import math
from fractions import Fraction
from typing import IO, Any, Sequence

FLOAT_FORMAT = "{:.14e}"


def format_cell(v: Any) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, float) or hasattr(v, "__float__") and not isinstance(v, str):
        x = float(v)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return FLOAT_FORMAT.format(x)
    return str(v)


def _json_cell(v: Any):
    if isinstance(v, bool) or isinstance(v, int) or v is None:
        return v
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, str):
        return v
    x = float(v)
    if not math.isfinite(x):
        return format_cell(x)
    return float(FLOAT_FORMAT.format(x))


def write_table(out: IO[str], columns: Sequence[str], rows: Sequence[Sequence[Any]],
                meta: Sequence[tuple[str, Any]] = (), trailer: Sequence[tuple[str, Any]] = (),
                fmt: str = "csv") -> None:
    for r in rows:
        if len(r) != len(columns):
            raise ValueError(f"row {r!r} does not match columns {list(columns)}")
    if fmt == "csv":
        for k, v in meta:
            out.write(f"# {k}={format_cell(v)}\n")
        out.write(",".join(columns) + "\n")
        for r in rows:
            out.write(",".join(format_cell(v) for v in r) + "\n")
        for k, v in trailer:
            out.write(f"# {k}={format_cell(v)}\n")
    elif fmt == "json":
        doc = {
            "meta": {k: _json_cell(v) for k, v in meta},
            "columns": list(columns),
            "rows": [[_json_cell(v) for v in r] for r in rows],
            "trailer": {k: _json_cell(v) for k, v in trailer},
        }
        out.write(json.dumps(doc, indent=1) + "\n")
    else:
        raise ValueError(f"unknown format {fmt!r}")


def read_csv_table(text: str) -> tuple[dict[str, str], list[str], list[list[str]]]:
    """Parse what :func:`write_table` emits; metadata values stay strings."""
    meta, header, rows = {}, None, []
    for line in text.splitlines():
        if line.startswith("# "):
            k, _, v = line[2:].partition("=")
            meta[k] = v
        elif header is None:
            header = line.split(",")
        elif line:
            rows.append(line.split(","))
    return meta, header or [], rows
