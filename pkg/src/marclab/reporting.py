"""Deterministic JSON/CSV emitters shared by the library and the CLI."""

from __future__ import annotations

import csv
import io
import json
import math
from fractions import Fraction
from typing import Any, Iterable, Sequence

SCHEMA_VERSION = 1


def jsonable(obj: Any) -> Any:
    """Convert fractions, tuples and non-finite floats into stable JSON values."""
    if isinstance(obj, Fraction):
        return str(obj) if obj.denominator != 1 else obj.numerator
    if isinstance(obj, float):
        if math.isnan(obj):
            return "nan"
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        return obj
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if hasattr(obj, "to_json"):
        return jsonable(obj.to_json())
    if hasattr(obj, "item"):  # numpy scalars
        return jsonable(obj.item())
    return obj


def dumps(obj: Any) -> str:
    return json.dumps(jsonable(obj), sort_keys=True, indent=2) + "\n"


def csv_text(columns: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    """CSV with a fixed header; an empty row set yields the header alone."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


def _cell(v: Any) -> str:
    v = jsonable(v)
    if isinstance(v, float):
        return repr(v)
    return str(v)


def sparkline_svg(values: Sequence[float], width: int = 240, height: int = 60) -> str:
    """Minimal static polyline of ``values``."""
    vals = [float(v) for v in values]
    if not vals:
        return f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}"/>\n'
    lo, hi = min(vals), max(vals)
    span = hi - lo or 1.0
    step = width / max(len(vals) - 1, 1)
    pts = " ".join(f"{i * step:.2f},{height - (v - lo) / span * height:.2f}" for i, v in enumerate(vals))
    return (f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">'
            f'<polyline fill="none" stroke="black" points="{pts}"/></svg>\n')
