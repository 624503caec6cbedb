"""CSV/JSON emission with a fixed, diff-friendly dialect.

CSV: comma separated, header row, ``\\n`` line endings, floats with 17
significant digits, NaN written as an empty cell. Parsing a file and
emitting it again reproduces it byte for byte.
"""

from __future__ import annotations

import csv
import io
import json
import math
import re

_INT = re.compile(r"^[+-]?\d+$")
_FLOAT = re.compile(r"^[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?$|^[+-]?(inf|nan)$")


def format_value(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return "" if math.isnan(v) else "%.17g" % v
    return str(v)


def parse_value(s: str):
    if s == "":
        return None
    if _INT.match(s):
        return int(s)
    if _FLOAT.match(s):
        return float(s)
    return s


def to_csv(rows, columns) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([format_value(row.get(c)) for c in columns])
    return buf.getvalue()


def read_csv(text: str):
    """``(columns, rows)`` with numeric cells converted back to numbers."""
    reader = csv.reader(io.StringIO(text))
    columns = next(reader)
    rows = [dict(zip(columns, (parse_value(c) for c in line))) for line in reader]
    return columns, rows


def _jsonable(v):
    if isinstance(v, float) and math.isnan(v):
        return None
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if hasattr(v, "item"):
        return _jsonable(v.item())
    return v


def to_json(obj) -> str:
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True, allow_nan=False) + "\n"
