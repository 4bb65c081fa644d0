"""CSV and JSON output with lossless float formatting."""
from __future__ import annotations

import csv
import io
import json
import math

__all__ = ["EIGENVALUE_COLUMNS", "SINGULAR_VALUE_COLUMNS", "SINOGRAM_COLUMNS", "format_number", "rows_to_csv", "rows_to_json"]

EIGENVALUE_COLUMNS = ("j", "d", "n", "value", "log10_abs", "sign", "is_null")
SINGULAR_VALUE_COLUMNS = ("m", "l", "d", "lambda", "lower_cert", "upper_bound", "upper_const", "upper_d3")
SINOGRAM_COLUMNS = ("a_phi", "a_t", "w_phi", "w_t", "value", "value_im")


def format_number(x) -> str:
    """17 significant digits for floats, lowercase booleans, empty for ``None``."""
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".17g")


def rows_to_csv(columns, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_number(v) for v in row])
    return buf.getvalue()


def _json_value(x):
    if isinstance(x, float) and math.isinf(x):
        return None
    return x


def rows_to_json(columns, rows) -> str:
    records = [{c: _json_value(v) for c, v in zip(columns, row)} for row in rows]
    return json.dumps(records, indent=2)
