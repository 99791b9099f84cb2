"""CSV/JSON writers. Floats use Python's shortest round-trip repr, so output is bit-exact."""
from __future__ import annotations

import csv
import io
import json

import numpy as np


def fmt(x):
    if x is None:
        return ""
    x = float(x) + 0.0  # folds -0.0 into 0.0
    return repr(x)


def _writer():
    buf = io.StringIO()
    return buf, csv.writer(buf, lineterminator="\n")


def table_csv(header, rows):
    buf, w = _writer()
    w.writerow(header)
    for row in rows:
        w.writerow([c if isinstance(c, str) else fmt(c) for c in row])
    return buf.getvalue()


def matrix_csv(matrix, index, columns=None):
    """One row per vertex; the header lists the column vertex ids."""
    columns = index if columns is None else columns
    m = np.asarray(matrix, dtype=float)
    return table_csv(["vertex", *columns], ([v, *m[i]] for i, v in enumerate(index)))


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (np.floating, float)):
        return float(obj) + 0.0
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def to_json(obj):
    return json.dumps(_clean(obj), indent=1, sort_keys=False, allow_nan=True) + "\n"
