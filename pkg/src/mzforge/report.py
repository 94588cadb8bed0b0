"""CSV and JSON writers for reports.

CSV files start with ``# key: value`` comment lines (tolerances, provenance)
followed by a header row. Floats are written with ``repr`` so that identical
inputs give byte-identical files.
"""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

import numpy as np


def _plain(x):
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, np.ndarray):
        return _plain(x.tolist())
    if isinstance(x, (np.bool_,)):
        return bool(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, (np.floating, float)):
        x = float(x)
        return x if math.isfinite(x) else str(x)
    if isinstance(x, (complex, np.complexfloating)):
        return [float(x.real), float(x.imag)]
    if hasattr(x, "value") and isinstance(getattr(x, "value"), str):
        return x.value
    return x


def to_json(obj) -> str:
    return json.dumps(_plain(obj), indent=1, sort_keys=True) + "\n"


def write_json(path, obj) -> None:
    Path(path).write_text(to_json(obj))


def _cell(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (complex, np.complexfloating)):
        return f"{float(v.real)!r}{float(v.imag):+}j"
    if isinstance(v, (dict, list)):
        return json.dumps(_plain(v), sort_keys=True)
    return str(v)


def to_csv(rows: list[dict], columns: list[str] | None = None, header: dict | None = None) -> str:
    buf = io.StringIO()
    for key, value in (header or {}).items():
        if isinstance(value, dict):
            for k2 in sorted(value):
                buf.write(f"# {key}.{k2}: {_cell(value[k2])}\n")
        else:
            buf.write(f"# {key}: {_cell(value)}\n")
    columns = columns or (list(rows[0]) if rows else [])
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_cell(r.get(c, "")) for c in columns])
    return buf.getvalue()


def write_csv(path, rows, columns=None, header=None) -> None:
    Path(path).write_text(to_csv(rows, columns, header))


def read_csv(path) -> tuple[dict, list[dict]]:
    """Inverse of :func:`write_csv`; values stay strings."""
    header, body = {}, []
    for line in Path(path).read_text().splitlines():
        if line.startswith("# ") and not body:
            k, _, v = line[2:].partition(": ")
            header[k] = v
        else:
            body.append(line)
    return header, list(csv.DictReader(body))
