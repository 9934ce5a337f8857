"""CSV and manifest writers.

Numbers are written in the shortest decimal form that round-trips
(``repr`` of a float), independent of locale, with ``\\n`` line endings.
Missing values are empty fields.
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np


def format_number(v):
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    v = float(v)
    if math.isnan(v):
        return ""
    if v == 0.0:
        return "0.0"  # drop the sign of negative zero
    return repr(v)


def csv_text(header, rows):
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(x if isinstance(x, str) else format_number(x) for x in row))
    return "\n".join(lines) + "\n"


def write_csv(path, header, rows):
    Path(path).write_bytes(csv_text(header, rows).encode("utf-8"))


def columns_to_rows(columns):
    names = list(columns)
    arrays = [np.asarray(columns[n]).tolist() for n in names]
    return names, list(zip(*arrays))


def write_manifest(path, entries):
    """Flat ``key=value`` lines, keys sorted, UTF-8."""
    lines = []
    for key in sorted(entries):
        value = str(entries[key])
        if "\n" in value or "=" in key:
            raise ValueError(f"manifest entry {key!r} cannot be written on one line")
        lines.append(f"{key}={value}")
    Path(path).write_bytes(("\n".join(lines) + "\n").encode("utf-8"))


def read_manifest(path):
    entries = {}
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        if not raw.strip():
            continue
        key, sep, value = raw.partition("=")
        if not sep:
            raise ValueError(f"malformed manifest line: {raw!r}")
        entries[key] = value
    return entries
