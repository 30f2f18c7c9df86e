"""CSV and JSON emission of homogeneous record lists."""

from __future__ import annotations

import csv
import json
import math
from typing import Iterable, Mapping, Sequence

DENSITY_COLUMNS = [
    "round",
    "delta",
    "events",
    "touched",
    "density",
    "stale_density",
    "oracle_density",
    "beta",
    "rebuilds",
    "wall_time_us",
    "cursor",
    "fallback",
]
COMPARE_COLUMNS = ["round", "cursor", "density_ours", "density_baseline", "oracle_density", "ratio_baseline_over_ours"]


class ReportError(OSError):
    pass


def _plain(v):
    if isinstance(v, float) and not math.isfinite(v):
        return str(v)
    if hasattr(v, "numerator") and hasattr(v, "denominator") and not isinstance(v, (int, bool)):
        return float(v)
    return v


def emit_report(
    records: Iterable[Mapping[str, object]],
    path,
    columns: Sequence[str] | None = None,
    fmt: str = "csv",
) -> int:
    """Write ``records`` with a fixed column order; returns the row count.

    Every record must have exactly ``columns`` (taken from the first record
    when not given).  An empty list writes a header-only CSV or ``[]``.
    """
    rows = [dict(r) for r in records]
    if columns is None:
        if not rows:
            raise ReportError("columns are required for an empty report")
        columns = list(rows[0])
    columns = list(columns)
    for i, r in enumerate(rows):
        if set(r) != set(columns):
            raise ReportError(f"record {i} has columns {sorted(r)}, expected {sorted(columns)}")
    try:
        if fmt == "csv":
            with open(path, "w", encoding="utf-8", newline="") as fh:
                w = csv.DictWriter(fh, fieldnames=columns, lineterminator="\n")
                w.writeheader()
                for r in rows:
                    w.writerow({k: _plain(r[k]) for k in columns})
        elif fmt == "json":
            with open(path, "w", encoding="utf-8", newline="\n") as fh:
                json.dump([{k: _plain(r[k]) for k in columns} for r in rows], fh, indent=1)
                fh.write("\n")
        else:
            raise ValueError(f"unknown report format {fmt!r}")
    except OSError as exc:
        raise ReportError(f"cannot write report {path}: {exc}") from exc
    return len(rows)
