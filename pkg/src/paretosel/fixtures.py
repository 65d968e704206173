"""
Objective-point CSV files and the bundled avian species richness table.

A points file has a header with at least ``label``, ``f1`` and ``f2``.
Optional columns: ``p`` (defaults to ``f2``), ``n``, ``converged`` (rows
with a false value are dropped) and ``pearson_chi_sq``.
"""

from __future__ import annotations

import csv
from importlib.resources import files
from pathlib import Path
from typing import NamedTuple

from .errors import DataError
from .objectives import ObjectivePoint

__all__ = ["PointSet", "Table2Row", "load_points", "table2", "table2_points", "TABLE2_N"]

TABLE2_N = 49


class PointSet(NamedTuple):
    points: list
    n: int | None
    skipped: list  # labels of non-converged rows


class Table2Row(NamedTuple):
    label: str
    aic: float
    delta_aic: float
    f1: float
    f2: int
    pareto: bool


def _truthy(text: str) -> bool:
    return text.strip().lower() in ("1", "true", "yes", "y", "t")


def _read_points(rows, source: str) -> PointSet:
    header = rows.fieldnames or []
    missing = {"label", "f1", "f2"} - set(header)
    if missing:
        raise DataError(f"{source}: missing columns {sorted(missing)}")
    points, skipped, ns = [], [], set()
    for lineno, row in enumerate(rows, start=2):
        label = row["label"].strip()
        if "converged" in header and not _truthy(row["converged"]):
            skipped.append(label)
            continue
        try:
            f1, f2 = float(row["f1"]), float(row["f2"])
            p = int(row["p"]) if row.get("p") not in (None, "") else None
            if row.get("n") not in (None, ""):
                ns.add(int(row["n"]))
        except (TypeError, ValueError) as exc:
            raise DataError(f"{source}: line {lineno}: {exc}") from None
        points.append(ObjectivePoint(label, f1, f2, p))
    if len(ns) > 1:
        raise DataError(f"{source}: inconsistent sample sizes {sorted(ns)}")
    return PointSet(points, ns.pop() if ns else None, skipped)


def load_points(path) -> PointSet:
    """Read a ``label, f1, f2`` CSV (fixture or fit results)."""
    path = Path(path)
    if not path.is_file():
        raise DataError(f"{path}: no such file")
    with path.open(newline="", encoding="utf-8") as fh:
        return _read_points(csv.DictReader(fh), str(path))


def _table2_text() -> str:
    return files("paretosel").joinpath("resources/table2.csv").read_text()


def table2() -> list:
    """The 24 published rows: label, AIC, delta AIC, f1, f2, Pareto flag."""
    rows = csv.DictReader(_table2_text().splitlines())
    return [Table2Row(r["label"], float(r["aic"]), float(r["delta_aic"]),
                      float(r["f1"]), int(r["f2"]), r["pareto"] == "1") for r in rows]


def table2_points() -> list:
    """Table 2 as objective points (``f2`` is the parameter count)."""
    return [ObjectivePoint(r.label, r.f1, float(r.f2), r.f2) for r in table2()]
