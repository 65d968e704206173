"""
Pareto frontiers of (fit, complexity) points and ways to choose from them.

Both objectives are minimized. Dominance is exact: no tolerance is applied,
and points with identical coordinates are all kept on the frontier.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple, Sequence

from .errors import DataError, UsageError
from .objectives import ObjectivePoint

__all__ = [
    "FrontierReport",
    "MarginalStep",
    "dominates",
    "pareto_frontier",
    "marginal_returns",
    "elbow",
    "constrained_select",
    "max_params",
]


def _check_finite(pt: ObjectivePoint):
    if not (math.isfinite(pt.f1) and math.isfinite(pt.f2)):
        raise DataError(f"point {pt.model_id!r} has non-finite coordinates")


def dominates(a: ObjectivePoint, b: ObjectivePoint) -> bool:
    """True if ``a`` is no worse than ``b`` in both objectives and better in one."""
    _check_finite(a)
    _check_finite(b)
    return (a.f1 <= b.f1 and a.f2 <= b.f2) and (a.f1 < b.f1 or a.f2 < b.f2)


class MarginalStep(NamedTuple):
    """Moving one step along the frontier toward higher complexity."""

    from_point: ObjectivePoint
    to_point: ObjectivePoint
    delta_f1: float  # fit improvement, f1[k] - f1[k+1]
    delta_f2: float  # added complexity, f2[k+1] - f2[k]


@dataclass(frozen=True)
class FrontierReport:
    all_points: tuple
    frontier: tuple
    dominated: tuple
    duplicates: tuple
    marginal_returns: tuple
    elbow: ObjectivePoint | None

    @property
    def dominated_count(self) -> int:
        return len(self.dominated)

    @property
    def frontier_ids(self) -> list:
        return [pt.model_id for pt in self.frontier]

    def to_dict(self) -> dict:
        on_front = {id(pt) for pt in self.frontier}
        return {
            "points": [
                {"id": pt.model_id, "f1": pt.f1, "f2": pt.f2, "p": pt.p,
                 "pareto": id(pt) in on_front}
                for pt in self.all_points
            ],
            "frontier_ids": self.frontier_ids,
            "dominated_ids": [pt.model_id for pt in self.dominated],
            "duplicate_ids": [list(group) for group in self.duplicates],
            "marginal_returns": [
                {"from_id": s.from_point.model_id, "to_id": s.to_point.model_id,
                 "delta_f1": s.delta_f1, "delta_f2": s.delta_f2}
                for s in self.marginal_returns
            ],
            "elbow_id": None if self.elbow is None else self.elbow.model_id,
        }

    def to_json(self, path=None) -> str:
        text = json.dumps(self.to_dict(), indent=2)
        if path is not None:
            Path(path).write_text(text + "\n", encoding="utf-8")
        return text


def _frontier_flags(points: Sequence[ObjectivePoint]) -> list:
    # Sweep in (f2, f1) order; a point survives if it is the best f1 within its
    # f2 group and strictly beats every point of smaller f2.
    order = sorted(range(len(points)), key=lambda i: (points[i].f2, points[i].f1))
    flags = [False] * len(points)
    best_before = math.inf
    k = 0
    while k < len(order):
        f2 = points[order[k]].f2
        group = []
        while k < len(order) and points[order[k]].f2 == f2:
            group.append(order[k])
            k += 1
        group_min = points[group[0]].f1
        if group_min < best_before:
            for i in group:
                if points[i].f1 == group_min:
                    flags[i] = True
            best_before = group_min
    return flags


def pareto_frontier(points: Sequence[ObjectivePoint]) -> FrontierReport:
    """Split ``points`` into the non-dominated frontier and the rest.

    The frontier is sorted by ``f2`` ascending (then ``f1``, then id).
    Marginal returns and the elbow are filled in when the frontier is long
    enough to define them.
    """
    points = tuple(points)
    if not points:
        raise DataError("no points given")
    for pt in points:
        _check_finite(pt)
    flags = _frontier_flags(points)
    key = lambda pt: (pt.f2, pt.f1, pt.model_id)
    frontier = tuple(sorted((pt for pt, f in zip(points, flags) if f), key=key))
    dominated = tuple(pt for pt, f in zip(points, flags) if not f)

    groups = {}
    for pt in frontier:
        groups.setdefault((pt.f1, pt.f2), []).append(pt.model_id)
    duplicates = tuple(tuple(ids) for ids in groups.values() if len(ids) > 1)

    n_distinct = len(groups)
    steps = tuple(marginal_returns(frontier)) if n_distinct >= 2 else ()
    knee = None
    if n_distinct >= 3:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            knee = elbow(frontier)
    return FrontierReport(points, frontier, dominated, duplicates, steps, knee)


def _distinct(frontier: Sequence[ObjectivePoint]) -> list:
    seen, out = set(), []
    for pt in sorted(frontier, key=lambda pt: (pt.f2, pt.f1, pt.model_id)):
        if (pt.f1, pt.f2) not in seen:
            seen.add((pt.f1, pt.f2))
            out.append(pt)
    return out


def marginal_returns(frontier: Sequence[ObjectivePoint]) -> list:
    """Fit gained by each step to the next more complex frontier model.

    Duplicate coordinates are collapsed to their first id.
    """
    pts = _distinct(frontier)
    if len(pts) < 2:
        raise UsageError("marginal returns need at least two distinct frontier points")
    return [MarginalStep(a, b, a.f1 - b.f1, b.f2 - a.f2) for a, b in zip(pts, pts[1:])]


def elbow(frontier: Sequence[ObjectivePoint]) -> ObjectivePoint:
    """Interior frontier point lying furthest below the endpoint chord.

    The gap is vertical (in f1 units) to the straight line joining the
    simplest and most complex frontier points; ties go to smaller ``f2``.
    A zero maximal gap (collinear frontier) triggers a RuntimeWarning.
    """
    pts = _distinct(frontier)
    if len(pts) < 3:
        raise UsageError("an elbow needs at least three distinct frontier points")
    first, last = pts[0], pts[-1]
    slope = (last.f1 - first.f1) / (last.f2 - first.f2)
    best, best_gap = None, -math.inf
    for pt in pts[1:-1]:
        gap = first.f1 + slope * (pt.f2 - first.f2) - pt.f1
        if gap > best_gap:
            best, best_gap = pt, gap
    if best_gap <= 0:
        warnings.warn("frontier has no curvature; elbow is not well defined",
                      RuntimeWarning, stacklevel=2)
    return best


def max_params(n: int, ratio: float = 15.0) -> int:
    """Largest integer ``p`` with ``p < n / ratio``."""
    return math.ceil(n / ratio) - 1


def constrained_select(frontier: Sequence[ObjectivePoint], p_max: int) -> ObjectivePoint:
    """Best-fitting frontier point with at most ``p_max`` parameters."""
    allowed = [pt for pt in frontier if pt.p <= p_max]
    if not allowed:
        raise UsageError(f"no frontier point has p <= {p_max}")
    return min(allowed, key=lambda pt: (pt.f1, pt.p, pt.model_id))
