import json
import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from paretosel.errors import DataError, UsageError
from paretosel.fixtures import TABLE2_N, table2, table2_points
from paretosel.objectives import ObjectivePoint
from paretosel.pareto import (constrained_select, dominates, elbow, marginal_returns,
                              max_params, pareto_frontier)

STARRED = ["1", "area", "area + temp", "area + precip + temp",
           "area + precip + precip^2 + temp + temp^2",
           "area + area^2 + precip + precip^2 + temp + temp^2"]


def P(f1, f2, name=None):
    return ObjectivePoint(name or f"({f1},{f2})", float(f1), float(f2))


def brute_force(points):
    return {i for i, a in enumerate(points)
            if not any(dominates(b, a) for j, b in enumerate(points) if j != i)}


coord = st.one_of(st.integers(0, 8).map(float), st.floats(-50, 50, allow_nan=False))
point_sets = st.lists(st.tuples(coord, coord), min_size=1, max_size=200)


class TestDominates:
    def test_better_in_both(self):
        assert dominates(P(250, 3), P(260, 4))

    def test_equal(self):
        assert not dominates(P(250, 3), P(250, 3))

    def test_table2_pair(self):
        a, b = P(249.6, 6), P(249.4, 7)
        assert not dominates(a, b) and not dominates(b, a)

    def test_one_coordinate(self):
        assert dominates(P(1, 2), P(1, 3))
        assert dominates(P(1, 2), P(2, 2))

    def test_non_finite(self):
        with pytest.raises(DataError):
            dominates(P(math.nan, 1), P(1, 1))


class TestFrontier:
    def test_table2(self):
        report = pareto_frontier(table2_points())
        assert report.frontier_ids == STARRED
        assert [pt.p for pt in report.frontier] == [1, 2, 3, 4, 6, 7]
        assert report.dominated_count == 18
        assert {pt.model_id for pt in report.frontier} == {r.label for r in table2() if r.pareto}

    def test_frontier_minimizes_within_p(self):
        pts = table2_points()
        for pt in pareto_frontier(pts).frontier:
            assert pt.f1 == min(q.f1 for q in pts if q.p == pt.p)

    def test_single(self):
        report = pareto_frontier([P(1, 1)])
        assert len(report.frontier) == 1 and report.dominated_count == 0
        assert report.elbow is None and report.marginal_returns == ()

    def test_empty(self):
        with pytest.raises(DataError):
            pareto_frontier([])

    def test_duplicates_kept(self):
        report = pareto_frontier([P(5, 1, "a"), P(5, 1, "b"), P(6, 2, "c"), P(3, 3, "d")])
        assert report.frontier_ids == ["a", "b", "d"]
        assert report.duplicates == (("a", "b"),)

    def test_random_against_oracle(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            raw = rng.normal(size=(50, 2))
            pts = [P(f1, f2, str(i)) for i, (f1, f2) in enumerate(raw)]
            got = {int(pt.model_id) for pt in pareto_frontier(pts).frontier}
            assert got == brute_force(pts)

    @settings(max_examples=200, deadline=None)
    @given(point_sets)
    def test_matches_brute_force(self, rows):
        pts = [P(f1, f2, str(i)) for i, (f1, f2) in enumerate(rows)]
        report = pareto_frontier(pts)
        assert {int(pt.model_id) for pt in report.frontier} == brute_force(pts)
        assert len(report.frontier) + report.dominated_count == len(pts)
        for d in report.dominated:
            assert any(dominates(f, d) for f in report.frontier)
        f1s = [pt.f1 for pt in report.frontier]
        assert all(b <= a for a, b in zip(f1s, f1s[1:]))

    @settings(max_examples=200, deadline=None)
    @given(point_sets, st.floats(1e-3, 1e3), st.floats(1e-3, 1e3))
    def test_weighted_sum_minimizer_on_frontier(self, rows, w1, w2):
        pts = [P(f1, f2, str(i)) for i, (f1, f2) in enumerate(rows)]
        scores = [w1 * p.f1 + w2 * p.f2 for p in pts]
        best = min(scores)
        winners = {i for i, s in enumerate(scores) if s == best}
        frontier = {int(pt.model_id) for pt in pareto_frontier(pts).frontier}
        # exact float ties can include a dominated point; a non-dominated one
        # always attains the minimum
        assert winners & frontier

    @settings(max_examples=100, deadline=None)
    @given(point_sets, st.integers(-20, 20), st.booleans())
    def test_scale_invariant(self, rows, k, which):
        # powers of two scale exactly, so no ties are created by rounding
        c = 2.0 ** k
        pts = [P(f1, f2, str(i)) for i, (f1, f2) in enumerate(rows)]
        scaled = [P(p.f1 * c, p.f2, p.model_id) if which else P(p.f1, p.f2 * c, p.model_id)
                  for p in pts]
        assert (set(pareto_frontier(scaled).frontier_ids)
                == set(pareto_frontier(pts).frontier_ids))

    def test_scale_invariant_table2(self):
        base = set(pareto_frontier(table2_points()).frontier_ids)
        for c in (0.01, 3.0, 1e4):
            pts = [ObjectivePoint(p.model_id, p.f1 * c, p.f2, p.p) for p in table2_points()]
            assert set(pareto_frontier(pts).frontier_ids) == base

    def test_json(self, tmp_path):
        report = pareto_frontier(table2_points())
        out = tmp_path / "f.json"
        report.to_json(out)
        doc = json.loads(out.read_text())
        assert set(doc) == {"points", "frontier_ids", "dominated_ids", "duplicate_ids",
                            "marginal_returns", "elbow_id"}
        assert len(doc["points"]) == 24 and len(doc["dominated_ids"]) == 18
        assert doc["elbow_id"] == "area + temp"
        assert sum(pt["pareto"] for pt in doc["points"]) == 6


class TestHeuristics:
    def frontier(self):
        return pareto_frontier(table2_points()).frontier

    def test_marginal_returns_table2(self):
        steps = marginal_returns(self.frontier())
        np.testing.assert_allclose([s.delta_f1 for s in steps[:3]], [86.0, 23.3, 6.6], atol=1e-9)
        assert steps[1].from_point.model_id == "area"
        assert steps[1].to_point.model_id == "area + temp"
        assert all(s.delta_f1 > 0 for s in steps)

    def test_marginal_returns_short(self):
        with pytest.raises(UsageError):
            marginal_returns([P(1, 1)])

    def test_elbow_table2(self):
        knee = elbow(self.frontier())
        assert knee.model_id == "area + temp" and knee.p == 3
        # vertical gap below the chord from (1, 369.6) to (7, 249.4)
        chord = 369.6 + (249.4 - 369.6) / 6 * (3 - 1)
        assert abs(chord - knee.f1 - 69.2333) < 1e-3

    def test_elbow_collinear(self):
        with pytest.warns(RuntimeWarning):
            knee = elbow([P(3, 1, "a"), P(2, 2, "b"), P(1, 3, "c")])
        assert knee.model_id == "b"

    def test_elbow_corner(self):
        pts = [P(100, 1), P(90, 2), P(80, 3), P(20, 4, "corner"), P(18, 5), P(16, 6), P(14, 7)]
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            assert elbow(pts).model_id == "corner"

    def test_elbow_tie_prefers_simpler(self):
        pts = [P(10, 0, "a"), P(4, 1, "b"), P(2, 2, "c"), P(0, 3, "d")]
        # gaps: b -> 10 - 10/3 - 4 = 2.667, c -> 10 - 20/3 - 2 = 1.333
        assert elbow(pts).model_id == "b"
        sym = [P(4, 0, "a"), P(0, 1, "b"), P(-2, 2, "c"), P(-4, 4, "d")]
        # chord f1 = 4 - 2 f2; both interior points lie exactly 2 below it
        assert elbow(sym).model_id == "b"

    def test_elbow_short(self):
        with pytest.raises(UsageError):
            elbow([P(1, 1), P(0, 2)])

    def test_constrained_table2(self):
        assert max_params(TABLE2_N) == 3
        pick = constrained_select(self.frontier(), max_params(TABLE2_N))
        assert pick.model_id == "area + temp"

    def test_constrained_loose(self):
        pick = constrained_select(self.frontier(), 100)
        assert pick.f1 == min(p.f1 for p in self.frontier())

    def test_constrained_empty(self):
        with pytest.raises(UsageError):
            constrained_select(self.frontier(), 0)

    @pytest.mark.parametrize("n,expected", [(15, 0), (16, 1), (30, 1), (31, 2), (49, 3), (60, 3)])
    def test_max_params_strict(self, n, expected):
        assert max_params(n) == expected
        assert expected < n / 15 and expected + 1 >= n / 15
