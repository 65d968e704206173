"""
Pareto frontier of the avian species richness models
====================================================

Twenty-four Poisson regressions of bird species counts on state area,
temperature and precipitation were scored by their negative log-likelihood
(f1) and parameter count (f2). The table ships with the package; here we
find which models are Pareto optimal and draw the tradeoff.
"""

# %%
# Load the published (f1, f2) values. Each point is one candidate model.
from pathlib import Path

from paretosel.fixtures import table2_points
from paretosel.pareto import pareto_frontier
from paretosel.svgplot import render_frontier_svg

points = table2_points()
print(f"{len(points)} candidate models")

# %%
# A model is on the frontier when no other model fits at least as well with
# no more parameters (and strictly better in one of the two).
report = pareto_frontier(points)
for pt in report.frontier:
    print(f"p={pt.p}  f1={pt.f1:6.1f}  {pt.model_id}")
print(f"{report.dominated_count} dominated models")

# %%
# No five-parameter model makes it: the best of them (f1 = 254.0) is beaten
# by the four-parameter area + precip + temp model (f1 = 253.7).
five = [pt for pt in points if pt.p == 5]
print(min(five, key=lambda pt: pt.f1))

# %%
# Write the scatter: open circles are dominated, the filled polyline is the
# frontier.
out = Path("table2_frontier.svg")
out.write_text(render_frontier_svg(report))
print(f"wrote {out}")
