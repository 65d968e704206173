"""
Choosing from the frontier after the fact
=========================================

Without committing to weights up front, look at what each extra parameter
buys in fit, then pick a model by one of several rules.
"""

# %%
from paretosel.fixtures import TABLE2_N, table2_points
from paretosel.pareto import constrained_select, max_params, pareto_frontier

report = pareto_frontier(table2_points())

# %%
# Marginal returns: fit improvement per frontier step. The first step (adding
# area) is worth 86 units; the gains fall off quickly after that.
for step in report.marginal_returns:
    print(f"{step.from_point.model_id:>45} -> {step.to_point.model_id:<45} "
          f"gain {step.delta_f1:5.1f} for {step.delta_f2:.0f} parameter(s)")

# %%
# The elbow is the frontier point furthest below the straight line joining
# the simplest and the most complex frontier models.
print("elbow:", report.elbow.model_id)

# %%
# A data-budget rule: keep p < n / 15. With 49 observations that allows
# three parameters.
p_max = max_params(TABLE2_N)
print(f"p_max = {p_max}:", constrained_select(report.frontier, p_max).model_id)
