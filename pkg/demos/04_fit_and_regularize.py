"""
Fitting candidates from data, and regularization paths
======================================================

The avian dataset is not bundled, so this script simulates a dataset with
the same shape, fits every hierarchical linear/quadratic model by IRLS, and
then traces ridge and LASSO paths on a Gaussian response.
"""

# %%
import numpy as np

from paretosel.data import (Dataset, ModelSpec, build_design_matrix,
                            enumerate_hierarchical_models)
from paretosel.glm import fit_models
from paretosel.objectives import criterion, objective_point, rank_models
from paretosel.pareto import pareto_frontier
from paretosel.penalized import regularization_path

rng = np.random.default_rng(1)
n = 49
cov = {"area": rng.lognormal(11, 0.8, n), "temp": rng.normal(12, 4, n),
       "precip": rng.normal(900, 300, n)}
z = {k: (v - v.mean()) / v.std(ddof=1) for k, v in cov.items()}
y = rng.poisson(np.exp(5 + 0.15 * z["area"] + 0.1 * z["temp"] - 0.05 * z["temp"] ** 2))
data = Dataset(y, cov, response_name="richness")

# %%
# All 27 hierarchical models of three covariates.
fits = fit_models(data, enumerate_hierarchical_models(data.covariate_names))
print(rank_models(fits, criterion("AIC")).format())

# %%
report = pareto_frontier([objective_point(f) for f in fits])
print("frontier:", report.frontier_ids)

# %%
# Ridge and LASSO on a continuous response. Note the loss is the plain sum of
# squares, so LASSO zeroes a slope once w2 exceeds 2 |x_j' r|.
g = 2 + 1.5 * z["area"] - 0.8 * z["temp"] + rng.normal(scale=0.5, size=n)
design = build_design_matrix(Dataset(g, cov), ModelSpec((("area", 1), ("precip", 1), ("temp", 1))))
for gamma, name in ((2, "ridge"), (1, "lasso")):
    print(name)
    for pt in regularization_path(design, g, gamma, [0, 1, 10, 50, 100, 200]):
        print(f"  w2={pt.w2:6.1f}  rss={pt.rss:8.3f}  penalty={pt.penalty_value:7.3f}  "
              f"slopes={np.round(pt.coefficients[1:], 3)}")
