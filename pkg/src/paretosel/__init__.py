"""Model selection as a two-objective (fit vs. complexity) optimization problem."""

from .data import (Dataset, DesignMatrix, ModelSpec, build_design_matrix,
                   enumerate_hierarchical_models, load_dataset, load_model_list,
                   paper_model_list, parse_model_formula)
from .errors import (ConvergenceError, DataError, NumericalError, ParetoselError,
                     RankDeficientError, UsageError)
from .glm import (FittedModel, fit_gaussian_ols, fit_model, fit_models,
                  fit_poisson_irls, neg_log_likelihood, pearson_chi_square)
from .objectives import (CriterionSpec, ObjectivePoint, PenaltySpec, criterion,
                         criterion_spec, estimate_c_hat, evaluate_criterion,
                         mallows_cp_f1, objective_point, penalty, rank_models,
                         sensitivity_report, weighted_objective)
from .pareto import (FrontierReport, constrained_select, dominates, elbow,
                     marginal_returns, max_params, pareto_frontier)
from .penalized import PathPoint, fit_lasso, fit_ridge, regularization_path

__version__ = "0.1.0"
