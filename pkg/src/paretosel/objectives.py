"""
Weighted-sum model selection criteria.

Every criterion here is ``w1 * f1 + w2 * f2`` where ``f1`` measures lack of
fit (negative log-likelihood, or residual sum of squares for ridge/LASSO)
and ``f2 = sum_j |theta_j - mu_j|**gamma`` measures complexity. With
``gamma = 0`` the complexity term is the parameter count, and the familiar
information criteria are particular weight choices:

=========  ===========  =================  =====
criterion  w1           w2                 gamma
=========  ===========  =================  =====
AIC        2            2                  0
AICc       2            2 n / (n - p - 1)  0
QAIC       2 / c_hat    2                  0
QAICc      2 / c_hat    2 n / (n - p - 1)  0
BIC        2            log n              0
RIDGE      1            user               2
LASSO      1            user               1
=========  ===========  =================  =====

Positive weights guarantee that the minimizing model is Pareto optimal in
(f1, f2).
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, NamedTuple, Sequence, Union

import numpy as np

from .errors import DataError, NumericalError, UsageError
from .glm import FittedModel, pearson_chi_square

__all__ = [
    "PenaltySpec",
    "CriterionSpec",
    "ObjectivePoint",
    "Weights",
    "RankedRow",
    "RankedTable",
    "SensitivityReport",
    "CRITERIA",
    "penalty",
    "weighted_objective",
    "criterion",
    "criterion_spec",
    "evaluate_criterion",
    "mallows_cp_f1",
    "estimate_c_hat",
    "objective_point",
    "rank_models",
    "sensitivity_report",
]

CRITERIA = ("AIC", "AICc", "QAIC", "QAICc", "BIC", "RIDGE", "LASSO", "CUSTOM")
_BY_UPPER = {name.upper(): name for name in CRITERIA}

NEG_LOG_LIK = "neg-log-lik"
RSS = "rss"


@dataclass(frozen=True)
class PenaltySpec:
    """Norm degree ``gamma`` and location ``mu`` of the complexity penalty.

    ``penalize_intercept`` defaults to ``gamma == 0``: the count penalty
    includes the intercept (so it equals ``p``), the norm penalties skip it.
    """

    gamma: float = 0.0
    mu: tuple | None = None
    penalize_intercept: bool | None = None

    def __post_init__(self):
        if not self.gamma >= 0:
            raise UsageError(f"gamma must be >= 0, got {self.gamma}")
        if self.penalize_intercept is None:
            object.__setattr__(self, "penalize_intercept", self.gamma == 0)


def penalty(coefficients, spec: PenaltySpec | None = None) -> float:
    """Complexity ``sum_j |theta_j - mu_j|**gamma``.

    ``coefficients`` is the full vector with the intercept first. For
    ``gamma = 0`` every term counts as 1, zeros included, so the result is a
    parameter count.
    """
    spec = spec or PenaltySpec()
    theta = np.asarray(coefficients, dtype=float).ravel()
    if spec.mu is not None:
        mu = np.asarray(spec.mu, dtype=float).ravel()
        if mu.shape != theta.shape:
            raise UsageError(
                f"mu has length {mu.size}, coefficients have length {theta.size}")
    else:
        mu = np.zeros_like(theta)
    if not spec.penalize_intercept:
        theta, mu = theta[1:], mu[1:]
    if spec.gamma == 0:
        return float(theta.size)
    return float(np.sum(np.abs(theta - mu) ** spec.gamma))


def weighted_objective(f1: float, f2: float, w1: float, w2: float,
                       allow_zero: bool = False) -> float:
    """``w1 * f1 + w2 * f2``.

    Weights must be strictly positive, which is what makes the minimizer
    Pareto optimal. ``allow_zero`` admits ``w = 0`` for plain evaluation
    (e.g. an unpenalized LASSO objective).
    """
    for name, w in (("w1", w1), ("w2", w2)):
        if not math.isfinite(w) or w < 0 or (w == 0 and not allow_zero):
            raise UsageError(f"{name} must be positive, got {w}")
    return w1 * f1 + w2 * f2


class Weights(NamedTuple):
    w1: float
    w2: float
    gamma: float


def _small_sample_factor(n, p):
    if n - p - 1 <= 0:
        raise UsageError(f"small-sample correction needs n - p - 1 > 0 (n={n}, p={p})")
    return 2.0 * n / (n - p - 1)


@dataclass(frozen=True)
class CriterionSpec:
    """One weighted-sum criterion.

    ``w1`` and ``w2`` are numbers or rules ``rule(n, p, c_hat) -> float``,
    resolved per model since AICc-type weights depend on ``p``.
    """

    name: str
    w1: Union[float, Callable]
    w2: Union[float, Callable]
    gamma: float = 0.0
    fit_objective: str = NEG_LOG_LIK
    c_hat: float | None = None

    def __post_init__(self):
        if self.fit_objective not in (NEG_LOG_LIK, RSS):
            raise UsageError(f"unknown fit objective {self.fit_objective!r}")
        if self.c_hat is not None and not self.c_hat > 0:
            raise UsageError(f"c_hat must be positive, got {self.c_hat}")

    @property
    def needs_c_hat(self) -> bool:
        return self.name in ("QAIC", "QAICc")

    def with_c_hat(self, c_hat: float) -> "CriterionSpec":
        return CriterionSpec(self.name, self.w1, self.w2, self.gamma,
                             self.fit_objective, c_hat)

    def resolve(self, n: int | None, p: int) -> Weights:
        if self.needs_c_hat and self.c_hat is None:
            raise UsageError(f"{self.name} requires c_hat")

        def value(w):
            if callable(w):
                if n is None:
                    raise UsageError(f"{self.name} requires the sample size n")
                return float(w(n, p, self.c_hat))
            return float(w)

        return Weights(value(self.w1), value(self.w2), float(self.gamma))


def criterion(name: str, w2: float | None = None, c_hat: float | None = None,
              w1: float | None = None, gamma: float | None = None) -> CriterionSpec:
    """Build a named criterion (case-insensitive).

    RIDGE and LASSO need ``w2``; CUSTOM needs ``w1``, ``w2`` and ``gamma``.
    """
    key = _BY_UPPER.get(str(name).upper())
    if key is None:
        raise UsageError(f"unknown criterion {name!r}; valid: {', '.join(CRITERIA)}")
    if key == "AIC":
        return CriterionSpec(key, 2.0, 2.0)
    if key == "AICc":
        return CriterionSpec(key, 2.0, lambda n, p, c: _small_sample_factor(n, p))
    if key == "QAIC":
        return CriterionSpec(key, lambda n, p, c: 2.0 / c, 2.0, c_hat=c_hat)
    if key == "QAICc":
        return CriterionSpec(key, lambda n, p, c: 2.0 / c,
                             lambda n, p, c: _small_sample_factor(n, p), c_hat=c_hat)
    if key == "BIC":
        return CriterionSpec(key, 2.0, lambda n, p, c: math.log(n))
    if key in ("RIDGE", "LASSO"):
        if w2 is None:
            raise UsageError(f"{key} requires a user-supplied w2")
        return CriterionSpec(key, 1.0, float(w2), 2.0 if key == "RIDGE" else 1.0, RSS)
    if w1 is None or w2 is None or gamma is None:
        raise UsageError("CUSTOM requires w1, w2 and gamma")
    return CriterionSpec(key, float(w1), float(w2), float(gamma))


def criterion_spec(name: str, n: int, p: int, c_hat: float | None = None,
                   w2: float | None = None) -> Weights:
    """Resolved ``(w1, w2, gamma)`` of a named criterion for sample size ``n``
    and parameter count ``p``."""
    return criterion(name, w2=w2, c_hat=c_hat).resolve(n, p)


@dataclass(frozen=True)
class ObjectivePoint:
    """A candidate model placed in (fit, complexity) space."""

    model_id: str
    f1: float
    f2: float
    p: int | None = None

    def __post_init__(self):
        if self.p is None:
            object.__setattr__(self, "p", int(round(self.f2)))

    @property
    def label(self) -> str:
        return self.model_id


def _f1(fit: FittedModel, crit: CriterionSpec) -> float:
    return fit.rss if crit.fit_objective == RSS else fit.neg_log_lik


def evaluate_criterion(fit: FittedModel, crit: CriterionSpec) -> float:
    """Score a fitted model: ``w1 * f1(fit) + w2 * penalty(coefficients)``."""
    if not fit.converged:
        raise NumericalError(f"model {fit.label!r} did not converge")
    w1, w2, gamma = crit.resolve(fit.n, fit.p)
    f2 = penalty(fit.coefficients, PenaltySpec(gamma))
    return weighted_objective(_f1(fit, crit), f2, w1, w2,
                              allow_zero=crit.name in ("RIDGE", "LASSO"))


def objective_point(fit: FittedModel, gamma: float = 0.0,
                    fit_objective: str = NEG_LOG_LIK) -> ObjectivePoint:
    """Place a fitted model in objective space."""
    f1 = fit.rss if fit_objective == RSS else fit.neg_log_lik
    return ObjectivePoint(fit.label, float(f1),
                          penalty(fit.coefficients, PenaltySpec(gamma)), fit.p)


def mallows_cp_f1(sub: FittedModel, full: FittedModel, n: int | None = None) -> float:
    """Fit term of Mallows' Cp in the form ``rss_sub / rss_full - n``.

    This is the ratio form without the usual ``(n - p_full)`` scaling of the
    full-model residual variance, so values differ from textbook Cp.
    """
    if sub.family != "gaussian" or full.family != "gaussian":
        raise DataError("Mallows' Cp needs Gaussian fits")
    if sub.n != full.n:
        raise DataError("sub and full models were fit to different data")
    scale = float(full.response @ full.response)
    if not full.rss > 1e-24 * max(scale, 1.0):
        raise NumericalError("full-model residual sum of squares is (numerically) zero")
    n = sub.n if n is None else n
    return sub.rss / full.rss - n


def estimate_c_hat(fits: Sequence[FittedModel]) -> float:
    """Overdispersion ``chi^2 / df`` of the most complex converged model."""
    ok = [f for f in fits if f.converged]
    if not ok:
        raise NumericalError("no converged model to estimate c_hat from")
    full = max(ok, key=lambda f: f.p)
    df = full.n - full.p
    if df <= 0:
        raise UsageError("most complex model leaves no residual degrees of freedom")
    return pearson_chi_square(full) / df


@dataclass(frozen=True)
class RankedRow:
    rank: int
    label: str
    p: int
    f1: float
    f2: float
    score: float
    delta: float


@dataclass(frozen=True)
class RankedTable:
    """Candidate models sorted by a criterion, best first."""

    criterion: str
    rows: tuple

    @property
    def top(self) -> RankedRow:
        return self.rows[0]

    def format(self) -> str:
        """Human-readable table, one decimal place."""
        width = max(len("model"), *(len(r.label) for r in self.rows))
        head = f"{'rank':>4}  {'model':<{width}}  {'p':>2}  {'f1':>9}  {'f2':>7}  " \
               f"{self.criterion:>9}  {'delta':>7}"
        lines = [head]
        for r in self.rows:
            lines.append(
                f"{r.rank:>4}  {r.label:<{width}}  {r.p:>2}  {r.f1:>9.1f}  {r.f2:>7.1f}  "
                f"{r.score:>9.1f}  {r.delta:>7.1f}")
        return "\n".join(lines)

    def to_csv(self, path) -> None:
        with Path(path).open("w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["rank", "label", "p", "f1", "f2", "score", "delta"])
            for r in self.rows:
                w.writerow([r.rank, r.label, r.p, repr(r.f1), repr(r.f2),
                            repr(r.score), repr(r.delta)])


def _scored(items, crit: CriterionSpec, n: int | None):
    items = list(items)
    if not items:
        raise UsageError("no models to rank")
    fits = [m for m in items if isinstance(m, FittedModel)]
    if crit.needs_c_hat and crit.c_hat is None:
        if len(fits) != len(items):
            raise UsageError(f"{crit.name} on objective points requires an explicit c_hat")
        crit = crit.with_c_hat(estimate_c_hat(fits))
    out = []
    for m in items:
        if isinstance(m, FittedModel):
            if not m.converged:
                continue
            pt = objective_point(m, crit.gamma, crit.fit_objective)
            score = evaluate_criterion(m, crit)
        else:
            if crit.gamma != 0:
                raise UsageError(
                    f"{crit.name} needs coefficients; objective points carry counts only")
            pt = m
            w1, w2, _ = crit.resolve(n, pt.p)
            score = weighted_objective(pt.f1, pt.f2, w1, w2)
        out.append((pt, score))
    if not out:
        raise NumericalError("no converged models to rank")
    return out


def rank_models(items: Iterable, crit: CriterionSpec, n: int | None = None) -> RankedTable:
    """Rank fitted models (or precomputed objective points) by ``crit``.

    Objective points need ``n`` for criteria whose weights depend on it.
    Ties are broken by smaller ``p``, then smaller ``f1`` and ``f2`` (so a
    tie can never favour a dominated model), then label. Non-converged fits are
    skipped.
    """
    scored = _scored(items, crit, n)
    scored.sort(key=lambda ps: (ps[1], ps[0].p, ps[0].f1, ps[0].f2, ps[0].model_id))
    best = scored[0][1]
    rows = tuple(
        RankedRow(i, pt.model_id, pt.p, pt.f1, pt.f2, score, score - best)
        for i, (pt, score) in enumerate(scored, start=1))
    return RankedTable(crit.name, rows)


@dataclass(frozen=True)
class SensitivityReport:
    winners: tuple  # of (criterion name, RankedRow)

    @property
    def agree(self) -> bool:
        return len({row.label for _, row in self.winners}) == 1

    def format(self) -> str:
        width = max(len(name) for name, _ in self.winners)
        lines = [f"{name:<{width}}  {row.label}  (score {row.score:.1f})"
                 for name, row in self.winners]
        lines.append(f"agreement: {'yes' if self.agree else 'no'}")
        return "\n".join(lines)


def sensitivity_report(items: Iterable, criteria: Sequence[CriterionSpec],
                       n: int | None = None) -> SensitivityReport:
    """Top model under each criterion, and whether they all agree."""
    if len(criteria) < 2:
        raise UsageError("sensitivity analysis needs at least two criteria")
    items = list(items)
    return SensitivityReport(tuple(
        (c.name, rank_models(items, c, n).top) for c in criteria))
