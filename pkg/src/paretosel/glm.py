"""
Poisson log-link and Gaussian identity-link regression.

Both fitters return a :class:`FittedModel` carrying the quantities the
objective functions consume: the negative log-likelihood, the residual
sum of squares and the Pearson chi-square statistic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.linalg
from scipy.special import gammaln, xlogy

from .data import Dataset, DesignMatrix, ModelSpec, build_design_matrix
from .errors import ConvergenceError, DataError, NumericalError, RankDeficientError

__all__ = [
    "FittedModel",
    "fit_poisson_irls",
    "fit_gaussian_ols",
    "fit_model",
    "fit_models",
    "neg_log_likelihood",
    "pearson_chi_square",
    "poisson_deviance",
    "check_full_rank",
]

POISSON = "poisson"
GAUSSIAN = "gaussian"
FAMILIES = (POISSON, GAUSSIAN)

RANK_TOL = 1e-10


@dataclass(frozen=True)
class FittedModel:
    """Result of fitting one candidate model.

    ``coefficients`` are on the design's (possibly standardized) scale,
    intercept first; ``raw_coefficients`` are mapped back to raw covariates.
    ``neg_log_lik`` always includes the data-only constant (``log y!`` for
    Poisson).
    """

    family: str
    coefficients: np.ndarray
    raw_coefficients: np.ndarray
    response: np.ndarray
    fitted: np.ndarray
    neg_log_lik: float
    rss: float
    pearson_chi_sq: float
    converged: bool
    iterations: int
    spec: ModelSpec | None = None
    deviance_history: tuple = ()
    message: str = ""

    @property
    def p(self) -> int:
        return int(self.coefficients.size)

    @property
    def n(self) -> int:
        return int(self.response.size)

    @property
    def label(self) -> str:
        return self.spec.label if self.spec is not None else f"p={self.p}"


def check_full_rank(X: np.ndarray, what: str = "design") -> None:
    """Raise RankDeficientError unless ``X`` has full column rank.

    Columns are scaled to unit norm first (rank does not depend on column
    scale), then column-pivoted QR is applied; a pivot below ``1e-10`` times
    the largest pivot counts as zero.
    """
    if X.shape[0] < X.shape[1]:
        raise RankDeficientError(
            f"{what} has {X.shape[1]} columns but only {X.shape[0]} rows")
    norms = np.linalg.norm(X, axis=0)
    if np.any(norms == 0):
        raise RankDeficientError(f"{what} has an all-zero column")
    R = scipy.linalg.qr(X / norms, mode="r", pivoting=True)[0]
    diag = np.abs(np.diag(R))
    if diag.size == 0 or diag[0] == 0 or np.any(diag < RANK_TOL * diag[0]):
        raise RankDeficientError(f"{what} is rank deficient")


def poisson_deviance(y, mu) -> float:
    y = np.asarray(y, dtype=float)
    return float(2.0 * np.sum(xlogy(y, y) - xlogy(y, mu) - (y - mu)))


def _poisson_nll(y, mu, include_constant=True) -> float:
    value = np.sum(mu - xlogy(y, mu))
    if include_constant:
        value += np.sum(gammaln(y + 1.0))
    return float(value)


def _gaussian_nll(rss, n, include_constant=True) -> float:
    if rss <= 0:
        return -np.inf
    value = 0.5 * n * np.log(rss / n)
    if include_constant:
        value += 0.5 * n * (1.0 + np.log(2.0 * np.pi))
    return float(value)


def fit_poisson_irls(design: DesignMatrix, response, tol: float = 1e-8,
                     max_iter: int = 100, step_tol: float = 1e-8) -> FittedModel:
    """Maximum-likelihood Poisson regression with log link, by IRLS.

    Starts from ``intercept = log(mean(y) + 1e-8)`` with zero slopes and
    stops when ``|dev - dev_old| / (|dev| + 0.1) < tol`` and the last step
    moved no coefficient by more than ``step_tol``; the deviance is flat near
    the optimum, so the deviance test alone leaves coefficients accurate to
    only about ``sqrt(tol)``. A step that would increase the deviance beyond
    rounding noise is halved until it does not, so the recorded deviance
    sequence is non-increasing up to rounding. Hitting ``max_iter`` returns a model
    with ``converged=False``; it is never reported as converged.

    Raises
    ------
    DataError
        Response is not a vector of non-negative integers of matching length.
    RankDeficientError
        Design lacks full column rank.
    ConvergenceError
        Working weights or deviance became non-finite.
    """
    X = design.values
    y = np.asarray(response, dtype=float)
    if y.shape != (X.shape[0],):
        raise DataError(f"response length {y.size} does not match design rows {X.shape[0]}")
    if np.any(~np.isfinite(y)) or np.any(y < 0) or np.any(y != np.round(y)):
        raise DataError("Poisson response must be non-negative integers")
    check_full_rank(X)

    beta = np.zeros(X.shape[1])
    beta[0] = np.log(y.mean() + 1e-8)
    eta = X @ beta
    mu = np.exp(eta)
    dev = poisson_deviance(y, mu)
    history = [dev]
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        w = mu
        if not np.all(np.isfinite(w)) or np.any(w <= 0):
            raise ConvergenceError("non-finite or zero working weights in IRLS")
        z = eta + (y - mu) / mu
        sw = np.sqrt(w)
        beta_new = scipy.linalg.lstsq(X * sw[:, None], z * sw)[0]

        step = beta_new - beta
        noise = 64 * np.finfo(float).eps * (abs(dev) + 1.0)
        for _ in range(60):
            eta_new = X @ (beta + step)
            with np.errstate(over="ignore"):
                mu_new = np.exp(eta_new)
            dev_new = poisson_deviance(y, mu_new) if np.all(np.isfinite(mu_new)) else np.inf
            if np.isfinite(dev_new) and dev_new <= dev + noise:
                break
            step = step / 2.0
        else:
            raise ConvergenceError("IRLS step halving failed to reduce the deviance")

        beta, eta, mu = beta + step, eta_new, mu_new
        change = abs(dev_new - dev) / (abs(dev_new) + 0.1)
        dev = dev_new
        history.append(dev)
        if change < tol and np.max(np.abs(step), initial=0.0) < step_tol:
            converged = True
            break

    rss = float(np.sum((y - mu) ** 2))
    return FittedModel(
        family=POISSON,
        coefficients=beta,
        raw_coefficients=design.to_raw_scale(beta),
        response=y,
        fitted=mu,
        neg_log_lik=_poisson_nll(y, mu),
        rss=rss,
        pearson_chi_sq=float(np.sum((y - mu) ** 2 / mu)),
        converged=converged,
        iterations=it,
        spec=design.spec,
        deviance_history=tuple(history),
        message="" if converged else f"no convergence in {max_iter} iterations",
    )


def fit_gaussian_ols(design: DesignMatrix, response) -> FittedModel:
    """Ordinary least squares; ``neg_log_lik`` uses ``sigma^2 = rss / n``."""
    X = design.values
    y = np.asarray(response, dtype=float)
    n, p = X.shape
    if y.shape != (n,):
        raise DataError(f"response length {y.size} does not match design rows {n}")
    if n <= p:
        raise DataError(f"OLS needs n > p (n={n}, p={p})")
    check_full_rank(X)
    beta = scipy.linalg.lstsq(X, y)[0]
    mu = X @ beta
    rss = float(np.sum((y - mu) ** 2))
    return FittedModel(
        family=GAUSSIAN,
        coefficients=beta,
        raw_coefficients=design.to_raw_scale(beta),
        response=y,
        fitted=mu,
        neg_log_lik=_gaussian_nll(rss, n),
        rss=rss,
        pearson_chi_sq=rss,
        converged=True,
        iterations=1,
        spec=design.spec,
    )


def neg_log_likelihood(fit: FittedModel, include_constant: bool = True) -> float:
    """Negative log-likelihood of a fitted model.

    For Poisson, ``sum(mu - y log mu) + sum(log y!)``; the constant is the same
    for every model fit to the same data and can be dropped with
    ``include_constant=False``. For Gaussian the dropped constant is
    ``n/2 (1 + log 2 pi)``.
    """
    if not fit.converged:
        raise NumericalError(f"model {fit.label!r} did not converge")
    if fit.family == POISSON:
        return _poisson_nll(fit.response, fit.fitted, include_constant)
    return _gaussian_nll(fit.rss, fit.n, include_constant)


def pearson_chi_square(fit: FittedModel) -> float:
    """``sum((y - mu)^2 / mu)`` for a converged Poisson fit."""
    if not fit.converged:
        raise NumericalError(f"model {fit.label!r} did not converge")
    if fit.family != POISSON:
        raise DataError("Pearson chi-square is defined here for Poisson fits only")
    mu = fit.fitted
    if np.any(mu <= 0):
        raise NumericalError("fitted mean of zero; Pearson chi-square undefined")
    return float(np.sum((fit.response - mu) ** 2 / mu))


def fit_model(data: Dataset, spec: ModelSpec, family: str = POISSON,
              standardize: bool = True) -> FittedModel:
    """Build the design for ``spec`` and fit it under ``family``."""
    if family not in FAMILIES:
        raise DataError(f"unknown family {family!r}; choose from {FAMILIES}")
    design = build_design_matrix(data, spec, standardize=standardize)
    if family == POISSON:
        return fit_poisson_irls(design, data.response)
    return fit_gaussian_ols(design, data.response)


def _failed(spec: ModelSpec, family: str, n: int, response, exc: Exception) -> FittedModel:
    nan = np.full(spec.p, np.nan)
    return FittedModel(
        family=family, coefficients=nan, raw_coefficients=nan,
        response=np.asarray(response, dtype=float), fitted=np.full(n, np.nan),
        neg_log_lik=np.nan, rss=np.nan, pearson_chi_sq=np.nan,
        converged=False, iterations=0, spec=spec, message=str(exc),
    )


def fit_models(data: Dataset, specs: Sequence[ModelSpec], family: str = POISSON,
               standardize: bool = True) -> list:
    """Fit every spec; numerical failures become ``converged=False`` entries.

    Data errors (unknown covariate, invalid response) still raise, since they
    affect every model alike.
    """
    fits = []
    for spec in specs:
        try:
            fits.append(fit_model(data, spec, family, standardize))
        except NumericalError as exc:
            fits.append(_failed(spec, family, data.n, data.response, exc))
    return fits
