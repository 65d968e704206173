"""
Ridge and LASSO least squares with an unpenalized intercept.

Both solvers minimize::

    sum_i (y_i - b0 - x_i' b)**2 + w2 * sum_j |b_j|**gamma

with gamma = 2 (ridge) or 1 (LASSO). There is no 1/(2n) factor on the sum
of squares, so the LASSO soft-threshold level is ``w2 / 2`` and ``w2`` is
not interchangeable with the ``alpha`` of tools that rescale the loss.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np
import scipy.linalg

from .data import DesignMatrix
from .errors import ConvergenceError, DataError, UsageError
from .glm import check_full_rank

__all__ = [
    "PathPoint",
    "fit_ridge",
    "fit_lasso",
    "regularization_path",
    "soft_threshold",
    "lasso_kkt_violation",
    "write_path_csv",
]


@dataclass(frozen=True)
class PathPoint:
    """Solution of one penalized fit.

    ``objective == rss + w2 * penalty_value``.
    """

    w2: float
    gamma: float
    coefficients: np.ndarray
    raw_coefficients: np.ndarray
    rss: float
    penalty_value: float
    objective: float
    iterations: int = 0


def soft_threshold(x, t):
    return np.sign(x) * np.maximum(np.abs(x) - t, 0.0)


def _centered(design: DesignMatrix, response):
    X = design.values
    y = np.asarray(response, dtype=float)
    if y.shape != (X.shape[0],):
        raise DataError(f"response length {y.size} does not match design rows {X.shape[0]}")
    if not np.allclose(X[:, 0], 1.0):
        raise DataError("first design column must be the intercept")
    Z = X[:, 1:]
    z_mean = Z.mean(axis=0)
    y_mean = y.mean()
    return Z - z_mean, y - y_mean, z_mean, y_mean


def _check_w2(w2):
    if not (np.isfinite(w2) and w2 >= 0):
        raise UsageError(f"w2 must be a finite non-negative number, got {w2}")


def _point(design, response, slopes, z_mean, y_mean, w2, gamma, iterations=0):
    beta = np.concatenate([[y_mean - z_mean @ slopes], slopes])
    resid = np.asarray(response, dtype=float) - design.values @ beta
    rss = float(resid @ resid)
    pen = float(np.sum(np.abs(slopes) ** gamma))
    return PathPoint(float(w2), float(gamma), beta, design.to_raw_scale(beta),
                     rss, pen, rss + w2 * pen, iterations)


def fit_ridge(design: DesignMatrix, response, w2: float) -> PathPoint:
    """Ridge regression by the penalized normal equations
    ``(Z'Z + w2 I) b = Z'y`` on centered columns."""
    _check_w2(w2)
    Zc, yc, z_mean, y_mean = _centered(design, response)
    k = Zc.shape[1]
    if k == 0:
        return _point(design, response, np.zeros(0), z_mean, y_mean, w2, 2.0)
    if w2 == 0:
        check_full_rank(Zc, "centered design")
    A = Zc.T @ Zc + w2 * np.eye(k)
    slopes = scipy.linalg.solve(A, Zc.T @ yc, assume_a="pos")
    return _point(design, response, slopes, z_mean, y_mean, w2, 2.0)


def fit_lasso(design: DesignMatrix, response, w2: float, tol: float = 1e-9,
              max_cycles: int = 10_000, init=None) -> PathPoint:
    """LASSO by cyclic coordinate descent with soft-thresholding.

    Converged when no slope moves by more than ``tol`` during a full cycle.
    ``init`` warm-starts the slopes (intercept excluded).

    Raises
    ------
    ConvergenceError
        ``max_cycles`` exhausted.
    """
    _check_w2(w2)
    Zc, yc, z_mean, y_mean = _centered(design, response)
    k = Zc.shape[1]
    if w2 == 0 and k:
        check_full_rank(Zc, "centered design")
    col_sq = np.einsum("ij,ij->j", Zc, Zc)
    if np.any(col_sq == 0):
        raise DataError("design has a constant non-intercept column")
    b = np.zeros(k) if init is None else np.array(init, dtype=float)
    r = yc - Zc @ b
    half = w2 / 2.0
    for cycle in range(1, max_cycles + 1):
        max_change = 0.0
        for j in range(k):
            old = b[j]
            rho = Zc[:, j] @ r + col_sq[j] * old
            new = soft_threshold(rho, half) / col_sq[j]
            if new != old:
                r -= Zc[:, j] * (new - old)
                b[j] = new
                max_change = max(max_change, abs(new - old))
        if max_change < tol:
            return _point(design, response, b, z_mean, y_mean, w2, 1.0, cycle)
    raise ConvergenceError(f"LASSO did not converge in {max_cycles} cycles (w2={w2})")


def lasso_kkt_violation(design: DesignMatrix, response, point: PathPoint) -> float:
    """Largest violation of the LASSO optimality conditions.

    Active slopes need ``2 z_j' r = w2 sign(b_j)``; zero slopes need
    ``|2 z_j' r| <= w2``.
    """
    X = design.values
    r = np.asarray(response, dtype=float) - X @ point.coefficients
    Z = X[:, 1:] - X[:, 1:].mean(axis=0)
    grad = 2.0 * Z.T @ r
    b = point.coefficients[1:]
    active = b != 0
    viol = np.zeros_like(b)
    viol[active] = np.abs(grad[active] - point.w2 * np.sign(b[active]))
    viol[~active] = np.maximum(np.abs(grad[~active]) - point.w2, 0.0)
    return float(viol.max(initial=0.0))


def regularization_path(design: DesignMatrix, response, gamma: int,
                        w2_grid: Sequence[float]) -> list:
    """Solve along an ascending grid of ``w2`` values.

    LASSO points are warm-started from the previous grid value.
    """
    grid = [float(w) for w in w2_grid]
    if not grid:
        raise UsageError("w2 grid is empty")
    if any(w < 0 or not np.isfinite(w) for w in grid):
        raise UsageError("w2 grid values must be finite and non-negative")
    if any(b < a for a, b in zip(grid, grid[1:])):
        raise UsageError("w2 grid must be ascending")
    if gamma == 2:
        return [fit_ridge(design, response, w) for w in grid]
    if gamma == 1:
        path, init = [], None
        for w in grid:
            pt = fit_lasso(design, response, w, init=init)
            init = pt.coefficients[1:]
            path.append(pt)
        return path
    raise UsageError(f"gamma must be 1 (LASSO) or 2 (ridge), got {gamma}")


def write_path_csv(points: Sequence[PathPoint], path, column_names=None) -> None:
    """Columns: w2, rss, penalty, objective, then one per coefficient."""
    k = points[0].coefficients.size if points else 0
    names = list(column_names) if column_names is not None else [f"b{j}" for j in range(k)]
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["w2", "rss", "penalty", "objective", *names])
        for pt in points:
            w.writerow([repr(pt.w2), repr(pt.rss), repr(pt.penalty_value),
                        repr(pt.objective), *(repr(float(c)) for c in pt.coefficients)])
