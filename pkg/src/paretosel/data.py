"""
Dataset ingestion, model formulas and design matrices.

A candidate model is an intercept plus an ordered set of terms, each term
being a covariate raised to degree 1 or 2. Formulas use a tiny grammar::

    area + precip + precip^2 + temp + temp^2

The intercept is implicit; ``""`` (or ``"1"``) is the intercept-only model.
A quadratic term never implies its linear term.
"""

from __future__ import annotations

import csv
import itertools
import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import DataError

__all__ = [
    "Dataset",
    "ModelSpec",
    "DesignMatrix",
    "load_dataset",
    "parse_model_formula",
    "load_model_list",
    "paper_model_list",
    "enumerate_hierarchical_models",
    "build_design_matrix",
]

NULL_LABEL = "1"


def _frozen(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Dataset:
    """Immutable observation table.

    Parameters
    ----------
    response : ndarray
        Response vector of length ``n``.
    covariates : mapping of str to ndarray
        Numeric covariate columns, each of length ``n``.
    response_name : str
        Column name of the response.
    labels : mapping of str to tuple of str
        Non-numeric identifier columns (e.g. a state name), kept verbatim.
    """

    response: np.ndarray
    covariates: Mapping[str, np.ndarray]
    response_name: str = "y"
    labels: Mapping[str, tuple] = field(default_factory=dict)

    def __post_init__(self):
        response = _frozen(self.response)
        if response.ndim != 1 or response.size == 0:
            raise DataError("response must be a non-empty vector")
        if not np.all(np.isfinite(response)):
            raise DataError("response contains non-finite values")
        n = response.size
        cols = {}
        for name, col in self.covariates.items():
            if not isinstance(name, str) or not name.strip():
                raise DataError("covariate names must be non-empty strings")
            arr = _frozen(col)
            if arr.shape != (n,):
                raise DataError(
                    f"covariate {name!r} has length {arr.size}, expected {n}")
            cols[name] = arr
        for name, col in self.labels.items():
            if len(col) != n:
                raise DataError(
                    f"label column {name!r} has length {len(col)}, expected {n}")
        object.__setattr__(self, "response", response)
        object.__setattr__(self, "covariates", MappingProxyType(cols))
        object.__setattr__(
            self, "labels", MappingProxyType({k: tuple(v) for k, v in self.labels.items()}))

    @property
    def n(self) -> int:
        return int(self.response.size)

    @property
    def covariate_names(self) -> tuple:
        return tuple(self.covariates)

    def check_counts(self) -> None:
        """Raise DataError unless the response is a vector of non-negative integers."""
        y = self.response
        if np.any(y < 0) or np.any(y != np.round(y)):
            raise DataError(
                f"response {self.response_name!r} must hold non-negative integer counts")


def _parse_float(text: str):
    try:
        value = float(text)
    except ValueError:
        return None
    return value


def load_dataset(path, response_column: str) -> Dataset:
    """Read a header-first CSV into a :class:`Dataset`.

    Every column must be either fully numeric or fully non-numeric. Fully
    non-numeric columns are kept as identifier labels; a numeric column with
    a stray text cell is an error that names the row and column. Row numbers
    in messages are 1-based file lines (the header is line 1).
    """
    path = Path(path)
    if not path.is_file():
        raise DataError(f"{path}: no such file")
    with path.open(newline="", encoding="utf-8-sig") as fh:
        rows = list(csv.reader(fh))
    rows = [r for r in rows if any(cell.strip() for cell in r)]
    if not rows:
        raise DataError(f"{path}: empty file, header row expected")
    header = [h.strip() for h in rows[0]]
    if len(set(header)) != len(header) or not all(header):
        raise DataError(f"{path}: header names must be unique and non-empty")
    if response_column not in header:
        raise DataError(
            f"{path}: response column {response_column!r} not in header {header}")
    body = rows[1:]
    if not body:
        raise DataError(f"{path}: no data rows")
    for i, row in enumerate(body, start=2):
        if len(row) != len(header):
            raise DataError(
                f"{path}: line {i} has {len(row)} fields, header has {len(header)}")

    numeric, labels = {}, {}
    for j, name in enumerate(header):
        cells = [row[j].strip() for row in body]
        parsed = [_parse_float(c) for c in cells]
        if all(v is None for v in parsed) and name != response_column:
            labels[name] = tuple(cells)
            continue
        for i, (cell, v) in enumerate(zip(cells, parsed), start=2):
            if v is None:
                raise DataError(
                    f"{path}: line {i}, column {name!r}: cannot parse {cell!r} as a number")
            if not math.isfinite(v):
                raise DataError(
                    f"{path}: line {i}, column {name!r}: non-finite value {cell!r}")
        numeric[name] = parsed

    response = numeric.pop(response_column)
    return Dataset(response=response, covariates=numeric,
                   response_name=response_column, labels=labels)


@dataclass(frozen=True)
class ModelSpec:
    """A candidate linear predictor: intercept plus ``(covariate, degree)`` terms.

    Terms are stored in canonical order (name, then degree), so two specs
    built from differently ordered formulas compare equal.
    """

    terms: tuple = ()

    def __post_init__(self):
        terms = []
        for name, degree in self.terms:
            if degree not in (1, 2):
                raise DataError(f"term {name!r}: degree must be 1 or 2, got {degree}")
            terms.append((str(name), int(degree)))
        if len(set(terms)) != len(terms):
            raise DataError(f"duplicate terms in {terms}")
        object.__setattr__(self, "terms", tuple(sorted(terms)))

    @property
    def p(self) -> int:
        """Parameter count, intercept included."""
        return 1 + len(self.terms)

    @property
    def label(self) -> str:
        if not self.terms:
            return NULL_LABEL
        return " + ".join(_term_label(t) for t in self.terms)

    @property
    def column_names(self) -> tuple:
        return ("(Intercept)",) + tuple(_term_label(t) for t in self.terms)

    @property
    def covariates(self) -> tuple:
        return tuple(dict.fromkeys(name for name, _ in self.terms))

    def __str__(self):
        return self.label


def _term_label(term) -> str:
    name, degree = term
    return name if degree == 1 else f"{name}^{degree}"


_TERM = re.compile(r"^([A-Za-z_][A-Za-z0-9_.]*)(?:\^([0-9]+))?$")


def parse_model_formula(text: str, known_covariates: Iterable[str] | None = None) -> ModelSpec:
    """Parse ``"a + b + b^2"`` into a :class:`ModelSpec`.

    An empty formula, or the lone term ``1``, is the intercept-only model.
    If ``known_covariates`` is given, every name must belong to it.
    """
    known = None if known_covariates is None else set(known_covariates)
    stripped = "".join(text.split())
    if stripped in ("", NULL_LABEL):
        return ModelSpec()
    terms = []
    for raw in stripped.split("+"):
        if raw == NULL_LABEL:
            continue
        m = _TERM.match(raw)
        if m is None:
            raise DataError(f"malformed term {raw!r} in formula {text!r}")
        name, degree = m.group(1), int(m.group(2) or 1)
        if degree not in (1, 2):
            raise DataError(f"term {raw!r}: only degrees 1 and 2 are supported")
        if known is not None and name not in known:
            raise DataError(
                f"unknown covariate {name!r} in formula {text!r}; "
                f"known: {sorted(known)}")
        terms.append((name, degree))
    return ModelSpec(tuple(terms))


def _read_model_lines(lines: Iterable[str], source: str, known_covariates) -> list:
    specs = []
    for lineno, line in enumerate(lines, start=1):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        try:
            specs.append(parse_model_formula(text, known_covariates))
        except DataError as exc:
            raise DataError(f"{source}: line {lineno}: {exc}") from None
    return specs


def load_model_list(path, known_covariates: Iterable[str] | None = None) -> list:
    """Read a model-list file: one formula per line, ``#`` starts a comment line."""
    path = Path(path)
    if not path.is_file():
        raise DataError(f"{path}: no such file")
    with path.open(encoding="utf-8") as fh:
        return _read_model_lines(fh, str(path), known_covariates)


def paper_model_list() -> list:
    """The 24 candidate models of the avian species richness example."""
    from importlib.resources import files

    text = files("paretosel").joinpath("resources/table2_models.txt").read_text()
    return _read_model_lines(text.splitlines(), "table2_models.txt", None)


def enumerate_hierarchical_models(covariates: Sequence[str], max_degree: int = 2) -> list:
    """All specs where each covariate is absent, linear, or linear plus quadratic.

    Returns ``3**k`` specs for ``k`` covariates (``2**k`` when
    ``max_degree=1``), sorted by ``(p, label)``.
    """
    names = list(dict.fromkeys(covariates))
    if not names:
        raise DataError("at least one covariate is required")
    if max_degree not in (1, 2):
        raise DataError("max_degree must be 1 or 2")
    choices = []
    for name in names:
        options = [(), ((name, 1),)]
        if max_degree == 2:
            options.append(((name, 1), (name, 2)))
        choices.append(options)
    specs = {ModelSpec(sum(combo, ())) for combo in itertools.product(*choices)}
    return sorted(specs, key=lambda s: (s.p, s.label))


@dataclass(frozen=True)
class DesignMatrix:
    """Model matrix with an intercept column first.

    ``means`` and ``scales`` hold the per-column standardization applied to
    the non-intercept columns (zeros and ones when not standardized), so
    coefficients can be mapped back to the raw covariate scale.
    """

    values: np.ndarray
    column_names: tuple
    means: np.ndarray
    scales: np.ndarray
    standardized: bool = False
    spec: ModelSpec | None = None

    def __post_init__(self):
        values = _frozen(self.values)
        if values.ndim != 2 or values.shape[1] < 1:
            raise DataError("design matrix must be 2-D with at least one column")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "means", _frozen(self.means))
        object.__setattr__(self, "scales", _frozen(self.scales))
        object.__setattr__(self, "column_names", tuple(self.column_names))

    @classmethod
    def from_array(cls, values, column_names=None) -> "DesignMatrix":
        """Wrap a raw matrix whose first column is the intercept."""
        values = np.asarray(values, dtype=float)
        k = values.shape[1]
        if column_names is None:
            column_names = ("(Intercept)",) + tuple(f"x{j}" for j in range(1, k))
        return cls(values, column_names, np.zeros(k - 1), np.ones(k - 1))

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def p(self) -> int:
        return self.values.shape[1]

    def to_raw_scale(self, coefficients) -> np.ndarray:
        """Map coefficients on the standardized columns back to raw covariates."""
        beta = np.asarray(coefficients, dtype=float)
        slopes = beta[1:] / self.scales
        intercept = beta[0] - np.dot(slopes, self.means)
        return np.concatenate([[intercept], slopes])


def build_design_matrix(data: Dataset, spec: ModelSpec, standardize: bool = True) -> DesignMatrix:
    """Build the model matrix for ``spec``.

    Quadratic columns are squares of the raw covariate; standardization
    (mean 0, sample sd 1 with the ``n - 1`` denominator) is applied after
    squaring. The intercept column is never standardized.
    """
    missing = [c for c in spec.covariates if c not in data.covariates]
    if missing:
        raise DataError(f"covariates {missing} not in dataset")
    cols = [np.ones(data.n)]
    for name, degree in spec.terms:
        cols.append(data.covariates[name] ** degree)
    X = np.column_stack(cols)
    k = X.shape[1] - 1
    means, scales = np.zeros(k), np.ones(k)
    if standardize and k:
        if data.n < 2:
            raise DataError("standardization needs at least 2 observations")
        means = X[:, 1:].mean(axis=0)
        scales = X[:, 1:].std(axis=0, ddof=1)
        for name, s in zip(spec.column_names[1:], scales):
            if not s > 0:
                raise DataError(f"column {name!r} has zero variance; cannot standardize")
        X[:, 1:] = (X[:, 1:] - means) / scales
    return DesignMatrix(X, spec.column_names, means, scales, bool(standardize and k), spec)
