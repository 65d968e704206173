"""Exception hierarchy shared across the package."""


class ParetoselError(Exception):
    """Base class for all package errors."""


class DataError(ParetoselError, ValueError):
    """Malformed input data: files, CSV cells, formulas, model lists."""


class UsageError(ParetoselError, ValueError):
    """Invalid argument combination or option value."""


class NumericalError(ParetoselError, ArithmeticError):
    """A numerical procedure could not produce a trustworthy answer."""


class RankDeficientError(NumericalError):
    """Design matrix does not have full column rank."""


class ConvergenceError(NumericalError):
    """An iterative solver diverged or hit its iteration cap."""
