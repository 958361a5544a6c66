"""Exception hierarchy shared by all modules."""


class ModelError(Exception):
    """Base error for this package."""


class ParameterError(ModelError, ValueError):
    """Input outside the documented domain (gamma <= 0, n > N, x off support, ...)."""


class NumericRangeError(ModelError, ArithmeticError):
    """An intermediate quantity left the representable floating-point range."""


class TailBoundError(ModelError):
    """An adaptive series cutoff would exceed its hard cap before meeting the tolerance."""


class ConvergenceError(ModelError, RuntimeError):
    """An iterative solver hit its iteration cap without converging."""
