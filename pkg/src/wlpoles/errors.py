"""Shared exception types."""


class StructuralError(ValueError):
    """Raised when an operation is asked to work on a diagram whose
    structure rules it out (crossing propagators, density failures)."""


class InconsistencyError(RuntimeError):
    """Raised when two independent computations of the same quantity
    disagree.  This always indicates a bug, never bad input."""


class UnstructuredResidualError(ValueError):
    """Raised when a polynomial expected to split into variable and
    two-by-two determinant factors leaves a non-constant residual."""
