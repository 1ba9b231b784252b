"""Exception types shared across the package."""


class MultilabError(Exception):
    """Base class for all errors raised by multilab."""


class GridMismatchError(MultilabError, ValueError):
    """Array shapes, dimensions or grids do not agree."""


class DomainError(MultilabError, ValueError):
    """A parameter lies outside the range where the operation is defined."""


class EvaluationError(MultilabError, ValueError):
    """A pointwise evaluation produced a non-finite value."""


class SingularPointError(EvaluationError):
    """A symbol was evaluated on its declared singular set."""


class BoundaryMassError(MultilabError, ValueError):
    """Too much L2 mass sits near the edge of the periodic box."""


class AliasingError(MultilabError, ValueError):
    """Frequency sums would wrap around the output spectrum."""


class BudgetError(MultilabError, ValueError):
    """The requested computation exceeds the supported desk-scale budget."""
