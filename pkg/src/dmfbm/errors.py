"""Exception taxonomy shared by all modules.

The CLI maps these onto exit-code categories (domain errors 2,
convergence/consistency 3, I/O 4).
"""


class DomainError(ValueError):
    """An argument lies outside the mathematically valid domain."""


class ConvergenceError(RuntimeError):
    """A series or quadrature failed to converge within its iteration cap."""


class ConsistencyError(RuntimeError):
    """An internal cross-check failed (signals a numerical or coding bug)."""


class SingularSystemError(RuntimeError):
    """The assembled linear system is numerically singular."""


class GridMismatchError(ValueError):
    """Two discretized objects live on incompatible grids."""
