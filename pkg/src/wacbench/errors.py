"""Shared exception types."""


class WacbenchError(Exception):
    """Base class for all workbench faults."""


class MpsParseError(WacbenchError):
    """Malformed MPS input; carries the 1-based line number."""

    def __init__(self, message, line_no=None):
        self.line_no = line_no
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)


class EmptyInteriorError(WacbenchError):
    """The feasible region has no strictly interior point."""


class UnboundedRegionError(WacbenchError):
    """The feasible region has a nonzero recession direction."""

    def __init__(self, message, direction=None):
        self.direction = direction
        super().__init__(message)


class SolverError(WacbenchError):
    """Numerical solve failed (iteration cap, rank loss, non-finite values)."""


class DomainError(WacbenchError):
    """Point outside the domain of a utility function."""


class PhaseError(WacbenchError):
    """Session operation attempted in the wrong phase."""
