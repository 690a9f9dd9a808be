"""Exception types shared across the package."""


class XXChainError(Exception):
    """Base class for all package errors."""


class ValidationError(XXChainError, ValueError):
    """Bad input parameters (out-of-range N, r, M, negative field, ...)."""


class DegenerateFieldError(XXChainError):
    """The requested field coincides with a critical field: the ground space
    is two-fold degenerate and no single sector can be returned."""

    def __init__(self, field, critical_field, sector_low, sector_high):
        self.field = field
        self.critical_field = critical_field
        self.sector_low = sector_low
        self.sector_high = sector_high
        super().__init__(
            f"B={field} coincides with the critical field {critical_field} "
            f"(sectors r={sector_low} and r={sector_high} are degenerate)"
        )


class CapacityError(XXChainError):
    """A requested object exceeds the configured memory/dimension cap."""


class BasisMismatchError(XXChainError):
    """Two objects that must share (N, r) or (N, M) do not."""


class UnreliableRankError(XXChainError):
    """A numerical rank decision did not meet the reliability gap even after
    precision escalation."""
