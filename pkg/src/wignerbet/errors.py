"""Exception types shared across the package."""


class WignerBetError(Exception):
    """Base class for all package errors."""


class ConfigurationError(WignerBetError):
    """Invalid grid, fixture spec, or run configuration."""


class DomainError(WignerBetError):
    """Input outside the domain an operation supports (bad support, grid mismatch, ...)."""


class DegeneracyError(WignerBetError):
    """Degenerate input: a vanishing superposition or a (0, 0) observable."""


class NumericalIntegrityError(WignerBetError):
    """A numerical identity that should hold to tight tolerance was violated."""


class NegativityError(WignerBetError):
    """A density expected to be nonnegative carries genuinely negative mass."""

    def __init__(self, message: str, negative_mass: float):
        super().__init__(message)
        self.negative_mass = negative_mass


class ProtocolViolationError(WignerBetError):
    """A player emitted an invalid move; the run aborts with attribution."""

    def __init__(self, player: str, round_index: int, reason: str):
        super().__init__(f"round {round_index}: invalid move by {player}: {reason}")
        self.player = player
        self.round_index = round_index
        self.reason = reason


class BoundViolationError(WignerBetError):
    """A betting strategy's assumed bound on its payoff function failed."""
