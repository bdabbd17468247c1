"""Exception types shared across the package."""


class DivisionNotExact(ArithmeticError):
    """Exact division left a nonzero remainder."""


class NonGenericQ(ArithmeticError):
    """A q-integer (or q - 1/q) vanishes at the requested numeric q."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class NotNilpotent(ValueError):
    """A matrix handed to a terminating series is not nilpotent."""


class BranchAmbiguity(ArithmeticError):
    """No square-root branch satisfies the small-argument asymptotics."""


class ConfigError(ValueError):
    """Invalid command-line or run configuration."""
