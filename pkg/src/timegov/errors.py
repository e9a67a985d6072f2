"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


class NumericError(ArithmeticError):
    """A numerical procedure failed (divergence, non-convergence, bad residual)."""


class SetupError(ValueError):
    """A simulation cannot start safely from the requested configuration."""


class ScenarioError(ValueError):
    """A scenario document could not be parsed or failed validation."""
