"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain where the model is defined."""


class NumericalFailure(RuntimeError):
    """An integration or root solve could not produce a trustworthy result."""


class AssumptionViolation(ValueError):
    """An incidence function does not satisfy a required structural assumption."""
