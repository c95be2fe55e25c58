"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class OsgoodViolationError(ValueError):
    """The source term fails the finite blowup-time integral condition,
    so transform-based criteria are inapplicable."""


class ResolutionError(RuntimeError):
    """A grid or quadrature is too coarse (or a box too small) for the
    requested tolerance; the message suggests a refinement."""
