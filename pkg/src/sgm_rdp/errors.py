"""Exception types raised by the accountant."""


class InvalidOrder(ValueError):
    """Raised for a Renyi order alpha <= 1."""


class InvalidDelta(ValueError):
    """Raised when delta lies outside the open interval (0, 1)."""


class NonConvergence(ArithmeticError):
    """Raised when a series fails to converge within its iteration cap."""


class ToleranceNotMet(ArithmeticError):
    """Raised when adaptive quadrature exhausts its refinement budget."""


class Infeasible(ValueError):
    """Raised when no noise level in the search bracket meets a DP target."""
