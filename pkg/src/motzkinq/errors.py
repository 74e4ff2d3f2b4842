"""Exception types shared across the package.

Domain violations (bad argument ranges, poles) raise plain ``ValueError``;
the classes below cover numerical failure modes that callers may want to
catch separately.
"""


class ConvergenceError(ArithmeticError):
    """A truncated series, product, or adaptive quadrature did not converge
    within its configured budget."""


class CapacityError(RuntimeError):
    """A state-space cap, enumeration guard, or recurrence-length guard was
    exceeded or is too small for the requested computation."""
