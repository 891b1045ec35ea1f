"""Exception types shared across the package."""


class ShapeError(ValueError):
    """An element does not belong to the algebra it was used with."""


class ConfigError(ValueError):
    """A model or run configuration violates a stated precondition."""


class NotAUnit(ArithmeticError):
    """A candidate root is not invertible in the algebra."""


class RootRejected(ArithmeticError):
    """A candidate root leaves residuals above tolerance.

    Attributes
    ----------
    residual_P, residual_Q : float
        Norms of the two polynomial values at the candidate.
    tol : float
        The tolerance that was exceeded.
    """

    def __init__(self, residual_P: float, residual_Q: float, tol: float):
        self.residual_P = residual_P
        self.residual_Q = residual_Q
        self.tol = tol
        super().__init__(
            f"candidate root rejected: |P(rho)|={residual_P:.3e}, "
            f"|Q(rho)|={residual_Q:.3e}, tol={tol:.1e}"
        )
