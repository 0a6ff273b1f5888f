"""Exception types shared across the package.

The CLI maps these onto exit codes: validation problems exit 2,
numerical non-convergence exits 3.
"""


class InputError(ValueError):
    """Malformed or inconsistent input (shapes, non-finite entries, bad weights)."""


class CPTPError(InputError):
    """A map failed complete-positivity or trace-preservation validation."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class ConditioningError(ArithmeticError):
    """A numerical rank decision is unstable under a tolerance perturbation."""


class ConvergenceError(ArithmeticError):
    """An iterative solver stopped without meeting its tolerance."""

    def __init__(self, message, last_iterate=None):
        super().__init__(message)
        self.last_iterate = last_iterate


class NoReturnTimeError(ArithmeticError):
    """The semigroup generator has no spectral gap on the mean-zero space."""


class LemmaViolation(AssertionError):
    """A proven inequality failed numerically; carries the counterexample."""

    def __init__(self, message, counterexample=None):
        super().__init__(message)
        self.counterexample = counterexample
