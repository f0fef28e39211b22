"""Exception hierarchy for poissonqm."""


class PoissonQMError(Exception):
    """Base class for all library errors."""


class InvalidDimensionError(PoissonQMError, ValueError):
    pass


class DimensionMismatchError(PoissonQMError, ValueError):
    pass


class NotHermitianError(PoissonQMError, ValueError):
    pass


class BasisInconsistencyError(PoissonQMError):
    """Trace formulas produced non-real structure constants."""


class InsufficientMomentsError(PoissonQMError, ValueError):
    pass


class PreconditionError(PoissonQMError, ValueError):
    pass


class NotAStateError(PoissonQMError, ValueError):
    """Matrix has a negative eigenvalue beyond tolerance."""


class SpectrumError(PoissonQMError, ValueError):
    pass


class DivergenceError(PoissonQMError, ArithmeticError):
    def __init__(self, step, message=None):
        self.step = step
        super().__init__(message or f"non-finite state at step {step}")


class TheoremViolation(PoissonQMError, AssertionError):
    """An identity that must hold did not; signals a tolerance bug."""


class InputError(PoissonQMError, ValueError):
    """Malformed external input (JSON files, CLI values)."""

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")
