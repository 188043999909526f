"""Exception types raised across the package."""


class InvalidDimensionError(ValueError):
    pass


class InvalidStateError(RuntimeError):
    """An operation was asked of an object that lacks the required state."""


class NonPhysicalStateError(ValueError):
    """A matrix failed the Hermiticity, trace or positivity checks."""


class NonUniqueSteadyStateError(RuntimeError):
    def __init__(self, message, null_dimension=None):
        super().__init__(message)
        self.null_dimension = null_dimension


class ConvergenceError(RuntimeError):
    pass


class StiffnessError(RuntimeError):
    pass


class NumericalCorruptionError(RuntimeError):
    pass


class InstabilityError(ArithmeticError):
    """A steady-state formula was evaluated where no stable steady state exists."""


class ConfigError(ValueError):
    """Raised with every validation problem found, each prefixed by its field path."""

    def __init__(self, problems):
        if isinstance(problems, str):
            problems = [problems]
        self.problems = list(problems)
        super().__init__("\n".join(self.problems))
