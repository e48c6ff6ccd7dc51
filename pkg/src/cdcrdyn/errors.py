"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """Invalid configuration: bad option value, unknown key, malformed profile."""


class DomainError(ValueError):
    """Evaluation requested outside the arc-length domain [0, L] (or t < 0)."""


class SolverFault(RuntimeError):
    """A solver produced a non-finite or diverged state.

    Carries the step index at which the fault was detected so runs can be
    annotated and benchmark cells marked as non-converged.
    """

    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step
