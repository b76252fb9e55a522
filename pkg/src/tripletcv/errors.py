"""Exception types shared across the package."""


class InvalidArgument(ValueError):
    pass


class InvalidState(ValueError):
    """Covariance matrix is not a valid (positive semidefinite / physical) Gaussian state."""


class DegenerateInput(ValueError):
    pass


class InternalConsistencyError(RuntimeError):
    """A computed quantity failed a self-check it should satisfy by construction."""


class ConditioningWarning(UserWarning):
    pass
