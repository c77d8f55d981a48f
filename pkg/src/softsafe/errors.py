"""Exception types shared across the package."""


class DomainError(ValueError):
    """A value lies outside the domain an operation or model accepts.

    ``field`` names the offending parameter when there is one.
    """

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field


class RankDeficient(ValueError):
    pass


class DimensionMismatch(ValueError):
    pass


class EmptySet(ValueError):
    pass


class Unreachable(ValueError):
    pass


class ConfigError(ValueError):
    pass


class NoConvergence(RuntimeError):
    """Raised by iterative set computations that run out of iterations.

    The last iterate is kept on the exception so callers can inspect it.
    """

    def __init__(self, message, last=None, iterations=None):
        super().__init__(message)
        self.last = last
        self.iterations = iterations
