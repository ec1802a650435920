"""Exception types raised by coauthnet."""


class CoauthnetError(Exception):
    """Base class for all errors raised by this package."""


class NodeNotFoundError(CoauthnetError, KeyError):
    """A node id or author label does not exist in the graph."""


class ConfigError(CoauthnetError, ValueError):
    """Invalid run configuration or input schema mapping."""


class UndefinedValueError(CoauthnetError, ValueError):
    """A statistic is undefined for the given graph (e.g. an empty graph)."""


class ConvergenceError(CoauthnetError, RuntimeError):
    """An iterative method stopped at ``max_iter`` without converging.

    The last iterate and its L1 residual are kept on the exception so callers
    can decide whether the approximation is usable.
    """

    def __init__(self, message, scores=None, residual=None, iterations=None):
        super().__init__(message)
        self.scores = scores
        self.residual = residual
        self.iterations = iterations
