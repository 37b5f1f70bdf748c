"""Exception hierarchy shared by the library and the CLI."""


class RlpError(Exception):
    """Base class for all errors raised by rlpwidth."""


class ParameterError(RlpError, ValueError):
    """An argument is outside the documented range."""


class DomainError(RlpError, ValueError):
    """A mathematical quantity is undefined at the requested point."""


class NoFeasibleScaleError(RlpError):
    """q(x) <= 0 at every probed scale, so no objective value is defined."""


class ConvergenceError(RlpError):
    """The scalar extremization could not bracket an interior stationary point."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}
