class PoincareWebError(Exception):
    """Base class for errors raised by this package."""


class OutOfRangeError(PoincareWebError, ValueError):
    """An argument lies outside the region where a bound or series is valid."""


class ConvergenceError(PoincareWebError, RuntimeError):
    """An iterative solver failed; ``diagnostics`` carries residuals."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class NotRepellingError(PoincareWebError, ValueError):
    pass


class PreconditionError(PoincareWebError, ValueError):
    pass


class ConfigError(PoincareWebError, ValueError):
    pass
