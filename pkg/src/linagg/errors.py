"""Exception types shared across the package."""


class ParameterError(ValueError):
    """A constructor or calculator received parameters violating its contract."""


class DomainError(ValueError):
    """An evaluation point lies outside the function's domain."""


class UnsupportedDictionaryError(TypeError):
    """An operation was called with a dictionary kind it does not support."""


class NumericError(RuntimeError):
    """A numerical routine failed to reach its documented accuracy."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})


class FitError(RuntimeError):
    """The empirical Gram system is too ill-conditioned to solve reliably.

    Carries the Gram diagnostics so callers can report the failure instead of
    silently regularizing.
    """

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})
