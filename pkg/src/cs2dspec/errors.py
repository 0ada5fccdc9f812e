"""Exception types raised by the toolkit."""


class InvalidArgumentError(ValueError):
    """An argument violates the documented preconditions."""


class NumericalFailure(ArithmeticError):
    """A solver produced a non-finite intermediate value."""


class ParseError(ValueError):
    """A SIG2D/SPEC2D file could not be parsed.

    The message carries the offending line number when one is known.
    """

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class PipelineError(RuntimeError):
    """A 1D solve inside a 2D pass failed."""
