"""Exception hierarchy shared by the library and the command line."""


class KMDecompError(Exception):
    """Base class for all errors raised by kmdecomp."""


class ParseError(KMDecompError, ValueError):
    """Malformed input text. Carries the offending 1-based line number."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DomainError(KMDecompError, ValueError):
    """A value lies outside the domain of an operation (negative age, empty population, ...)."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DegenerateConditioningError(DomainError):
    """Conditioning on survival past an age where the CDF already reached 1."""


class VerificationError(KMDecompError):
    """An identity check exceeded its tolerance."""

    def __init__(self, check, deviation, tol):
        self.check = check
        self.deviation = deviation
        self.tol = tol
        super().__init__(f"{check}: max deviation {deviation:.3e} exceeds tolerance {tol:.1e}")
