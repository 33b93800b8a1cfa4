"""Exception types shared by every module."""


class DomainError(ValueError):
    """Input lies outside the domain of the operation."""


class ClassOverflowError(DomainError):
    """An expression leaves every closed class the engine can represent."""


class NumericalError(ArithmeticError):
    """An iterative method failed to converge.

    ``residual`` carries the best residual reached before giving up.
    """

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class RangeError(DomainError):
    """Argument outside the range where an approximation is validated."""


class ParseError(ValueError):
    """Malformed expression text.

    ``offset`` is the byte offset of the offending token in the UTF-8
    encoded source and ``expected`` the set of tokens that would have been
    accepted there.
    """

    def __init__(self, message, offset, expected=()):
        self.offset = offset
        self.expected = frozenset(expected)
        detail = f" (expected one of: {', '.join(sorted(self.expected))})" if expected else ""
        super().__init__(f"{message} at byte {offset}{detail}")
