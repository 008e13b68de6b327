"""Exception types raised across the package."""


class RanklabError(Exception):
    pass


class NotPrime(RanklabError, ValueError):
    pass


class ModulusOutOfRange(RanklabError, ValueError):
    pass


class DivisionByZero(RanklabError, ZeroDivisionError):
    pass


class BoundsError(RanklabError, IndexError):
    pass


class DimensionMismatch(RanklabError, ValueError):
    pass


class OverlapError(RanklabError, AssertionError):
    """Two operands that must be disjoint share storage."""


class SingularDiagonal(RanklabError, ArithmeticError):
    """A NonUnit triangular operand has a zero on its diagonal."""


class SingularMatrix(RanklabError, ArithmeticError):
    pass


class MalformedPacked(RanklabError, ValueError):
    pass


class RankOutOfRange(RanklabError, ValueError):
    pass


class MatrixParseError(RanklabError, ValueError):
    """Raised by the text reader; carries the 1-based line and column."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)
