"""
Exception hierarchy for derivkey.

Every documented failure is a DerivkeyError subclass carrying the CLI exit
code it maps to. Library code raises; only the CLI translates to exit codes.
"""
from typing import Optional


class DerivkeyError(Exception):
    """Base class for all documented derivkey errors."""

    exit_code = 3

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


class UsageError(DerivkeyError):
    exit_code = 1


# Parse / input errors (exit code 2)

class ParseError(DerivkeyError):
    exit_code = 2


class FunctionSyntaxError(ParseError):
    """Grammar violation in a function file, with 1-based line and column."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class UnknownVariable(ParseError):
    def __init__(self, name: str, line: Optional[int] = None, column: Optional[int] = None):
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(f"{where}unknown variable '{name}'")
        self.name = name
        self.line = line
        self.column = column


class NonIntegerExponent(ParseError):
    def __init__(self, text: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: exponent '{text}' is not a positive integer")
        self.line = line
        self.column = column


class DivisionUnsupported(ParseError):
    def __init__(self, line: int, column: int):
        super().__init__(f"line {line}, column {column}: division is not supported")
        self.line = line
        self.column = column


class DuplicateName(ParseError):
    def __init__(self, name: str, line: Optional[int] = None):
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}duplicate name '{name}'")
        self.name = name


class ConfigError(ParseError):
    pass


class ScheduleError(ParseError):
    pass


class UnknownName(ParseError):
    pass


class ArityMismatch(ParseError):
    pass


class WrongCount(ParseError):
    pass


class NonFiniteValue(ParseError):
    pass


class MissingColumn(ParseError):
    def __init__(self, column: str):
        super().__init__(f"missing column '{column}'")
        self.column = column


class NonNumericCell(ParseError):
    def __init__(self, row: int, column: str, text: str):
        super().__init__(f"row {row}, column '{column}': non-numeric cell '{text}'")
        self.row = row
        self.column = column


class EmptyTable(ParseError):
    pass


class MalformedTable(ParseError):
    """A CSV record whose field count differs from the header; line is 1-based, blank lines included."""

    def __init__(self, message: str, line: Optional[int] = None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class MatrixFormatError(ParseError):
    pass


class KeyFormatError(ParseError):
    pass


# Numeric errors (exit code 3)

class NumericError(DerivkeyError):
    exit_code = 3


class NotSquare(NumericError):
    pass


class DimensionMismatch(NumericError):
    pass


class DimensionTooLarge(NumericError):
    pass


class SingularSystem(NumericError):
    pass


class RankDeficient(NumericError):
    pass


class InconsistentSystem(NumericError):
    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


class NonAffineDerivative(NumericError):
    pass


class NoConvergence(NumericError):
    pass


class MaxIterations(NumericError):
    """Newton reconstruction ran out of iterations; keeps the best iterate."""

    def __init__(self, message: str, residual: float, point=None):
        super().__init__(message)
        self.residual = residual
        self.point = point


class SingularStep(NumericError):
    pass


class SingularJacobian(NumericError):
    def __init__(self, message: str, det: float):
        super().__init__(message)
        self.det = det


class ComplexSpectrum(NumericError):
    pass


class Overflow(NumericError):
    pass


class ZeroKey(NumericError):
    pass


# I/O errors (exit code 4)

class DerivkeyIOError(DerivkeyError):
    exit_code = 4

    def __init__(self, message: str, path):
        super().__init__(f"{message}: {path}")
        self.path = path


class RowError(DerivkeyError):
    """A per-row failure while processing a table; row is 1-based."""

    def __init__(self, row: int, cause: DerivkeyError):
        super().__init__(f"row {row}: {cause.message}")
        self.row = row
        self.cause = cause
        self.exit_code = cause.exit_code
