"""
Dense real matrices, complex spectrum values, and the matrix CSV format.

CSV format: one row per line, entries as decimal literals separated by
commas, no header.
"""
import math
from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple

import numpy as np

from src.errors import MatrixFormatError, NonFiniteValue


@dataclass(frozen=True, eq=False)
class Matrix:
    """Read-only rows x cols float64 matrix with finite entries."""

    data: np.ndarray

    def __post_init__(self):
        arr = np.array(self.data, dtype=float)
        if arr.ndim != 2 or arr.shape[0] == 0 or arr.shape[1] == 0:
            raise MatrixFormatError(f"expected a non-empty 2-D matrix, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise NonFiniteValue("matrix has non-finite entries")
        arr.flags.writeable = False
        object.__setattr__(self, "data", arr)

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[float]]) -> "Matrix":
        return cls(np.array([list(r) for r in rows], dtype=float))

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    def is_square(self) -> bool:
        return self.rows == self.cols

    def transpose(self) -> "Matrix":
        return Matrix(self.data.T)

    def to_array(self) -> np.ndarray:
        """Writable copy of the entries."""
        return np.array(self.data, dtype=float)

    def row_inf_norms(self) -> np.ndarray:
        """Vector infinity norm of each row: its largest absolute entry."""
        return np.abs(self.data).max(axis=1)

    def __eq__(self, other) -> bool:
        return isinstance(other, Matrix) and np.array_equal(self.data, other.data)

    def __repr__(self) -> str:
        return f"Matrix({self.data.tolist()!r})"


@dataclass(frozen=True, order=False)
class ComplexValue:
    re: float
    im: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.re) and math.isfinite(self.im)):
            raise NonFiniteValue(f"non-finite eigenvalue {self.re}+{self.im}i")

    @classmethod
    def of(cls, z: complex) -> "ComplexValue":
        return cls(float(z.real), float(z.imag))

    def __complex__(self) -> complex:
        return complex(self.re, self.im)

    def __abs__(self) -> float:
        return math.hypot(self.re, self.im)

    def __str__(self) -> str:
        if self.im == 0:
            return format_real(self.re)
        sign = "+" if self.im >= 0 else "-"
        return f"{format_real(self.re)}{sign}{format_real(abs(self.im))}i"


@dataclass(frozen=True)
class EigenSet:
    """Spectrum in canonical order: descending real part, then descending imaginary part."""

    values: Tuple[ComplexValue, ...]

    @classmethod
    def from_complex(cls, values: Iterable[complex]) -> "EigenSet":
        items = [ComplexValue.of(complex(v)) for v in values]
        items.sort(key=lambda z: (-z.re, -z.im))
        return cls(tuple(items))

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def as_complex(self) -> List[complex]:
        return [complex(v) for v in self.values]

    def total(self) -> complex:
        return sum(self.as_complex(), 0j)

    def product(self) -> complex:
        result = 1 + 0j
        for v in self.as_complex():
            result *= v
        return result


def format_real(value: float) -> str:
    """Decimal literal: integral values without a fractional part, others round-trip exact."""
    value = float(value)
    if value == 0:
        return "0"
    if value.is_integer() and abs(value) < 1e16:
        return str(int(value))
    return repr(value)


def matrix_to_csv(matrix: Matrix) -> str:
    lines = [",".join(format_real(x) for x in row) for row in matrix.data]
    return "\n".join(lines) + "\n"


def parse_matrix_csv(text: str) -> Matrix:
    """Parse the matrix CSV format; blank lines are ignored."""
    rows: List[List[float]] = []
    for number, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        row = []
        for column, cell in enumerate(line.split(","), start=1):
            try:
                row.append(float(cell.strip()))
            except ValueError:
                raise MatrixFormatError(f"line {number}, entry {column}: not a number: '{cell.strip()}'") from None
        if rows and len(row) != len(rows[0]):
            raise MatrixFormatError(f"line {number}: expected {len(rows[0])} entries, got {len(row)}")
        rows.append(row)
    if not rows:
        raise MatrixFormatError("matrix file is empty")
    return Matrix.from_rows(rows)
