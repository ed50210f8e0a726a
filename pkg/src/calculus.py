"""
Jacobian and Hessian evaluation for polynomial vector fields, and the
invertibility check on a square block of partials.

Canonical Jacobian orientation is rows = functions, columns = variables,
J[j][i] = d f_j / d x_i.
"""
import logging
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from src.config.environment import ENV_CONFIG
from src.errors import ArityMismatch, DuplicateName, NotSquare, UnknownVariable, WrongCount
from src.funcfile.polynomial import Point, Polynomial, VectorField, partial_derivative
from src.linalg.lu import determinant
from src.linalg.matrix import Matrix

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class LabeledMatrix:
    row_labels: Tuple[str, ...]
    col_labels: Tuple[str, ...]
    data: Matrix

    def __post_init__(self):
        object.__setattr__(self, "row_labels", tuple(self.row_labels))
        object.__setattr__(self, "col_labels", tuple(self.col_labels))
        if (self.data.rows, self.data.cols) != (len(self.row_labels), len(self.col_labels)):
            raise ArityMismatch(
                f"labels {len(self.row_labels)}x{len(self.col_labels)} do not match "
                f"matrix {self.data.rows}x{self.data.cols}"
            )
        for axis in (self.row_labels, self.col_labels):
            if len(set(axis)) != len(axis):
                raise DuplicateName(next(x for x in axis if axis.count(x) > 1))

    def transpose(self) -> "LabeledMatrix":
        return LabeledMatrix(self.col_labels, self.row_labels, self.data.transpose())

    def entry(self, row: str, col: str) -> float:
        return float(self.data.data[self.row_labels.index(row), self.col_labels.index(col)])

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LabeledMatrix)
            and self.row_labels == other.row_labels
            and self.col_labels == other.col_labels
            and self.data == other.data
        )


def jacobian_polynomials(field: VectorField) -> Tuple[Tuple[Polynomial, ...], ...]:
    """Symbolic Jacobian: rows of exact partial derivatives, one row per function."""
    return tuple(
        tuple(partial_derivative(poly, var) for var in field.variables)
        for _, poly in field.functions
    )


def jacobian_at(field: VectorField, point: Point, transpose: bool = False) -> LabeledMatrix:
    """
    Evaluate the m x n Jacobian of the field at a point.

    Args:
        field: The vector field F = (f1..fm)
        point: Evaluation point covering exactly the field's variables
        transpose: Return the variable-major (n x m) listing instead

    Returns:
        LabeledMatrix with function rows and variable columns (or the transpose)
    """
    values = point.vector(field.variables)
    rows = [
        [derivative.evaluate_values(values) for derivative in row]
        for row in jacobian_polynomials(field)
    ]
    data = Matrix(np.array(rows, dtype=float).reshape(field.m, field.n))
    result = LabeledMatrix(tuple(field.function_names), field.variables, data)
    return result.transpose() if transpose else result


def select_square_submatrix(lm: LabeledMatrix, variables: Sequence[str]) -> LabeledMatrix:
    """Restrict the columns to the requested variables, keeping the requested order."""
    variables = tuple(variables)
    m = len(lm.row_labels)
    if len(variables) != m:
        raise WrongCount(f"need exactly {m} variables for a square block, got {len(variables)}")
    if len(set(variables)) != len(variables):
        raise DuplicateName(next(v for v in variables if variables.count(v) > 1))
    for var in variables:
        if var not in lm.col_labels:
            raise UnknownVariable(var)
    columns = [lm.col_labels.index(var) for var in variables]
    return LabeledMatrix(lm.row_labels, variables, Matrix(lm.data.data[:, columns]))


def ift_invertibility_check(square: LabeledMatrix, tol: float = None) -> Tuple[bool, float]:
    """
    Decide whether the square block of partials is invertible.

    The block counts as invertible when |det| > tol * product of row infinity-norms,
    each being the largest absolute entry of its row.

    Returns:
        (invertible, det)
    """
    tol = ENV_CONFIG["det_tolerance"] if tol is None else tol
    matrix = square.data if isinstance(square, LabeledMatrix) else square
    if not matrix.is_square():
        raise NotSquare(f"invertibility check needs a square block, got {matrix.rows}x{matrix.cols}")
    det = determinant(matrix)
    threshold = tol * float(np.prod(matrix.row_inf_norms()))
    invertible = abs(det) > threshold
    logger.debug(f"Invertibility check: det={det:.6e}, threshold={threshold:.3e}, invertible={invertible}")
    return invertible, det


def hessian_at(poly: Polynomial, point: Point) -> Matrix:
    """Evaluate the n x n matrix of exact second partials; symmetric by construction."""
    values = point.vector(poly.variables)
    n = poly.nvars
    data = np.zeros((n, n))
    for i in range(n):
        first = poly.derivative(i)
        for k in range(i, n):
            data[i, k] = data[k, i] = first.derivative(k).evaluate_values(values)
    return Matrix(data)
