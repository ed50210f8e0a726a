"""
LU factorization with partial pivoting: determinant and linear solves.

Overdetermined systems are solved in the least-squares sense through the
normal equations, followed by one step of iterative refinement.
"""
import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from src.errors import DimensionMismatch, NotSquare, SingularSystem
from src.linalg.matrix import Matrix

logger = logging.getLogger(__name__)

ZERO_PIVOT = 1e-300
SINGULAR_PIVOT = 1e-12
CONSISTENCY_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class LUFactors:
    lu: np.ndarray  # unit-lower L below the diagonal, U on and above
    perm: np.ndarray
    sign: float


@dataclass(frozen=True, eq=False)
class LinearSolution:
    x: np.ndarray
    residual: float  # 2-norm of A x - b
    consistent: bool
    overdetermined: bool


def _as_array(a) -> np.ndarray:
    if isinstance(a, Matrix):
        return a.to_array()
    return np.array(a, dtype=float)


def lu_factor(a: np.ndarray, pivot_floor: float = 0.0) -> LUFactors:
    """
    Doolittle LU with partial pivoting.

    Args:
        a: Square matrix (copied)
        pivot_floor: Raise SingularSystem when a chosen pivot has magnitude <= this

    Returns:
        LUFactors with PA = LU
    """
    lu = np.array(a, dtype=float)
    n = lu.shape[0]
    perm = np.arange(n)
    sign = 1.0
    for k in range(n):
        p = k + int(np.argmax(np.abs(lu[k:, k])))
        if abs(lu[p, k]) <= pivot_floor:
            raise SingularSystem(f"pivot {lu[p, k]:.3e} in column {k} is below {pivot_floor:.3e}")
        if p != k:
            lu[[k, p]] = lu[[p, k]]
            perm[[k, p]] = perm[[p, k]]
            sign = -sign
        if lu[k, k] != 0.0:
            lu[k + 1:, k] /= lu[k, k]
            lu[k + 1:, k + 1:] -= np.outer(lu[k + 1:, k], lu[k, k + 1:])
    return LUFactors(lu, perm, sign)


def lu_solve(factors: LUFactors, b: np.ndarray) -> np.ndarray:
    lu = factors.lu
    n = lu.shape[0]
    y = np.array(b, dtype=float)[factors.perm]
    for i in range(n):
        y[i] -= lu[i, :i] @ y[:i]
    for i in range(n - 1, -1, -1):
        y[i] = (y[i] - lu[i, i + 1:] @ y[i + 1:]) / lu[i, i]
    return y


def determinant(m: Matrix) -> float:
    """
    Determinant by LU with partial pivoting; the sign comes from the permutation parity.

    Returns exactly 0.0 when a whole pivot column is below 1e-300.
    """
    a = _as_array(m)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NotSquare(f"determinant needs a square matrix, got {a.shape}")
    n = a.shape[0]
    sign = 1.0
    for k in range(n):
        p = k + int(np.argmax(np.abs(a[k:, k])))
        if abs(a[p, k]) < ZERO_PIVOT:
            return 0.0
        if p != k:
            a[[k, p]] = a[[p, k]]
            sign = -sign
        a[k + 1:, k] /= a[k, k]
        a[k + 1:, k + 1:] -= np.outer(a[k + 1:, k], a[k, k + 1:])
    return float(sign * np.prod(np.diag(a)))


def solve_linear(a: Matrix, b: Sequence[float]) -> LinearSolution:
    """
    Solve A x = b.

    Args:
        a: Square or overdetermined (rows >= cols) matrix
        b: Right-hand side of length rows

    Returns:
        LinearSolution; for overdetermined systems `consistent` tells whether
        the least-squares residual is within 1e-8 * (1 + ||b||)

    Raises:
        SingularSystem: a pivot falls below 1e-12 times the largest row absolute sum
            (the matrix infinity norm) of the factored matrix
        DimensionMismatch: shapes do not agree or rows < cols
    """
    arr = _as_array(a)
    rhs = np.array(b, dtype=float).ravel()
    if arr.ndim != 2:
        raise DimensionMismatch(f"expected a 2-D matrix, got shape {arr.shape}")
    rows, cols = arr.shape
    if rhs.shape[0] != rows:
        raise DimensionMismatch(f"right-hand side has {rhs.shape[0]} entries for {rows} rows")
    if rows < cols:
        raise DimensionMismatch(f"underdetermined system: {rows} equations, {cols} unknowns")

    if rows == cols:
        floor = SINGULAR_PIVOT * float(np.abs(arr).sum(axis=1).max())
        x = lu_solve(lu_factor(arr, floor), rhs)
        overdetermined = False
    else:
        normal = arr.T @ arr
        floor = SINGULAR_PIVOT * float(np.abs(normal).sum(axis=1).max())
        factors = lu_factor(normal, floor)
        x = lu_solve(factors, arr.T @ rhs)
        x = x + lu_solve(factors, arr.T @ (rhs - arr @ x))
        overdetermined = True

    residual = float(np.linalg.norm(arr @ x - rhs))
    consistent = residual <= CONSISTENCY_TOL * (1.0 + float(np.linalg.norm(rhs)))
    if overdetermined:
        logger.debug(f"Least-squares solve {rows}x{cols}: residual {residual:.3e}, consistent={consistent}")
    return LinearSolution(x, residual, consistent, overdetermined)

