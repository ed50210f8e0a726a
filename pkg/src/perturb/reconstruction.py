"""
Reconstruction: recover the original record from published derivative values.

Two paths:
  - affine: when every scheduled derivative has degree <= 1 (parents of degree
    <= 2) the derivative map is A x + c and a single linear solve recovers x.
  - Newton: otherwise, iterate from a caller-supplied starting point. Derivative
    maps of higher-degree fields have several preimages; Newton returns the one
    in the basin of x0.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Optional, Tuple

import numpy as np

from src.config.environment import ENV_CONFIG
from src.calculus import hessian_at
from src.errors import (
    DerivkeyError,
    InconsistentSystem,
    MaxIterations,
    NonAffineDerivative,
    Overflow,
    RankDeficient,
    RowError,
    SingularStep,
    SingularSystem,
)
from src.funcfile.polynomial import Point, Polynomial, VectorField, partial_derivative
from src.linalg.lu import CONSISTENCY_TOL, solve_linear
from src.linalg.matrix import Matrix
from src.models.records import PerturbedRecord, ReconstructionMethod, ReconstructionReport, Schedule

logger = logging.getLogger(__name__)


def _scheduled_derivatives(field: VectorField, schedule: Schedule) -> List[Polynomial]:
    schedule.validate_against(field)
    return [partial_derivative(field.function(e.function), e.variable) for e in schedule.entries]


def is_affine_schedule(field: VectorField, schedule: Schedule) -> bool:
    return all(d.is_affine() for d in _scheduled_derivatives(field, schedule))


def _inf_norm(v) -> float:
    return float(np.max(np.abs(v))) if len(v) else 0.0


def reconstruct_affine(field: VectorField, schedule: Schedule, record: PerturbedRecord) -> ReconstructionReport:
    """
    Solve A x = d - c exactly (square) or by least squares (overdetermined).

    Raises:
        NonAffineDerivative: a scheduled derivative has degree above 1
        RankDeficient: fewer independent equations than variables
        InconsistentSystem: the least-squares residual exceeds 1e-8 * (1 + ||d||inf)
    """
    derivatives = _scheduled_derivatives(field, schedule)
    d = np.array(record.vector(schedule), dtype=float)
    n = field.n
    if len(derivatives) < n:
        raise RankDeficient(f"{len(derivatives)} scheduled values cannot determine {n} variables")

    zero = (0,) * n
    units = [tuple(int(i == k) for i in range(n)) for k in range(n)]
    rows, constants = [], []
    for entry, derivative in zip(schedule.entries, derivatives):
        if not derivative.is_affine():
            raise NonAffineDerivative(
                f"d{entry.function}/d{entry.variable} has degree {derivative.degree}; use Newton reconstruction"
            )
        rows.append([float(derivative.coefficient_of(u)) for u in units])
        constants.append(float(derivative.coefficient_of(zero)))

    a = np.array(rows, dtype=float)
    rhs = d - np.array(constants, dtype=float)
    try:
        solution = solve_linear(Matrix(a), rhs)
    except SingularSystem as e:
        raise RankDeficient(f"scheduled derivatives do not determine every variable: {e.message}") from e

    residual = _inf_norm(a @ solution.x - rhs)
    bound = CONSISTENCY_TOL * (1.0 + _inf_norm(d))
    if residual > bound:
        raise InconsistentSystem(f"published values are inconsistent: residual {residual:.3e} > {bound:.3e}", residual)

    point = field.point(dict(zip(field.variables, solution.x.tolist())))
    logger.info(f"Affine reconstruction from {len(derivatives)} values: residual {residual:.3e}")
    return ReconstructionReport(point=point, residual=residual, iterations=0, method=ReconstructionMethod.AFFINE)


def _residual(derivatives: List[Polynomial], values: List[float], d: np.ndarray) -> np.ndarray:
    return np.array([p.evaluate_values(values) for p in derivatives]) - d


def _residual_jacobian(field: VectorField, schedule: Schedule, point: Point) -> np.ndarray:
    """Row k is the gradient of scheduled derivative k: a row of its parent's Hessian."""
    hessians: Dict[str, np.ndarray] = {}
    rows = []
    for entry in schedule.entries:
        if entry.function not in hessians:
            hessians[entry.function] = hessian_at(field.function(entry.function), point).data
        rows.append(hessians[entry.function][field.variable_index(entry.variable)])
    return np.array(rows, dtype=float)


def reconstruct_newton(
    field: VectorField,
    schedule: Schedule,
    record: PerturbedRecord,
    x0: Point,
    tol: Optional[float] = None,
    max_iter: Optional[int] = None,
) -> ReconstructionReport:
    """
    Newton iteration on r(x) = (scheduled derivative values at x) - d.

    Args:
        field: The vector field
        schedule: Published partials
        record: Published values d
        x0: Starting point; the result is the solution in its basin
        tol: Relative residual tolerance, success when ||r||inf <= tol * (1 + ||d||inf)
        max_iter: Maximum number of Newton steps

    Raises:
        MaxIterations: not converged; carries the best residual and point seen
        SingularStep: the residual Jacobian is singular at an iterate
    """
    tol = ENV_CONFIG["newton_tol"] if tol is None else tol
    max_iter = ENV_CONFIG["newton_max_iter"] if max_iter is None else max_iter
    derivatives = _scheduled_derivatives(field, schedule)
    d = np.array(record.vector(schedule), dtype=float)
    if len(derivatives) < field.n:
        raise RankDeficient(f"{len(derivatives)} scheduled values cannot determine {field.n} variables")

    bound = tol * (1.0 + _inf_norm(d))
    x = np.array(x0.vector(field.variables), dtype=float)
    best: Tuple[float, np.ndarray] = (float("inf"), x.copy())

    for iteration in range(max_iter + 1):
        try:
            r = _residual(derivatives, x.tolist(), d)
        except Overflow:
            logger.debug(f"Newton iterate overflowed at iteration {iteration}")
            break
        norm = _inf_norm(r)
        if norm < best[0]:
            best = (norm, x.copy())
        if norm <= bound:
            point = field.point(dict(zip(field.variables, x.tolist())))
            logger.info(f"Newton reconstruction converged in {iteration} iteration(s): residual {norm:.3e}")
            return ReconstructionReport(
                point=point, residual=norm, iterations=iteration, method=ReconstructionMethod.NEWTON
            )
        if iteration == max_iter or not np.all(np.isfinite(r)):
            break

        point = field.point(dict(zip(field.variables, x.tolist())))
        try:
            step = solve_linear(Matrix(_residual_jacobian(field, schedule, point)), -r).x
        except SingularSystem as e:
            raise SingularStep(f"singular Newton step at iteration {iteration + 1}: {e.message}") from e
        x = x + step
        if not np.all(np.isfinite(x)):
            break

    best_point = field.point(dict(zip(field.variables, best[1].tolist())))
    logger.warning(f"Newton reconstruction stopped after {max_iter} iteration(s), best residual {best[0]:.3e}")
    raise MaxIterations(
        f"no convergence within {max_iter} iterations (best residual {best[0]:.3e})", best[0], best_point
    )


def reconstruct_table(
    field: VectorField,
    schedule: Schedule,
    records: List[PerturbedRecord],
    x0: Optional[Point] = None,
    tol: Optional[float] = None,
    max_iter: Optional[int] = None,
) -> List[ReconstructionReport]:
    """
    Reconstruct every record, row order preserved.

    The affine path is used when every scheduled derivative is affine,
    Newton from x0 otherwise.
    """
    affine = is_affine_schedule(field, schedule)
    if not affine and x0 is None:
        raise NonAffineDerivative("schedule has non-affine derivatives; Newton reconstruction needs a starting point")

    def reconstruct_row(index: int) -> ReconstructionReport:
        try:
            if affine:
                return reconstruct_affine(field, schedule, records[index])
            return reconstruct_newton(field, schedule, records[index], x0, tol, max_iter)
        except DerivkeyError as e:
            raise RowError(index + 1, e) from e

    with ThreadPoolExecutor(max_workers=ENV_CONFIG["max_workers"]) as executor:
        reports = list(executor.map(reconstruct_row, range(len(records))))
    logger.info(f"Reconstructed {len(reports)} record(s) via {'affine solve' if affine else 'Newton'}")
    return reports
