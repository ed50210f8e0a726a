"""
Independent routes to small spectra and determinants, used to cross-check
the production solvers.

Characteristic polynomial by the Faddeev-LeVerrier recursion, roots by
Durand-Kerner (Weierstrass) iteration, determinant by cofactor expansion.
"""
import cmath
import math
from typing import List

import numpy as np

from src.errors import DimensionTooLarge, NoConvergence, NotSquare
from src.linalg.eigen import pair_conjugates
from src.linalg.matrix import EigenSet, Matrix

MAX_ORACLE_DIM = 4
MAX_SWEEPS = 2000
RESIDUAL_TOL = 1e-10
EPS_NUDGE = 1e-12


def _square_array(m) -> np.ndarray:
    a = m.to_array() if isinstance(m, Matrix) else np.array(m, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NotSquare(f"expected a square matrix, got {a.shape}")
    return a


def characteristic_polynomial(m: Matrix) -> List[float]:
    """
    Coefficients [1, c1, ..., cn] of det(lambda*I - A), highest power first.
    """
    a = _square_array(m)
    n = a.shape[0]
    coeffs = [1.0]
    mk = np.zeros_like(a)
    identity = np.eye(n)
    for k in range(1, n + 1):
        mk = a @ mk + coeffs[-1] * identity
        coeffs.append(-float(np.trace(a @ mk)) / k)
    return coeffs


def _horner(coeffs: List[float], z: complex) -> complex:
    value = 0j
    for c in coeffs:
        value = value * z + c
    return value


def _magnitude(coeffs: List[float], z: complex) -> float:
    """Sum of |c_i| |z|^(n-i): the scale a residual is measured against."""
    r = abs(z)
    total = 0.0
    for c in coeffs:
        total = total * r + abs(c)
    return total


def polynomial_roots(coeffs: List[float]) -> List[complex]:
    """Roots of a monic polynomial by simultaneous Durand-Kerner iteration."""
    n = len(coeffs) - 1
    if n == 0:
        return []
    if n == 1:
        return [complex(-coeffs[1])]
    radius = 2.0 * max(abs(c) ** (1.0 / i) for i, c in enumerate(coeffs) if i > 0) or 1.0
    roots = [radius * cmath.exp(1j * (2 * math.pi * k / n + 0.4)) for k in range(n)]
    for _ in range(MAX_SWEEPS):
        largest_step = 0.0
        for k in range(n):
            denominator = 1 + 0j
            for j in range(n):
                if j != k:
                    denominator *= roots[k] - roots[j]
            if denominator == 0:
                denominator = complex(EPS_NUDGE, EPS_NUDGE)
            step = _horner(coeffs, roots[k]) / denominator
            roots[k] -= step
            largest_step = max(largest_step, abs(step) / (1.0 + abs(roots[k])))
        if largest_step <= 1e-15:
            break
    for z in roots:
        if abs(_horner(coeffs, z)) > RESIDUAL_TOL * _magnitude(coeffs, z):
            raise NoConvergence(f"Durand-Kerner root {z} has residual above {RESIDUAL_TOL}")
    return roots


def char_poly_roots_oracle(m: Matrix) -> EigenSet:
    """
    Spectrum of a matrix of dimension <= 4 via characteristic polynomial roots.

    Raises:
        NotSquare, DimensionTooLarge, NoConvergence
    """
    a = _square_array(m)
    if a.shape[0] > MAX_ORACLE_DIM:
        raise DimensionTooLarge(f"oracle supports dimension <= {MAX_ORACLE_DIM}, got {a.shape[0]}")
    roots = polynomial_roots(characteristic_polynomial(a))
    scale = float(np.abs(a).sum(axis=1).max()) or 1.0
    return EigenSet.from_complex(pair_conjugates(roots, scale))


def cofactor_determinant(m) -> float:
    """Laplace expansion along the first row."""
    a = _square_array(m)
    n = a.shape[0]
    if n == 1:
        return float(a[0, 0])
    total = 0.0
    for j in range(n):
        minor = np.delete(np.delete(a, 0, axis=0), j, axis=1)
        total += (-1) ** j * a[0, j] * cofactor_determinant(minor)
    return float(total)
