"""
Eigenvalues of dense real matrices.

Householder reduction to upper Hessenberg form, then shifted QR iteration
(Wilkinson shift from the trailing 2x2 block, complex arithmetic, Givens
rotations) with deflation. Real input yields exact conjugate pairs.
"""
import cmath
import logging

import numpy as np

from src.config.environment import ENV_CONFIG
from src.errors import DimensionTooLarge, NoConvergence, NotSquare
from src.linalg.matrix import EigenSet, Matrix

logger = logging.getLogger(__name__)

EPS = np.finfo(float).eps
ITERATIONS_PER_EIGENVALUE = 40
EXCEPTIONAL_SHIFT_EVERY = 10
REAL_IMAG_TOL = 1e-10
PAIR_TOL = 1e-6


def hessenberg(a: np.ndarray) -> np.ndarray:
    """Similarity-reduce a square matrix to upper Hessenberg form with Householder reflectors."""
    h = np.array(a, dtype=float)
    n = h.shape[0]
    for k in range(n - 2):
        x = h[k + 1:, k].copy()
        norm = np.linalg.norm(x)
        if norm == 0.0:
            continue
        alpha = -norm if x[0] >= 0 else norm
        v = x
        v[0] -= alpha
        vnorm = np.linalg.norm(v)
        if vnorm == 0.0:
            continue
        v /= vnorm
        h[k + 1:, :] -= 2.0 * np.outer(v, v @ h[k + 1:, :])
        h[:, k + 1:] -= 2.0 * np.outer(h[:, k + 1:] @ v, v)
        h[k + 2:, k] = 0.0
    return h


def _wilkinson_shift(block: np.ndarray) -> complex:
    a, b = block[-2, -2], block[-2, -1]
    c, d = block[-1, -2], block[-1, -1]
    half_trace = (a + d) / 2
    disc = cmath.sqrt((a - d) ** 2 / 4 + b * c)
    mu1, mu2 = half_trace + disc, half_trace - disc
    return mu1 if abs(mu1 - d) <= abs(mu2 - d) else mu2


def _qr_step(h: np.ndarray, lo: int, hi: int, shift: complex) -> None:
    """One shifted QR step on the active block h[lo:hi+1, lo:hi+1], in place."""
    size = hi - lo + 1
    block = h[lo:hi + 1, lo:hi + 1]
    block -= shift * np.eye(size)
    rotations = []
    for k in range(size - 1):
        x, y = block[k, k], block[k + 1, k]
        r = np.hypot(abs(x), abs(y))
        if r == 0.0:
            rotations.append(None)
            continue
        c, s = x / r, y / r
        rows = block[k:k + 2, k:].copy()
        block[k, k:] = np.conj(c) * rows[0] + np.conj(s) * rows[1]
        block[k + 1, k:] = -s * rows[0] + c * rows[1]
        rotations.append((c, s))
    for k, rot in enumerate(rotations):
        if rot is None:
            continue
        c, s = rot
        stop = min(k + 2, size - 1) + 1
        cols = block[:stop, k:k + 2].copy()
        block[:stop, k] = cols[:, 0] * c + cols[:, 1] * s
        block[:stop, k + 1] = -cols[:, 0] * np.conj(s) + cols[:, 1] * np.conj(c)
    block += shift * np.eye(size)


def pair_conjugates(values: list, scale: float) -> list:
    """Snap near-real values to the real axis and average near-conjugate pairs into exact pairs."""
    snapped = []
    for z in values:
        if abs(z.imag) <= REAL_IMAG_TOL * scale:
            z = complex(z.real, 0.0)
        snapped.append(z)

    upper = [i for i, z in enumerate(snapped) if z.imag > 0]
    lower = [i for i, z in enumerate(snapped) if z.imag < 0]
    for i in upper:
        if not lower:
            break
        target = snapped[i].conjugate()
        j = min(lower, key=lambda k: abs(snapped[k] - target))
        if abs(snapped[j] - target) > PAIR_TOL * scale:
            continue
        lower.remove(j)
        re = (snapped[i].real + snapped[j].real) / 2
        im = (snapped[i].imag - snapped[j].imag) / 2
        snapped[i], snapped[j] = complex(re, im), complex(re, -im)
    return snapped


def eigenvalues(m: Matrix) -> EigenSet:
    """
    Compute the spectrum of a square real matrix.

    Args:
        m: Square matrix of dimension <= 64

    Returns:
        EigenSet in canonical order

    Raises:
        NotSquare, DimensionTooLarge, NoConvergence (more than 40*n QR iterations)
    """
    a = m.to_array() if isinstance(m, Matrix) else np.array(m, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NotSquare(f"eigenvalues need a square matrix, got {a.shape}")
    n = a.shape[0]
    if n > ENV_CONFIG["eigen_max_dim"]:
        raise DimensionTooLarge(f"dimension {n} exceeds the limit of {ENV_CONFIG['eigen_max_dim']}")

    h = hessenberg(a).astype(complex)
    scale = float(np.abs(a).sum(axis=1).max()) or 1.0
    budget = ITERATIONS_PER_EIGENVALUE * n
    iterations = 0
    since_deflation = 0
    found = []
    hi = n - 1
    while hi >= 0:
        if hi == 0:
            found.append(h[0, 0])
            break
        lo = hi
        while lo > 0:
            neighbourhood = abs(h[lo - 1, lo - 1]) + abs(h[lo, lo])
            if neighbourhood == 0.0:
                neighbourhood = scale
            if abs(h[lo, lo - 1]) <= EPS * neighbourhood:
                h[lo, lo - 1] = 0.0
                break
            lo -= 1
        if lo == hi:
            found.append(h[hi, hi])
            hi -= 1
            since_deflation = 0
            continue

        iterations += 1
        since_deflation += 1
        if iterations > budget:
            raise NoConvergence(f"QR iteration did not converge within {budget} iterations")
        if since_deflation % EXCEPTIONAL_SHIFT_EVERY == 0:
            shift = h[hi, hi] + 0.75 * abs(h[hi, hi - 1]) * (1 + 1j)
        else:
            shift = _wilkinson_shift(h[hi - 1:hi + 1, hi - 1:hi + 1])
        _qr_step(h, lo, hi, shift)

    logger.debug(f"Eigenvalues of {n}x{n} matrix after {iterations} QR iterations")
    return EigenSet.from_complex(pair_conjugates(found, scale))
