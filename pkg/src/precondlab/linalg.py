"""Dense complex matrix kernel.

Frobenius geometry, Hermitian eigendecomposition, singular values and
Hermitian solves on plain ``numpy`` arrays in double-precision complex.
Every other module builds on these routines.
"""

from __future__ import annotations

import numpy as np

from .errors import (
    DimensionMismatchError,
    NoConvergenceError,
    NotHermitianError,
    SingularMatrixError,
)

# Tolerance used by eigensolver/solver preconditions ("Hermitian within
# tolerance"); the stricter 1e-12 flag check is `is_hermitian`'s default.
HERMITIAN_EIG_TOL = 1e-10
SINGULARITY_RTOL = 1e-12


def as_matrix(a) -> np.ndarray:
    """Coerce to a 2-d complex128 array without copying when possible."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise DimensionMismatchError(f"expected a 2-d matrix, got ndim={m.ndim}")
    return m


def as_square(a) -> np.ndarray:
    m = as_matrix(a)
    if m.shape[0] != m.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got shape {m.shape}")
    return m


def hermitian_defect(a) -> float:
    """Max entrywise deviation |A - A*|, scaled check left to callers."""
    m = as_square(a)
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


def is_hermitian(a, tol: float = 1e-12) -> bool:
    """True when max|A[j,k] - conj(A[k,j])| <= tol * (1 + max|entry|)."""
    m = as_square(a)
    scale = 1.0 + (float(np.max(np.abs(m))) if m.size else 0.0)
    return hermitian_defect(m) <= tol * scale


def frobenius_norm_sq(a) -> float:
    """Sum of squared moduli of all entries, equal to trace(A* A)."""
    m = as_matrix(a)
    return float(np.vdot(m, m).real)


def operator_norm(a) -> float:
    """Spectral norm (largest singular value)."""
    s = singular_values(a)
    return float(s[-1]) if s.size else 0.0


def hermitian_eig(a, tol: float = HERMITIAN_EIG_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix.

    Returns ``(values, vectors)`` with eigenvalues sorted ascending and
    orthonormal eigenvectors in the columns, so that A @ V = V @ diag(w).

    Raises NotHermitianError when the symmetry check fails and
    NoConvergenceError when the underlying iteration does not converge.
    """
    m = as_square(a)
    if not is_hermitian(m, tol=tol):
        raise NotHermitianError(
            f"matrix is not Hermitian: defect {hermitian_defect(m):.3e}"
        )
    # Symmetrize to remove representable round-off before factorizing.
    h = 0.5 * (m + m.conj().T)
    try:
        w, v = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:
        raise NoConvergenceError(f"eigh failed to converge: {exc}") from exc
    return w, v


def hermitian_eigvalues(a, tol: float = HERMITIAN_EIG_TOL) -> np.ndarray:
    """Eigenvalues only, sorted ascending."""
    m = as_square(a)
    if not is_hermitian(m, tol=tol):
        raise NotHermitianError(
            f"matrix is not Hermitian: defect {hermitian_defect(m):.3e}"
        )
    try:
        return np.linalg.eigvalsh(0.5 * (m + m.conj().T))
    except np.linalg.LinAlgError as exc:
        raise NoConvergenceError(f"eigvalsh failed to converge: {exc}") from exc


def singular_values(a) -> np.ndarray:
    """Singular values sorted ascending (nonnegative square roots of eig(A*A))."""
    m = as_matrix(a)
    try:
        s = np.linalg.svd(m, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise NoConvergenceError(f"svd failed to converge: {exc}") from exc
    return s[::-1].copy()


def solve_hermitian(a, b) -> np.ndarray:
    """Solve A x = b for Hermitian, numerically nonsingular A."""
    m = as_square(a)
    rhs = np.asarray(b, dtype=np.complex128)
    if rhs.shape[0] != m.shape[0]:
        raise DimensionMismatchError(
            f"rhs length {rhs.shape[0]} does not match order {m.shape[0]}"
        )
    w = hermitian_eigvalues(m)
    lo, hi = float(np.min(np.abs(w))), float(np.max(np.abs(w)))
    if hi == 0.0 or lo <= SINGULARITY_RTOL * hi:
        raise SingularMatrixError(
            f"min |eigenvalue| {lo:.3e} below {SINGULARITY_RTOL:.0e} * max {hi:.3e}"
        )
    return np.linalg.solve(0.5 * (m + m.conj().T), rhs)
