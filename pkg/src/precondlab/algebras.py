"""Trigonometric transform algebras and Frobenius-optimal projections.

A TransformAlgebra is the commutative matrix algebra diagonalized by a
fixed unitary built from a generalized trigonometric Vandermonde matrix:
row i of the unitary holds the basis functions evaluated at grid point
x_i.  The built-in kinds are

  fourier  U[i, j] = exp(i j x_i) / sqrt(n),              x_i = 2 pi i / n
  sine     U[i, j] = sqrt(2/(n+1)) sin((j+1) x_i),        x_i = (i+1) pi / (n+1)
  hartley  U[i, j] = (cos(j x_i) + sin(j x_i)) / sqrt(n), x_i = 2 pi i / n

plus custom Vandermonde algebras from any user-supplied unitary.

The Frobenius-optimal projection of A onto the algebra keeps only the
diagonal of U* A U:  project(A) = U diag(U* A U) U*.  The pinched variant
keeps whole diagonal blocks instead of single entries.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
import scipy.linalg

from .errors import BadPartitionError, DimensionMismatchError, NotUnitaryError
from .linalg import as_square, frobenius_norm_sq
from .symbols import Symbol

UNITARITY_RTOL = 1e-10

ALGEBRA_KINDS = ("fourier", "sine", "hartley")


@dataclass(frozen=True)
class TransformAlgebra:
    """Immutable transform algebra: unitary, grid and basis functions.

    ``basis(xs)`` returns the (len(xs), n) generalized Vandermonde block of
    basis functions evaluated at arbitrary points; it is None for custom
    algebras that come without a trigonometric construction.
    """

    kind: str
    order: int
    unitary: np.ndarray
    grid: Optional[np.ndarray] = None
    basis: Optional[Callable[[np.ndarray], np.ndarray]] = None

    def unitarity_defect(self) -> float:
        u = self.unitary
        return float(
            np.linalg.norm(u.conj().T @ u - np.eye(self.order), ord="fro")
        )


def _check_unitary(u: np.ndarray, kind: str) -> None:
    n = u.shape[0]
    defect = float(np.linalg.norm(u.conj().T @ u - np.eye(n), ord="fro"))
    if defect > UNITARITY_RTOL * np.sqrt(n):
        raise NotUnitaryError(
            f"{kind} transform of order {n} is not unitary: defect {defect:.3e}"
        )


def make_algebra(kind: str, n: int) -> TransformAlgebra:
    """Construct a built-in algebra of order n (n >= 2)."""
    if n < 2:
        raise ValueError("order must be >= 2")
    kind = kind.lower()
    if kind == "fourier":
        grid = 2.0 * np.pi * np.arange(n) / n

        def basis(xs, _n=n):
            xs = np.atleast_1d(np.asarray(xs, dtype=np.float64))
            return np.exp(1j * np.outer(xs, np.arange(_n))) / np.sqrt(_n)

    elif kind == "sine":
        grid = np.pi * np.arange(1, n + 1) / (n + 1)

        def basis(xs, _n=n):
            xs = np.atleast_1d(np.asarray(xs, dtype=np.float64))
            block = np.sin(np.outer(xs, np.arange(1, _n + 1)))
            return np.sqrt(2.0 / (_n + 1)) * block.astype(np.complex128)

    elif kind == "hartley":
        grid = 2.0 * np.pi * np.arange(n) / n

        def basis(xs, _n=n):
            xs = np.atleast_1d(np.asarray(xs, dtype=np.float64))
            angles = np.outer(xs, np.arange(_n))
            return ((np.cos(angles) + np.sin(angles)) / np.sqrt(_n)).astype(
                np.complex128
            )

    else:
        raise ValueError(
            f"unknown algebra kind {kind!r}; built-ins are {ALGEBRA_KINDS}"
        )
    unitary = basis(grid)
    _check_unitary(unitary, kind)
    return TransformAlgebra(kind=kind, order=n, unitary=unitary, grid=grid, basis=basis)


def custom_algebra(
    unitary,
    grid=None,
    basis: Optional[Callable[[np.ndarray], np.ndarray]] = None,
    kind: str = "custom",
) -> TransformAlgebra:
    """Wrap an arbitrary unitary as a CustomVandermonde algebra."""
    u = as_square(np.asarray(unitary, dtype=np.complex128))
    _check_unitary(u, kind)
    g = None if grid is None else np.asarray(grid, dtype=np.float64)
    return TransformAlgebra(kind=kind, order=u.shape[0], unitary=u, grid=g, basis=basis)


def random_unitary_algebra(n: int, seed: int = 42) -> TransformAlgebra:
    """Haar-ish random unitary algebra, the negative control for clustering."""
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    # Fix the phase so the construction is a deterministic function of seed.
    q = q * (np.diagonal(r) / np.abs(np.diagonal(r)))
    return custom_algebra(q, kind="custom")


def algebra_diagonal(alg: TransformAlgebra, a) -> np.ndarray:
    """diag(U* A U): the algebra coordinates of the projection of A."""
    m = as_square(a)
    if m.shape[0] != alg.order:
        raise DimensionMismatchError(
            f"matrix order {m.shape[0]} does not match algebra order {alg.order}"
        )
    u = alg.unitary
    return np.einsum("ji,ji->i", u.conj(), m @ u)


def project(alg: TransformAlgebra, a) -> np.ndarray:
    """Frobenius-optimal approximant of A inside the algebra."""
    u = alg.unitary
    d = algebra_diagonal(alg, a)
    return (u * d) @ u.conj().T


def project_toeplitz_fast(f: Symbol, n: int) -> np.ndarray:
    """Closed-form Fourier-algebra projection of a Toeplitz section.

    The result is the circulant whose first column is
    c_k = ((n - k) a_k + k a_{k-n}) / n; it agrees with the generic
    projection onto the Fourier algebra to round-off and costs O(n log n)
    for the coefficients plus the O(n^2) write of the dense result.
    """
    if n < 1:
        raise ValueError("order must be >= 1")
    c = np.zeros(n, dtype=np.complex128)
    # Only the symbol's nonzero frequencies contribute; |freq| >= n falls
    # outside the section entirely.
    for freq, amp in f.coefficients.items():
        if 0 <= freq < n:
            c[freq] += (n - freq) * amp / n
        elif -n < freq < 0:
            c[n + freq] += (n + freq) * amp / n
    return scipy.linalg.circulant(c)


def circulant_eigenvalues(first_column) -> np.ndarray:
    """Eigenvalues of a circulant, ordered like the Fourier algebra columns."""
    return np.fft.fft(np.asarray(first_column, dtype=np.complex128))


@dataclass(frozen=True)
class PinchingPartition:
    """Disjoint index blocks covering 0..n-1 (the projections P_k)."""

    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        blocks = tuple(tuple(int(i) for i in b) for b in self.blocks)
        object.__setattr__(self, "blocks", blocks)
        seen: set[int] = set()
        for b in blocks:
            if not b:
                raise BadPartitionError("empty block in pinching partition")
            if seen.intersection(b):
                raise BadPartitionError("overlapping blocks in pinching partition")
            seen.update(b)
        order = len(seen)
        if seen != set(range(order)):
            raise BadPartitionError("blocks do not cover a contiguous index range")
        object.__setattr__(self, "_order", order)

    @property
    def order(self) -> int:
        return self._order

    @property
    def count(self) -> int:
        return len(self.blocks)


def singleton_partition(n: int) -> PinchingPartition:
    return PinchingPartition(tuple((i,) for i in range(n)))


def single_block_partition(n: int) -> PinchingPartition:
    return PinchingPartition((tuple(range(n)),))


def contiguous_partition(n: int, block_size: int) -> PinchingPartition:
    """Contiguous blocks of the given size; the last block may be shorter."""
    if block_size < 1:
        raise ValueError("block_size must be >= 1")
    blocks = tuple(
        tuple(range(start, min(start + block_size, n)))
        for start in range(0, n, block_size)
    )
    return PinchingPartition(blocks)


def pinch(partition: PinchingPartition, a) -> np.ndarray:
    """Block-diagonal part of A: sum_k P_k A P_k."""
    m = as_square(a)
    if partition.order != m.shape[0]:
        raise BadPartitionError(
            f"partition covers {partition.order} indices, matrix order is {m.shape[0]}"
        )
    out = np.zeros_like(m)
    for block in partition.blocks:
        idx = np.ix_(block, block)
        out[idx] = m[idx]
    return out


def project_pinched(alg: TransformAlgebra, partition: PinchingPartition, a) -> np.ndarray:
    """Modified (pinched) projection U pinch(U* A U) U*.

    With singleton blocks this reduces to the plain projection; with a
    single block it is the identity map.  It satisfies the same linearity,
    adjoint, trace and Frobenius-Pythagoras identities and is never farther
    from A than the plain projection.
    """
    m = as_square(a)
    if m.shape[0] != alg.order:
        raise DimensionMismatchError(
            f"matrix order {m.shape[0]} does not match algebra order {alg.order}"
        )
    u = alg.unitary
    transformed = u.conj().T @ m @ u
    return u @ pinch(partition, transformed) @ u.conj().T


def projection_defect_sq(alg: TransformAlgebra, a) -> float:
    """Squared Frobenius distance from A to its algebra projection."""
    m = as_square(a)
    return frobenius_norm_sq(m - project(alg, m))
