"""Finite Toeplitz and Hankel sections of a symbol.

Includes the bounded product-correction T_n(g^2) - T_n(g)^2 whose rank and
norm stay bounded as the order grows, and an FFT-backed matrix-free
Toeplitz operator for iterative solvers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import DimensionMismatchError
from .linalg import as_square, operator_norm, singular_values
from .symbols import Symbol, product

RANK_CUTOFF = 1e-10


def toeplitz_section(f: Symbol, n: int) -> np.ndarray:
    """Dense n x n section with entries a_{j-k}; Hermitian iff f is real."""
    if n < 1:
        raise ValueError("order must be >= 1")
    col = np.array([f.coefficient(m) for m in range(n)], dtype=np.complex128)
    row = np.array([f.coefficient(-m) for m in range(n)], dtype=np.complex128)
    return scipy.linalg.toeplitz(col, row)


def hankel_section(f: Symbol, n: int) -> np.ndarray:
    """Dense n x n section with entries a_{j+k+1}; rank <= degree(f)."""
    if n < 1:
        raise ValueError("order must be >= 1")
    vals = np.array(
        [f.coefficient(m + 1) for m in range(2 * n - 1)], dtype=np.complex128
    )
    return scipy.linalg.hankel(vals[:n], vals[n - 1 :])


def product_correction(g: Symbol, n: int) -> np.ndarray:
    """R_n = T_n(g^2) - T_n(g)^2 for a real symbol g.

    The correction is supported on the degree(g)-sized corners, so its rank
    is at most 2*degree(g) and its spectral norm does not change with n once
    n >= 2*degree(g) + 2.
    """
    if not g.is_real:
        raise ValueError("product_correction requires a real symbol")
    t = toeplitz_section(g, n)
    return toeplitz_section(product(g, g), n) - t @ t


def numerical_rank(a, cutoff: float = RANK_CUTOFF) -> int:
    """Number of singular values above the cutoff."""
    return int(np.count_nonzero(singular_values(a) > cutoff))


@dataclass(frozen=True)
class WidomReport:
    """Rank and spectral norm of the product correction along a size ladder."""

    symbol_label: str
    degree: int
    ladder: tuple[int, ...]
    ranks: dict[int, int]
    norms: dict[int, float]
    rank_bound_ok: bool
    norm_constant_ok: bool


def widom_correction_report(
    g: Symbol,
    ladder,
    rank_cutoff: float = RANK_CUTOFF,
    norm_spread_tol: float = 1e-9,
) -> WidomReport:
    """Check rank(R_n) <= 2 deg(g) and norm constancy across the ladder."""
    ladder = tuple(int(n) for n in ladder)
    ranks: dict[int, int] = {}
    norms: dict[int, float] = {}
    for n in ladder:
        r = product_correction(g, n)
        ranks[n] = numerical_rank(r, cutoff=rank_cutoff)
        norms[n] = operator_norm(r)
    bound = 2 * g.degree
    vals = list(norms.values())
    return WidomReport(
        symbol_label=g.label,
        degree=g.degree,
        ladder=ladder,
        ranks=ranks,
        norms=norms,
        rank_bound_ok=all(r <= bound for r in ranks.values()),
        norm_constant_ok=(max(vals) - min(vals)) <= norm_spread_tol,
    )


class ToeplitzOperator:
    """Matrix-free Toeplitz section with O(n log n) products.

    Products use the standard embedding of the section into a circulant of
    order 2n; `dense()` materializes the section for direct comparisons.
    """

    def __init__(self, symbol: Symbol, order: int):
        if order < 1:
            raise ValueError("order must be >= 1")
        self.symbol = symbol
        self.order = int(order)
        n = self.order
        ext = np.zeros(2 * n, dtype=np.complex128)
        for m in range(n):
            ext[m] = symbol.coefficient(m)
        for m in range(1, n):
            ext[2 * n - m] = symbol.coefficient(-m)
        self._circ_fft = np.fft.fft(ext)

    @property
    def shape(self):
        return (self.order, self.order)

    def matvec(self, x) -> np.ndarray:
        v = np.asarray(x, dtype=np.complex128)
        if v.shape != (self.order,):
            raise DimensionMismatchError(
                f"vector length {v.shape} does not match order {self.order}"
            )
        padded = np.zeros(2 * self.order, dtype=np.complex128)
        padded[: self.order] = v
        out = np.fft.ifft(self._circ_fft * np.fft.fft(padded))[: self.order]
        return out

    def dense(self) -> np.ndarray:
        return toeplitz_section(self.symbol, self.order)


def as_linear_operator(a):
    """Normalize a dense matrix or ToeplitzOperator to (order, matvec, dense)."""
    if isinstance(a, ToeplitzOperator):
        return a.order, a.matvec, a.dense
    m = as_square(a)
    return m.shape[0], (lambda x: m @ x), (lambda: m)
