"""Entry-generated bounded operators and their truncation experiments.

An OperatorSource produces the matrix elements of a bounded operator on a
separable Hilbert space in the standard coordinate basis; truncations
P_n A P_n are plain dense sections.  The preconditioner of a source is the
algebra projection of its truncation, and distribution-sense convergence
is measured by the clustering of the projected truncations against the
truncations themselves.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .algebras import project
from .clustering import DEFAULT_EPS_GRID, DEFAULT_LADDER, ClusterReport, build_cluster_report
from .errors import InvariantViolationError
from .korovkin import resolve_algebra_factory
from .symbols import Symbol

HS_TAIL_FRACTION_MAX = 0.01

DECAY_CLASSES = ("hilbert_schmidt", "compact", "bounded")


@dataclass(frozen=True)
class OperatorSource:
    """Deterministic entry generator (j, k) -> complex, vectorized over arrays."""

    entry: Callable[[np.ndarray, np.ndarray], np.ndarray]
    decay_class: str
    label: str
    self_adjoint: bool = False

    def __post_init__(self):
        if self.decay_class not in DECAY_CLASSES:
            raise ValueError(f"unknown decay class {self.decay_class!r}")


def truncate(src: OperatorSource, n: int) -> np.ndarray:
    """Dense section with entries (j, k) for 0 <= j, k < n."""
    if n < 1:
        raise ValueError("order must be >= 1")
    jj, kk = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    vals = np.asarray(src.entry(jj, kk), dtype=np.complex128)
    if vals.shape != (n, n):
        raise ValueError("entry generator must be vectorized over index arrays")
    return vals


def preconditioner_of(src: OperatorSource, alg_kind, n: int, seed: int = 42) -> np.ndarray:
    """Algebra projection of the order-n truncation."""
    _, factory = resolve_algebra_factory(alg_kind, seed=seed)
    return project(factory(n), truncate(src, n))


def hs_tail_fraction(src: OperatorSource, n: int) -> float:
    """Squared-entry mass on the border of the order-n section.

    Fraction of the total squared mass of the n x n section carried by the
    entries outside the n/2 x n/2 leading subsection; small values back up
    a declared Hilbert-Schmidt decay class.
    """
    full = truncate(src, n)
    half = n // 2
    total = float(np.sum(np.abs(full) ** 2))
    inner = float(np.sum(np.abs(full[:half, :half]) ** 2))
    if total == 0.0:
        return 0.0
    return (total - inner) / total


def distribution_convergence(
    src: OperatorSource,
    alg_kind,
    ladder=DEFAULT_LADDER,
    eps_grid=DEFAULT_EPS_GRID,
    seed: int = 42,
) -> ClusterReport:
    """Cluster analysis of the projected truncations against the truncations."""
    if not src.self_adjoint:
        raise ValueError("distribution convergence is defined for self-adjoint sources")
    label, factory = resolve_algebra_factory(alg_kind, seed=seed)
    ladder = tuple(int(n) for n in ladder)
    if src.decay_class == "hilbert_schmidt":
        frac = hs_tail_fraction(src, max(ladder))
        if frac > HS_TAIL_FRACTION_MAX:
            raise InvariantViolationError(
                f"source {src.label!r} declares hilbert_schmidt decay but its "
                f"border mass fraction is {frac:.3%} (> {HS_TAIL_FRACTION_MAX:.0%})"
            )
    pairs = {}
    for n in ladder:
        a = truncate(src, n)
        pairs[n] = (a, project(factory(n), a))
    return build_cluster_report(
        pairs, eps_grid, label=f"{src.label} vs {label} projection"
    )


# ---------------------------------------------------------------------------
# built-in source catalog


def identity_source() -> OperatorSource:
    return OperatorSource(
        entry=lambda j, k: (j == k).astype(np.complex128),
        decay_class="bounded",
        label="identity",
        self_adjoint=True,
    )


def rank1_source(p: float) -> OperatorSource:
    """Geometric rank-one kernel p^(j+k), Hilbert-Schmidt for |p| < 1."""
    if not 0 < abs(p) < 1:
        raise ValueError("rank1 parameter must satisfy 0 < |p| < 1")

    def entry(j, k, _p=float(p)):
        return (_p ** (j + k)).astype(np.complex128)

    return OperatorSource(
        entry=entry,
        decay_class="hilbert_schmidt",
        label=f"rank1({p})",
        self_adjoint=True,
    )


def hs_decay_source(p: float, c: float = 1.0) -> OperatorSource:
    """Kernel c / ((1+j)(1+k))^p, Hilbert-Schmidt for p > 1/2."""
    if p <= 0.5:
        raise ValueError("hs_decay parameter must be > 1/2 for square summability")

    def entry(j, k, _p=float(p), _c=float(c)):
        return (_c / ((1.0 + j) * (1.0 + k)) ** _p).astype(np.complex128)

    return OperatorSource(
        entry=entry,
        decay_class="hilbert_schmidt",
        label=f"hs_decay({p})",
        self_adjoint=True,
    )


def toeplitz_source(f: Symbol, label: str = "") -> OperatorSource:
    def entry(j, k, _f=f):
        m = np.asarray(j) - np.asarray(k)
        out = np.zeros(m.shape, dtype=np.complex128)
        for freq, amp in _f.coefficients.items():
            out[m == freq] = amp
        return out

    return OperatorSource(
        entry=entry,
        decay_class="bounded",
        label=label or f"toeplitz:{f.label}",
        self_adjoint=f.is_real,
    )


def diag_plus_compact_source() -> OperatorSource:
    """Bounded non-compact diagonal plus a Hilbert-Schmidt perturbation.

    Diagonal alternates between 1.5 and 2.5; the perturbation is the
    hs_decay(1.5) kernel.  Self-adjoint and bounded, not compact.
    """

    def entry(j, k):
        diag = np.where(j % 2 == 0, 2.5, 1.5) * (j == k)
        compact = 1.0 / ((1.0 + j) * (1.0 + k)) ** 1.5
        return (diag + compact).astype(np.complex128)

    return OperatorSource(
        entry=entry,
        decay_class="bounded",
        label="diag_plus_compact",
        self_adjoint=True,
    )


_PARAM_RE = re.compile(r"^(?P<name>[a-z0-9_]+)\((?P<arg>[^)]+)\)$")


def source_from_spec(text: str, symbol_resolver=None) -> OperatorSource:
    """Parse catalog grammar: identity, rank1(p), hs_decay(p),
    diag_plus_compact, toeplitz:<symbol-spec>."""
    spec = text.strip()
    if spec == "identity":
        return identity_source()
    if spec == "diag_plus_compact":
        return diag_plus_compact_source()
    if spec.startswith("toeplitz:"):
        if symbol_resolver is None:
            raise ValueError("toeplitz sources need a symbol resolver")
        return toeplitz_source(symbol_resolver(spec[len("toeplitz:"):]))
    m = _PARAM_RE.match(spec)
    if m:
        arg = float(m.group("arg"))
        if m.group("name") == "rank1":
            return rank1_source(arg)
        if m.group("name") == "hs_decay":
            return hs_decay_source(arg)
    raise ValueError(f"unknown operator source {text!r}")
