"""Cluster quantification and classification for matrix sequences.

Outliers are singular values of A_n - B_n at or above a threshold eps.
Whether a sequence clusters uniformly, strongly, weakly or not at all is
undecidable from finite data, so the classifier applies fixed desk-scale
decision rules: plateaus of the last three ladder counts (within +-1),
log-log growth slopes (weak iff <= 0.8 for every eps), and a bounded
Frobenius trend (within 1.2x of the second ladder value).  All thresholds
are keyword-configurable with these defaults.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import (
    DimensionMismatchError,
    InsufficientLadderError,
    NotPositiveDefiniteError,
)
from .linalg import (
    as_square,
    frobenius_norm_sq,
    hermitian_eig,
    hermitian_eigvalues,
    is_hermitian,
    singular_values,
)

DEFAULT_LADDER = (64, 128, 256, 512)
DEFAULT_EPS_GRID = (0.2, 0.1, 0.05, 0.01)

PLATEAU_TOL = 1
SLOPE_THRESHOLD = 0.8
BOUNDED_RATIO = 1.2


def outlier_count(a, b, eps: float) -> int:
    """Number of singular values of A - B that are >= eps."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    ma, mb = as_square(a), as_square(b)
    if ma.shape != mb.shape:
        raise DimensionMismatchError(f"shapes {ma.shape} and {mb.shape} differ")
    return int(np.count_nonzero(singular_values(ma - mb) >= eps))


def _validate_ladder(ladder) -> tuple[int, ...]:
    ladder = tuple(int(n) for n in ladder)
    if len(ladder) < 4:
        raise InsufficientLadderError(f"need >= 4 ladder sizes, got {len(ladder)}")
    for a, b in zip(ladder, ladder[1:]):
        if b != 2 * a:
            raise InsufficientLadderError(
                f"ladder must double at each step, got {a} -> {b}"
            )
    return ladder


def _fit_slope(ns, counts) -> Optional[float]:
    """Least-squares slope of log N vs log n over entries with N >= 1."""
    pts = [(np.log(n), np.log(c)) for n, c in zip(ns, counts) if c >= 1]
    if len(pts) < 2:
        return None
    xs = np.array([p[0] for p in pts])
    ys = np.array([p[1] for p in pts])
    return float(np.polyfit(xs, ys, 1)[0])


def classify(
    counts: dict,
    ladder,
    epsilons,
    plateau_tol: int = PLATEAU_TOL,
    slope_threshold: float = SLOPE_THRESHOLD,
) -> tuple[str, dict]:
    """Classify a table N(n, eps) of outlier counts.

    Returns ``(classification, slopes)`` where classification is one of
    'uniform', 'strong', 'weak', 'none' and slopes maps eps to the fitted
    log-log growth exponent (None when fewer than two nonzero counts).
    """
    ladder = _validate_ladder(ladder)
    epsilons = tuple(float(e) for e in epsilons)
    last3 = ladder[-3:]

    slopes: dict[float, Optional[float]] = {}
    plateau: dict[float, bool] = {}
    for eps in epsilons:
        per_eps = [int(counts[(n, eps)]) for n in ladder]
        tail = [int(counts[(n, eps)]) for n in last3]
        plateau[eps] = (max(tail) - min(tail)) <= plateau_tol
        slopes[eps] = _fit_slope(ladder, per_eps)

    if all(plateau.values()):
        tail_all = [int(counts[(n, eps)]) for n in last3 for eps in epsilons]
        if max(tail_all) - min(tail_all) <= plateau_tol:
            return "uniform", slopes
        return "strong", slopes
    if all(s is None or s <= slope_threshold for s in slopes.values()):
        return "weak", slopes
    return "none", slopes


def classify_frobenius(
    ladder, dsq, bounded_ratio: float = BOUNDED_RATIO
) -> str:
    """Cluster verdict from d(n) = ||A_n - B_n||_F^2 alone.

    'strong' when d stays within bounded_ratio of its value at the second
    ladder size (a bounded sequence certifies a strong cluster); 'weak'
    when d(n)/n decreases monotonically and ends at most half its starting
    value; 'inconclusive' otherwise.
    """
    ladder = tuple(int(n) for n in ladder)
    d = [float(v) for v in dsq]
    if len(d) != len(ladder) or len(d) < 2:
        raise InsufficientLadderError("need one d value per ladder size, >= 2 sizes")
    anchor = d[1]
    if max(d) <= bounded_ratio * anchor or max(d) == 0.0:
        return "strong"
    ratios = [v / n for v, n in zip(d, ladder)]
    decreasing = all(b <= a for a, b in zip(ratios, ratios[1:]))
    if decreasing and ratios[-1] <= 0.5 * ratios[0]:
        return "weak"
    return "inconclusive"


def frobenius_criterion(seq_a: dict, seq_b: dict, bounded_ratio: float = BOUNDED_RATIO) -> str:
    """Apply `classify_frobenius` to two ladders of matrices (maps n -> matrix)."""
    ladder = sorted(seq_a)
    if sorted(seq_b) != ladder:
        raise DimensionMismatchError("sequences must share the same ladder")
    dsq = [frobenius_norm_sq(as_square(seq_a[n]) - as_square(seq_b[n])) for n in ladder]
    return classify_frobenius(ladder, dsq, bounded_ratio=bounded_ratio)


@dataclass(frozen=True)
class PreconditionedSpectrum:
    """Eigenvalues of B^{-1/2} A B^{-1/2} (similar to B^{-1} A) plus outliers."""

    values: np.ndarray
    outliers: int
    delta: float  # smallest eigenvalue of B, reported per the positivity premise


def preconditioned_eigenvalues(a, b) -> tuple[np.ndarray, float]:
    """Eigenvalues of B^{-1/2} A B^{-1/2} for Hermitian A and HPD B."""
    ma, mb = as_square(a), as_square(b)
    if ma.shape != mb.shape:
        raise DimensionMismatchError(f"shapes {ma.shape} and {mb.shape} differ")
    if not is_hermitian(ma, tol=1e-10):
        raise NotPositiveDefiniteError("A must be Hermitian")
    wb, vb = hermitian_eig(mb)
    delta = float(wb[0])
    if delta <= 0.0:
        raise NotPositiveDefiniteError(f"B is not positive definite: lambda_min {delta:.3e}")
    inv_sqrt = (vb / np.sqrt(wb)) @ vb.conj().T
    sym = inv_sqrt @ ma @ inv_sqrt
    return hermitian_eigvalues(0.5 * (sym + sym.conj().T)), delta


def preconditioned_spectrum(a, b, eps: float) -> PreconditionedSpectrum:
    """Spectrum of the preconditioned matrix and its outliers off (1-eps, 1+eps)."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    values, delta = preconditioned_eigenvalues(a, b)
    outliers = int(np.count_nonzero(np.abs(values - 1.0) >= eps))
    return PreconditionedSpectrum(values=values, outliers=outliers, delta=delta)


@dataclass(frozen=True)
class ClusterReport:
    """Outlier counts over a (ladder x eps) grid with a classification.

    `classification` applies the plateau/slope rules to the count table;
    `frobenius_verdict` applies the bounded/vanishing trend rules to
    d(n) = ||A_n - B_n||_F^2.  The two can disagree at desk scale (counts
    near a small eps may still be draining toward their plateau while the
    Frobenius mass is already provably bounded).
    """

    ladder: tuple[int, ...]
    epsilons: tuple[float, ...]
    counts: dict  # (n, eps) -> int
    frobenius_sq: dict  # n -> float
    classification: str
    frobenius_verdict: str = "inconclusive"
    slopes: dict = field(default_factory=dict)  # eps -> fitted growth exponent
    label: str = ""

    def csv_rows(self) -> list[tuple]:
        rows = []
        for n in self.ladder:
            for eps in self.epsilons:
                rows.append((n, eps, self.counts[(n, eps)], self.frobenius_sq[n]))
        return rows

    def summary(self) -> dict:
        return {
            "label": self.label,
            "ladder": list(self.ladder),
            "epsilons": list(self.epsilons),
            "classification": self.classification,
            "frobenius_verdict": self.frobenius_verdict,
            "slopes": {repr(e): s for e, s in self.slopes.items()},
            "frobenius_sq": {str(n): self.frobenius_sq[n] for n in self.ladder},
        }

    def to_json(self) -> str:
        return json.dumps(self.summary(), sort_keys=True, indent=2)


def build_cluster_report(
    pairs: dict,
    epsilons=DEFAULT_EPS_GRID,
    label: str = "",
    mode: str = "difference",
) -> ClusterReport:
    """Assemble a ClusterReport from a map n -> (A_n, B_n).

    mode 'difference' counts singular values of A_n - B_n at or above eps;
    mode 'preconditioned' counts eigenvalues of B_n^{-1/2} A_n B_n^{-1/2}
    outside (1 - eps, 1 + eps).
    """
    ladder = _validate_ladder(sorted(pairs))
    epsilons = tuple(float(e) for e in epsilons)
    counts: dict = {}
    fro: dict = {}
    for n in ladder:
        a, b = pairs[n]
        ma, mb = as_square(a), as_square(b)
        fro[n] = frobenius_norm_sq(ma - mb)
        if mode == "difference":
            sigma = singular_values(ma - mb)
            for eps in epsilons:
                counts[(n, eps)] = int(np.count_nonzero(sigma >= eps))
        elif mode == "preconditioned":
            values, _ = preconditioned_eigenvalues(ma, mb)
            for eps in epsilons:
                counts[(n, eps)] = int(np.count_nonzero(np.abs(values - 1.0) >= eps))
        else:
            raise ValueError(f"unknown mode {mode!r}")
    classification, slopes = classify(counts, ladder, epsilons)
    verdict = classify_frobenius(ladder, [fro[n] for n in ladder])
    return ClusterReport(
        ladder=ladder,
        epsilons=epsilons,
        counts=counts,
        frobenius_sq=fro,
        classification=classification,
        frobenius_verdict=verdict,
        slopes=slopes,
        label=label,
    )
