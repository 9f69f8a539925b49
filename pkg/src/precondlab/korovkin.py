"""Positive-operator rate tests and the Korovkin clustering harness.

For an algebra with basis row v(x), the linear positive operator sends a
symbol f to the quadratic form x -> v(x) A_n(f) v(x)*, the continuous
interpolation of the diagonal of U A_n(f) U*.  For the Fourier algebra
this is the Fejer mean of f, so sup errors decay like 1/n on trigonometric
polynomials.

The Korovkin harness checks the implication "projection clusters strongly
on a small test set => it clusters strongly on products and holdouts" by
running both the Frobenius-trend criterion and the outlier classifier on
each function over a size ladder.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .algebras import TransformAlgebra, make_algebra, project, random_unitary_algebra
from .clustering import (
    DEFAULT_EPS_GRID,
    DEFAULT_LADDER,
    build_cluster_report,
    classify_frobenius,
)
from .linalg import frobenius_norm_sq
from .symbols import Symbol, product
from .toeplitz import toeplitz_section

EVAL_GRID_POINTS = 4096
RATE_FIT_POINTS = 4

AlgebraFactory = Callable[[int], TransformAlgebra]


def resolve_algebra_factory(kind, seed: int = 42) -> tuple[str, AlgebraFactory]:
    """Normalize an algebra kind name or factory callable to (label, factory)."""
    if callable(kind):
        return getattr(kind, "__name__", "custom"), kind
    name = str(kind).lower()
    if name == "custom":
        return "custom", lambda n: random_unitary_algebra(n, seed=seed)
    return name, lambda n: make_algebra(name, n)


def lpo_eval(alg: TransformAlgebra, f: Symbol, x):
    """Evaluate v(x) A_n(f) v(x)* for a real symbol f.

    At the i-th grid point this equals the i-th diagonal entry of
    U A_n(f) U*, i.e. the eigenvalue of the algebra projection attached to
    that grid point.
    """
    if alg.basis is None:
        raise ValueError("algebra has no basis functions; cannot evaluate off-grid")
    if not f.is_real:
        raise ValueError("lpo_eval requires a real symbol")
    xs = np.atleast_1d(np.asarray(x, dtype=np.float64))
    v = alg.basis(xs)
    a = toeplitz_section(f, alg.order)
    values = np.einsum("ij,ij->i", v @ a, v.conj()).real
    return float(values[0]) if np.isscalar(x) or np.ndim(x) == 0 else values


def evaluation_grid(points: int = EVAL_GRID_POINTS) -> np.ndarray:
    return 2.0 * np.pi * np.arange(points) / points


def sup_error(alg: TransformAlgebra, f: Symbol, grid=None) -> float:
    """sup |L_n(f) - f| over the evaluation grid."""
    xs = evaluation_grid() if grid is None else np.asarray(grid, dtype=np.float64)
    return float(np.max(np.abs(lpo_eval(alg, f, xs) - f.eval_real(xs))))


def fit_rate(ladder, values, points: int = RATE_FIT_POINTS) -> Optional[float]:
    """Least-squares slope of log error vs log n on the last `points` entries.

    Exact zeros are excluded; returns None when fewer than two usable points
    remain (e.g. the error vanishes identically).
    """
    pairs = [(n, v) for n, v in zip(ladder, values) if v > 0.0]
    pairs = pairs[-points:]
    if len(pairs) < 2:
        return None
    xs = np.log([p[0] for p in pairs])
    ys = np.log([p[1] for p in pairs])
    return float(np.polyfit(xs, ys, 1)[0])


@dataclass(frozen=True)
class LpoReport:
    algebra_kind: str
    symbol_label: str
    ladder: tuple[int, ...]
    sup_error: dict  # n -> float
    rate_fit: Optional[float]

    def csv_rows(self) -> list[tuple]:
        return [(n, self.symbol_label, self.sup_error[n]) for n in self.ladder]


def lpo_rates(
    kind,
    test_set: Sequence[Symbol],
    ladder=DEFAULT_LADDER,
    seed: int = 42,
) -> list[LpoReport]:
    """Sup-norm decay of the positive operator on each test symbol."""
    label, factory = resolve_algebra_factory(kind, seed=seed)
    ladder = tuple(int(n) for n in ladder)
    algebras = {n: factory(n) for n in ladder}
    reports = []
    for f in test_set:
        errs = {n: sup_error(algebras[n], f) for n in ladder}
        rate = fit_rate(ladder, [errs[n] for n in ladder])
        reports.append(
            LpoReport(
                algebra_kind=label,
                symbol_label=f.label or "symbol",
                ladder=ladder,
                sup_error=errs,
                rate_fit=rate,
            )
        )
    return reports


# ---------------------------------------------------------------------------
# Korovkin clustering harness


@dataclass(frozen=True)
class FunctionVerdict:
    label: str
    frobenius: str  # strong | weak | inconclusive
    classification: str  # uniform | strong | weak | none
    frobenius_sq: dict  # n -> float

    @property
    def strong(self) -> bool:
        return self.frobenius == "strong" or self.classification in ("strong", "uniform")


@dataclass(frozen=True)
class KorovkinReport:
    algebra_kind: str
    ladder: tuple[int, ...]
    epsilons: tuple[float, ...]
    test_set: tuple[FunctionVerdict, ...]
    products: tuple[FunctionVerdict, ...]
    holdout: tuple[FunctionVerdict, ...]
    test_set_strong: bool
    holdout_strong: bool
    implication_observed: Optional[bool]  # None when the premise fails

    def all_verdicts(self):
        return list(self.test_set) + list(self.products) + list(self.holdout)

    def summary(self) -> dict:
        return {
            "algebra": self.algebra_kind,
            "ladder": list(self.ladder),
            "epsilons": list(self.epsilons),
            "test_set_strong": self.test_set_strong,
            "holdout_strong": self.holdout_strong,
            "implication_observed": self.implication_observed,
            "verdicts": {
                v.label: {
                    "frobenius": v.frobenius,
                    "classification": v.classification,
                }
                for v in self.all_verdicts()
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.summary(), sort_keys=True, indent=2)


def _verdict_for(factory, f: Symbol, ladder, epsilons) -> FunctionVerdict:
    pairs = {}
    for n in ladder:
        a = toeplitz_section(f, n)
        b = project(factory(n), a)
        pairs[n] = (a, b)
    report = build_cluster_report(pairs, epsilons, label=f.label)
    dsq = [report.frobenius_sq[n] for n in report.ladder]
    fro = classify_frobenius(report.ladder, dsq)
    return FunctionVerdict(
        label=f.label or "symbol",
        frobenius=fro,
        classification=report.classification,
        frobenius_sq=report.frobenius_sq,
    )


def korovkin_test(
    kind,
    generators: Sequence[Symbol],
    holdout: Sequence[Symbol],
    ladder=DEFAULT_LADDER,
    eps_grid=DEFAULT_EPS_GRID,
    seed: int = 42,
    squares: str = "each",
) -> KorovkinReport:
    """Run the test-set-implies-holdout clustering experiment.

    The test set is the generators together with their squares; products
    g_k g_l (k < l) and every holdout symbol are then checked.  A function
    counts as strongly clustered when either the bounded-Frobenius
    criterion or the outlier classifier certifies it.

    squares='each' puts every g_k^2 in the test set (the theorems'
    hypothesis); squares='sum' replaces them with the single function
    sum_k g_k^2.  Whether the weaker 'sum' variant suffices is an open
    question, so both are exposed and neither is asserted.
    """
    for g in generators:
        if not g.is_real:
            raise ValueError("generators must be real symbols")
    if squares not in ("each", "sum"):
        raise ValueError(f"unknown squares variant {squares!r}")
    label, factory = resolve_algebra_factory(kind, seed=seed)
    ladder = tuple(int(n) for n in ladder)
    epsilons = tuple(float(e) for e in eps_grid)
    # Reuse one algebra per ladder size across all functions.
    cache = {n: factory(n) for n in ladder}
    cached_factory = cache.__getitem__

    gens = list(generators)
    if squares == "each":
        squares_set = [
            product(g, g, label=f"({g.label})^2" if g.label else "g^2") for g in gens
        ]
    else:
        total = Symbol({})
        for g in gens:
            total = total.plus(product(g, g))
        squares_set = [Symbol(total.coefficients, label="sum_sq")]
    test_set = [
        _verdict_for(cached_factory, f, ladder, epsilons) for f in gens + squares_set
    ]
    prods = [
        _verdict_for(
            cached_factory,
            product(gens[i], gens[j]),
            ladder,
            epsilons,
        )
        for i in range(len(gens))
        for j in range(i + 1, len(gens))
    ]
    hold = [_verdict_for(cached_factory, f, ladder, epsilons) for f in holdout]

    test_strong = all(v.strong for v in test_set)
    hold_strong = all(v.strong for v in prods + hold)
    return KorovkinReport(
        algebra_kind=label,
        ladder=ladder,
        epsilons=epsilons,
        test_set=tuple(test_set),
        products=tuple(prods),
        holdout=tuple(hold),
        test_set_strong=test_strong,
        holdout_strong=hold_strong,
        implication_observed=hold_strong if test_strong else None,
    )


# ---------------------------------------------------------------------------
# remainder propagation and grid quadrature checks


@dataclass(frozen=True)
class PropagationReport:
    algebra_kind: str
    ladder: tuple[int, ...]
    generator_errors: dict  # label -> {n: sup_error}
    derived_errors: dict  # label -> {n: sup_error}, squares-sum and products
    rates: dict  # label -> fitted rate or None
    factor: float
    propagation_ok: bool

    def summary(self) -> dict:
        return {
            "algebra": self.algebra_kind,
            "ladder": list(self.ladder),
            "rates": self.rates,
            "factor": self.factor,
            "propagation_ok": self.propagation_ok,
        }


def remainder_propagation(
    kind,
    generators: Sequence[Symbol],
    ladder=DEFAULT_LADDER,
    factor: float = 10.0,
    seed: int = 42,
) -> PropagationReport:
    """Check that product errors track the generator error scale theta_n.

    Measures sup errors for each generator, for the sum of squares and for
    every pairwise product; `propagation_ok` requires each derived error to
    stay within `factor` times the worst generator error at every ladder
    size (trivially satisfied wherever the generator errors vanish but the
    derived ones do too).
    """
    label, factory = resolve_algebra_factory(kind, seed=seed)
    ladder = tuple(int(n) for n in ladder)
    algebras = {n: factory(n) for n in ladder}
    gens = list(generators)

    def ladder_errors(f: Symbol) -> dict:
        return {n: sup_error(algebras[n], f) for n in ladder}

    gen_errors = {g.label or f"g{i}": ladder_errors(g) for i, g in enumerate(gens)}

    derived: dict[str, Symbol] = {}
    sum_sq = Symbol({}, label="sum_sq")
    for g in gens:
        sum_sq = sum_sq.plus(product(g, g))
    derived["sum_sq"] = Symbol(sum_sq.coefficients, label="sum_sq")
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            p = product(gens[i], gens[j])
            derived[p.label or f"g{i}*g{j}"] = p
    derived_errors = {name: ladder_errors(f) for name, f in derived.items()}

    rates: dict[str, Optional[float]] = {}
    for name, errs in {**gen_errors, **derived_errors}.items():
        rates[name] = fit_rate(ladder, [errs[n] for n in ladder])

    ok = True
    for n in ladder:
        theta = max(errs[n] for errs in gen_errors.values())
        for errs in derived_errors.values():
            if errs[n] > factor * theta and errs[n] > 1e-14:
                ok = False
    return PropagationReport(
        algebra_kind=label,
        ladder=ladder,
        generator_errors=gen_errors,
        derived_errors=derived_errors,
        rates=rates,
        factor=factor,
        propagation_ok=ok,
    )


@dataclass(frozen=True)
class QuadratureReport:
    algebra_kind: str
    symbol_label: str
    ladder: tuple[int, ...]
    grid_gap_ratio: dict  # n -> |sum g^2(x_i) - (n/2pi) int g^2| / n
    frobenius_gap_ratio: dict  # n -> | ||A_n||_F^2 - (n/2pi) int g^2 | / n
    grid_gap_decreasing: bool
    frobenius_gap_decreasing: bool


def grid_quadrature_check(kind, g: Symbol, ladder=DEFAULT_LADDER, seed: int = 42) -> QuadratureReport:
    """Check the o(n) gaps between grid sums, Frobenius mass and (n/2pi) int g^2."""
    if not g.is_real:
        raise ValueError("grid_quadrature_check requires a real symbol")
    label, factory = resolve_algebra_factory(kind, seed=seed)
    ladder = tuple(int(n) for n in ladder)
    mean_sq = g.parseval_mean_square()  # (1/2pi) int g^2
    grid_ratio: dict[int, float] = {}
    fro_ratio: dict[int, float] = {}
    for n in ladder:
        alg = factory(n)
        if alg.grid is None:
            raise ValueError("algebra has no grid")
        target = n * mean_sq
        grid_sum = float(np.sum(g.eval_real(alg.grid) ** 2))
        fro = frobenius_norm_sq(toeplitz_section(g, n))
        grid_ratio[n] = abs(grid_sum - target) / n
        fro_ratio[n] = abs(fro - target) / n
    ratios_g = [grid_ratio[n] for n in ladder]
    ratios_f = [fro_ratio[n] for n in ladder]
    # Nonincreasing with a small absolute floor so exact-quadrature noise
    # at round-off scale does not flip the verdict.
    floor = 1e-12

    def decreasing(seq):
        return all(b <= a or b <= floor for a, b in zip(seq, seq[1:]))

    return QuadratureReport(
        algebra_kind=label,
        symbol_label=g.label or "symbol",
        ladder=ladder,
        grid_gap_ratio=grid_ratio,
        frobenius_gap_ratio=fro_ratio,
        grid_gap_decreasing=decreasing(ratios_g),
        frobenius_gap_decreasing=decreasing(ratios_f),
    )
