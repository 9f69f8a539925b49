"""Experiment runner.

Every pipeline is a subcommand writing plot-ready CSV plus a JSON summary
sidecar.  Given the same configuration and seed, output files are
byte-identical across runs; wall-clock timings are only written when
--timings is passed since they would break that guarantee.

Subcommands: project, cluster-scan, korovkin-test, lpo-rates,
operator-scan, pcg-bench, selftest.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import algebras, clustering, korovkin, operators, solver, symbols, toeplitz
from .errors import ParseError, PrecondlabError, UsageError
from .linalg import frobenius_norm_sq
from .parallel import ladder_map

DEFAULT_SEED = 42
DEFAULT_TOL = 1e-10

SUBCOMMANDS = (
    "project",
    "cluster-scan",
    "korovkin-test",
    "lpo-rates",
    "operator-scan",
    "pcg-bench",
    "selftest",
)


# ---------------------------------------------------------------------------
# configuration files: `key = value` lines


@dataclass
class ExperimentConfig:
    algebra: Optional[str] = None
    symbol: Optional[str] = None
    generators: Optional[str] = None
    holdout: Optional[str] = None
    testset: Optional[str] = None
    source: Optional[str] = None
    ladder: Optional[tuple[int, ...]] = None
    eps: Optional[tuple[float, ...]] = None
    tol: Optional[float] = None
    outdir: Optional[str] = None
    seed: Optional[int] = None
    precond: Optional[str] = None
    max_iter: Optional[int] = None
    n: Optional[int] = None


def _parse_ladder(text: str) -> tuple[int, ...]:
    try:
        ladder = tuple(int(part) for part in text.split(","))
    except ValueError as exc:
        raise ParseError(f"bad ladder {text!r}: {exc}") from exc
    if any(b <= a for a, b in zip(ladder, ladder[1:])):
        raise ParseError(f"ladder must be strictly increasing, got {text!r}")
    return ladder


def _parse_eps(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(part) for part in text.split(","))
    except ValueError as exc:
        raise ParseError(f"bad eps grid {text!r}: {exc}") from exc


_CONFIG_PARSERS = {
    "algebra": str,
    "symbol": str,
    "generators": str,
    "holdout": str,
    "testset": str,
    "source": str,
    "ladder": _parse_ladder,
    "eps": _parse_eps,
    "tol": float,
    "outdir": str,
    "seed": int,
    "precond": str,
    "max_iter": int,
    "n": int,
}


def load_config(path) -> ExperimentConfig:
    """Parse a `key = value` config file; unknown or duplicate keys fail."""
    cfg = ExperimentConfig()
    seen: set[str] = set()
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ParseError(f"{path}:{lineno}: expected 'key = value'")
            key, _, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if key not in _CONFIG_PARSERS:
                raise ParseError(f"{path}:{lineno}: unknown key {key!r}")
            if key in seen:
                raise ParseError(f"{path}:{lineno}: duplicate key {key!r}")
            seen.add(key)
            try:
                setattr(cfg, key, _CONFIG_PARSERS[key](value))
            except ParseError:
                raise
            except (TypeError, ValueError) as exc:
                raise ParseError(f"{path}:{lineno}: bad value for {key!r}: {exc}") from exc
    return cfg


# ---------------------------------------------------------------------------
# symbol and source resolution


def resolve_symbol(spec: str) -> symbols.Symbol:
    """Resolve `preset:<expr>` or `file:<path>` (bare text is a preset)."""
    if spec.startswith("file:"):
        return symbols.load_symbol(spec[len("file:"):])
    if spec.startswith("preset:"):
        spec = spec[len("preset:"):]
    return symbols.parse_trig_expression(spec)


def resolve_symbol_list(spec: str) -> list[symbols.Symbol]:
    return [resolve_symbol(part) for part in spec.split(";") if part]


# ---------------------------------------------------------------------------
# deterministic CSV/JSON writers


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (np.floating,)):
        return repr(float(value))
    return str(value)


def write_csv(path: Path, header: Sequence[str], rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def write_json(path: Path, payload: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, sort_keys=True, indent=2)
        fh.write("\n")


# ---------------------------------------------------------------------------
# subcommand implementations


def _outdir(args) -> Path:
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _plan(args, extra: dict) -> dict:
    plan = {"command": args.command, "outdir": str(args.outdir), "seed": args.seed}
    plan.update(extra)
    return plan


def _emit_plan(plan: dict) -> int:
    print(json.dumps(plan, sort_keys=True))
    return 0


def cmd_project(args) -> int:
    sym = resolve_symbol(args.symbol)
    plan = _plan(args, {"algebra": args.algebra, "symbol": sym.label, "n": args.n})
    if args.dry_run:
        return _emit_plan(plan)
    _, factory = korovkin.resolve_algebra_factory(args.algebra, seed=args.seed)
    alg = factory(args.n)
    a = toeplitz.toeplitz_section(sym, args.n)
    p = algebras.project(alg, a)
    fro_a = frobenius_norm_sq(a)
    fro_p = frobenius_norm_sq(p)
    fro_diff = frobenius_norm_sq(a - p)
    trace_defect = abs(np.trace(p) - np.trace(a))
    pythagoras_defect = abs(fro_diff - (fro_a - fro_p))
    out = _outdir(args)
    write_csv(
        out / "project.csv",
        [
            "n", "algebra", "symbol", "frobenius_sq_a", "frobenius_sq_p",
            "frobenius_sq_diff", "trace_defect", "pythagoras_defect",
        ],
        [(args.n, args.algebra, sym.label, fro_a, fro_p, fro_diff,
          float(trace_defect), float(pythagoras_defect))],
    )
    print(
        f"project: algebra={args.algebra} symbol={sym.label} n={args.n} "
        f"frobenius_sq_diff={fro_diff!r} -> {out / 'project.csv'}"
    )
    return 0


def _cluster_pairs(sym, alg_kind, ladder, seed):
    _, factory = korovkin.resolve_algebra_factory(alg_kind, seed=seed)

    def one(n):
        a = toeplitz.toeplitz_section(sym, n)
        return n, (a, algebras.project(factory(n), a))

    return dict(ladder_map(one, ladder))


def cmd_cluster_scan(args) -> int:
    sym = resolve_symbol(args.symbol)
    mode = "preconditioned" if args.preconditioned else "difference"
    plan = _plan(args, {
        "algebra": args.algebra, "symbol": sym.label,
        "ladder": list(args.ladder), "eps": list(args.eps), "mode": mode,
    })
    if args.dry_run:
        return _emit_plan(plan)
    pairs = _cluster_pairs(sym, args.algebra, args.ladder, args.seed)
    report = clustering.build_cluster_report(
        pairs, args.eps, label=f"{sym.label} vs {args.algebra} projection", mode=mode
    )
    out = _outdir(args)
    write_csv(out / "cluster_scan.csv", ["n", "eps", "outliers", "frobenius_sq"],
              report.csv_rows())
    write_json(out / "cluster_scan.json", report.summary())
    print(
        f"cluster-scan: algebra={args.algebra} symbol={sym.label} mode={mode} "
        f"classification={report.classification} -> {out / 'cluster_scan.csv'}"
    )
    return 0


def cmd_korovkin_test(args) -> int:
    generators = resolve_symbol_list(args.generators)
    holdout = resolve_symbol_list(args.holdout) if args.holdout else []
    plan = _plan(args, {
        "algebra": args.algebra,
        "generators": [g.label for g in generators],
        "holdout": [h.label for h in holdout],
        "ladder": list(args.ladder), "eps": list(args.eps),
    })
    if args.dry_run:
        return _emit_plan(plan)
    report = korovkin.korovkin_test(
        args.algebra, generators, holdout,
        ladder=args.ladder, eps_grid=args.eps, seed=args.seed,
    )
    out = _outdir(args)
    rows = []
    for role, group in (
        ("test_set", report.test_set),
        ("product", report.products),
        ("holdout", report.holdout),
    ):
        for v in group:
            rows.append((role, v.label, v.frobenius, v.classification, int(v.strong)))
    write_csv(out / "korovkin_test.csv",
              ["role", "symbol", "frobenius", "classification", "strong"], rows)
    write_json(out / "korovkin_test.json", report.summary())
    print(
        f"korovkin-test: algebra={args.algebra} test_set_strong={report.test_set_strong} "
        f"implication_observed={report.implication_observed} -> {out / 'korovkin_test.csv'}"
    )
    return 0


def cmd_lpo_rates(args) -> int:
    if args.testset:
        test_set = symbols.standard_test_set(args.testset)
    else:
        test_set = resolve_symbol_list(args.symbols)
    plan = _plan(args, {
        "algebra": args.algebra,
        "symbols": [s.label for s in test_set],
        "ladder": list(args.ladder),
    })
    if args.dry_run:
        return _emit_plan(plan)
    reports = korovkin.lpo_rates(args.algebra, test_set, ladder=args.ladder, seed=args.seed)
    out = _outdir(args)
    rows = []
    for rep in reports:
        rows.extend(rep.csv_rows())
    write_csv(out / "lpo_rates.csv", ["n", "symbol", "sup_error"], rows)
    write_json(out / "lpo_rates.json", {
        "algebra": args.algebra,
        "ladder": list(args.ladder),
        "rate_fits": {rep.symbol_label: rep.rate_fit for rep in reports},
    })
    fits = ", ".join(f"{rep.symbol_label}:{rep.rate_fit}" for rep in reports)
    print(f"lpo-rates: algebra={args.algebra} rate_fits=[{fits}] -> {out / 'lpo_rates.csv'}")
    return 0


def cmd_operator_scan(args) -> int:
    src = operators.source_from_spec(args.source, symbol_resolver=resolve_symbol)
    plan = _plan(args, {
        "algebra": args.algebra, "source": src.label,
        "ladder": list(args.ladder), "eps": list(args.eps),
    })
    if args.dry_run:
        return _emit_plan(plan)
    report = operators.distribution_convergence(
        src, args.algebra, ladder=args.ladder, eps_grid=args.eps, seed=args.seed
    )
    out = _outdir(args)
    write_csv(out / "operator_scan.csv", ["n", "eps", "outliers", "frobenius_sq"],
              report.csv_rows())
    write_json(out / "operator_scan.json", report.summary())
    print(
        f"operator-scan: source={src.label} algebra={args.algebra} "
        f"classification={report.classification} -> {out / 'operator_scan.csv'}"
    )
    return 0


def cmd_pcg_bench(args) -> int:
    sym = resolve_symbol(args.symbol)
    preconds = ("none", "algebra_projection") if args.precond == "both" else (args.precond,)
    plan = _plan(args, {
        "algebra": args.algebra, "symbol": sym.label,
        "ladder": list(args.ladder), "tol": args.tol, "preconds": list(preconds),
    })
    if args.dry_run:
        return _emit_plan(plan)
    cells = solver.scaling_study(
        sym, args.ladder, tol=args.tol, alg_kind=args.algebra,
        preconds=preconds, seed=args.seed, max_iter=args.max_iter,
    )
    out = _outdir(args)
    rows = [
        (
            c.order, c.preconditioner, c.iterations, c.final_residual,
            c.wall_time if args.timings else "",
        )
        for c in cells
    ]
    write_csv(out / "pcg_bench.csv",
              ["n", "precond", "iterations", "final_residual", "wall_time"], rows)
    write_json(out / "pcg_bench.json", {
        "symbol": sym.label,
        "tol": args.tol,
        "iterations": {f"{c.preconditioner}@{c.order}": c.iterations for c in cells},
    })
    brief = ", ".join(f"{c.preconditioner}@{c.order}:{c.iterations}" for c in cells)
    print(f"pcg-bench: symbol={sym.label} iterations=[{brief}] -> {out / 'pcg_bench.csv'}")
    return 0


def cmd_selftest(args) -> int:
    plan = _plan(args, {"checks": [name for name, _ in SELFTEST_CHECKS]})
    if args.dry_run:
        return _emit_plan(plan)
    out = _outdir(args)
    rows = []
    failures = 0
    for name, check in SELFTEST_CHECKS:
        try:
            check()
            status = "pass"
        except AssertionError as exc:
            status = "fail"
            failures += 1
            print(f"FAIL {name}: {exc}")
        rows.append((name, status))
        if status == "pass":
            print(f"ok {name}")
    write_csv(out / "selftest.csv", ["check", "status"], rows)
    print(f"selftest: {len(rows) - failures}/{len(rows)} checks passed -> {out / 'selftest.csv'}")
    return 0 if failures == 0 else 2


# ---------------------------------------------------------------------------
# selftest battery: quick invariant checks across all modules


def _seeded_matrix(n, seed, hermitian=False):
    rng = np.random.default_rng(seed)
    m = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return 0.5 * (m + m.conj().T) if hermitian else m


def _all_algebras(n):
    algs = [algebras.make_algebra(kind, n) for kind in algebras.ALGEBRA_KINDS]
    algs.append(algebras.random_unitary_algebra(n, seed=DEFAULT_SEED))
    return algs


def _check_unitarity():
    for alg in _all_algebras(64):
        assert alg.unitarity_defect() <= 1e-10 * np.sqrt(alg.order), alg.kind


def _check_projection_identities():
    n = 16
    a = _seeded_matrix(n, 1)
    b = _seeded_matrix(n, 2)
    for alg in _all_algebras(n):
        pa, pb = algebras.project(alg, a), algebras.project(alg, b)
        lin = algebras.project(alg, 2.0 * a + 0.5j * b) - (2.0 * pa + 0.5j * pb)
        assert np.max(np.abs(lin)) < 1e-9, f"linearity {alg.kind}"
        adj = algebras.project(alg, a.conj().T) - pa.conj().T
        assert np.max(np.abs(adj)) < 1e-9, f"adjoint {alg.kind}"
        assert abs(np.trace(pa) - np.trace(a)) < 1e-9, f"trace {alg.kind}"
        lhs = frobenius_norm_sq(a - pa)
        rhs = frobenius_norm_sq(a) - frobenius_norm_sq(pa)
        assert abs(lhs - rhs) < 1e-9 * max(1.0, abs(rhs)), f"pythagoras {alg.kind}"
        twice = algebras.project(alg, pa)
        assert np.max(np.abs(twice - pa)) < 1e-12 * (1 + np.max(np.abs(pa))), (
            f"idempotence {alg.kind}"
        )


def _check_positivity_bracketing():
    from .linalg import hermitian_eigvalues

    n = 16
    h = _seeded_matrix(n, 3, hermitian=True)
    lo, hi = hermitian_eigvalues(h)[0], hermitian_eigvalues(h)[-1]
    for alg in _all_algebras(n):
        w = hermitian_eigvalues(algebras.project(alg, h))
        assert w[0] >= lo - 1e-9 and w[-1] <= hi + 1e-9, alg.kind


def _check_fast_path():
    sym = symbols.parse_trig_expression("2+cos")
    alg = algebras.make_algebra("fourier", 64)
    generic = algebras.project(alg, toeplitz.toeplitz_section(sym, 64))
    fast = algebras.project_toeplitz_fast(sym, 64)
    assert np.max(np.abs(generic - fast)) < 1e-10


def _check_pinching():
    n = 12
    a = _seeded_matrix(n, 4, hermitian=True)
    alg = algebras.make_algebra("sine", n)
    assert np.allclose(
        algebras.project_pinched(alg, algebras.single_block_partition(n), a), a
    )
    plain = algebras.project(alg, a)
    fine = algebras.project_pinched(alg, algebras.singleton_partition(n), a)
    assert np.max(np.abs(plain - fine)) < 1e-10
    blocks = algebras.contiguous_partition(n, 3)
    pinched = algebras.project_pinched(alg, blocks, a)
    assert (
        np.sqrt(frobenius_norm_sq(a - pinched))
        <= np.sqrt(frobenius_norm_sq(a - plain)) + 1e-12
    )


def _check_widom():
    rep = toeplitz.widom_correction_report(symbols.cosine(), (16, 32, 64))
    assert rep.rank_bound_ok and rep.norm_constant_ok


def _check_lpo_diagonal():
    sym = symbols.parse_trig_expression("2+cos")
    alg = algebras.make_algebra("sine", 16)
    a = toeplitz.toeplitz_section(sym, 16)
    diag = np.diagonal(alg.unitary @ a @ alg.unitary.conj().T).real
    vals = korovkin.lpo_eval(alg, sym, alg.grid)
    assert np.max(np.abs(vals - diag)) < 1e-10


def _check_fejer():
    alg = algebras.make_algebra("fourier", 32)
    err = korovkin.sup_error(alg, symbols.cosine())
    assert abs(err - 1.0 / 32) < 1e-12


def _check_toeplitz_matvec():
    sym = symbols.parse_trig_expression("2-2cos+delta(0.01)")
    op = toeplitz.ToeplitzOperator(sym, 128)
    dense = op.dense()
    x = np.linspace(-1, 1, 128).astype(np.complex128)
    assert np.max(np.abs(op.matvec(x) - dense @ x)) < 1e-10


def _check_pcg():
    n = 32
    b = np.ones(n, dtype=np.complex128)
    trace = solver.pcg(np.eye(n, dtype=np.complex128), b, precond="none")
    assert trace.iterations == 1, "identity should converge in one step"
    sym = symbols.parse_trig_expression("2+cos")
    circ = algebras.project_toeplitz_fast(sym, n)
    trace = solver.pcg(circ, b, precond="algebra_projection", alg_kind="fourier")
    assert trace.iterations <= 2, "exact preconditioner should converge immediately"


def _check_classifier():
    ladder = (64, 128, 256, 512)
    eps = (0.1, 0.01)
    constant = {(n, e): 3 for n in ladder for e in eps}
    assert clustering.classify(constant, ladder, eps)[0] == "uniform"
    plateau = {(n, 0.1): 7 for n in ladder} | {(n, 0.01): 19 for n in ladder}
    assert clustering.classify(plateau, ladder, (0.1, 0.01))[0] == "strong"
    sqrt_counts = {(n, e): int(np.ceil(np.sqrt(n))) for n in ladder for e in eps}
    assert clustering.classify(sqrt_counts, ladder, eps)[0] == "weak"
    linear = {(n, e): int(0.3 * n) for n in ladder for e in eps}
    assert clustering.classify(linear, ladder, eps)[0] == "none"


def _check_quadrature():
    rep = korovkin.grid_quadrature_check("fourier", symbols.cosine(), (16, 32, 64, 128))
    assert max(rep.grid_gap_ratio.values()) < 1e-12, "fourier grid sums are exact"


def _check_symbol_roundtrip():
    sym = symbols.parse_trig_expression("2-2cos+delta(0.01)")
    back = symbols.symbol_from_lines(symbols.symbol_to_lines(sym))
    assert back.coefficients == sym.coefficients


SELFTEST_CHECKS = [
    ("algebra_unitarity", _check_unitarity),
    ("projection_identities", _check_projection_identities),
    ("positivity_bracketing", _check_positivity_bracketing),
    ("fast_path_equivalence", _check_fast_path),
    ("pinching", _check_pinching),
    ("widom_correction", _check_widom),
    ("lpo_grid_diagonal", _check_lpo_diagonal),
    ("fejer_rate", _check_fejer),
    ("toeplitz_matvec", _check_toeplitz_matvec),
    ("pcg", _check_pcg),
    ("cluster_classifier", _check_classifier),
    ("grid_quadrature", _check_quadrature),
    ("symbol_roundtrip", _check_symbol_roundtrip),
]


# ---------------------------------------------------------------------------
# argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _add_common(p: _Parser) -> None:
    p.add_argument("--outdir", default=".", help="output directory (default: .)")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--config", default=None, help="key = value config file")
    p.add_argument("--dry-run", action="store_true",
                   help="print the resolved plan without computing")


def build_parser() -> _Parser:
    parser = _Parser(prog="precondlab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("project", parents=[], help="project one Toeplitz section")
    p.add_argument("--algebra", default="fourier")
    p.add_argument("--symbol", default="preset:2+cos")
    p.add_argument("--n", type=int, default=64)
    _add_common(p)

    p = sub.add_parser("cluster-scan", help="outlier counts over a size ladder")
    p.add_argument("--algebra", default="fourier")
    p.add_argument("--symbol", default="preset:2+cos")
    p.add_argument("--ladder", type=_parse_ladder, default=clustering.DEFAULT_LADDER)
    p.add_argument("--eps", type=_parse_eps, default=clustering.DEFAULT_EPS_GRID)
    p.add_argument("--preconditioned", action="store_true",
                   help="count preconditioned eigenvalues off 1 instead of "
                        "singular values of the difference")
    _add_common(p)

    p = sub.add_parser("korovkin-test", help="test-set implies holdout experiment")
    p.add_argument("--algebra", default="fourier")
    p.add_argument("--generators", default="cos;sin",
                   help="semicolon-separated symbol specs")
    p.add_argument("--holdout", default="2+cos+0.5cos2x")
    p.add_argument("--ladder", type=_parse_ladder, default=clustering.DEFAULT_LADDER)
    p.add_argument("--eps", type=_parse_eps, default=clustering.DEFAULT_EPS_GRID)
    _add_common(p)

    p = sub.add_parser("lpo-rates", help="sup-error decay of the positive operator")
    p.add_argument("--algebra", default="fourier")
    p.add_argument("--testset", default=None, choices=("classical", "fourier_basic"))
    p.add_argument("--symbols", default="cos",
                   help="semicolon-separated symbol specs (ignored with --testset)")
    p.add_argument("--ladder", type=_parse_ladder,
                   default=(8, 16, 32, 64, 128, 256, 512, 1024))
    _add_common(p)

    p = sub.add_parser("operator-scan", help="distribution convergence of a source")
    p.add_argument("--source", default="hs_decay(1.5)")
    p.add_argument("--algebra", default="fourier")
    p.add_argument("--ladder", type=_parse_ladder, default=clustering.DEFAULT_LADDER)
    p.add_argument("--eps", type=_parse_eps, default=clustering.DEFAULT_EPS_GRID)
    _add_common(p)

    p = sub.add_parser("pcg-bench", help="iteration scaling with and without preconditioning")
    p.add_argument("--symbol", default="preset:2-2cos+delta(0.01)")
    p.add_argument("--algebra", default="fourier")
    p.add_argument("--ladder", type=_parse_ladder, default=(128, 256, 512, 1024))
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.add_argument("--precond", default="both",
                   choices=("both", "none", "algebra_projection", "pinched"))
    p.add_argument("--max-iter", type=int, default=None, dest="max_iter")
    p.add_argument("--timings", action="store_true",
                   help="record wall times in the CSV (breaks byte determinism)")
    _add_common(p)

    p = sub.add_parser("selftest", help="run the invariant battery")
    _add_common(p)

    return parser


_CONFIG_TO_ARG = {
    "algebra": "algebra",
    "symbol": "symbol",
    "generators": "generators",
    "holdout": "holdout",
    "testset": "testset",
    "source": "source",
    "ladder": "ladder",
    "eps": "eps",
    "tol": "tol",
    "outdir": "outdir",
    "seed": "seed",
    "precond": "precond",
    "max_iter": "max_iter",
    "n": "n",
}


def _merge_config(args, argv_tokens) -> None:
    """Config values fill in any option not given explicitly on the command line."""
    if not args.config:
        return
    cfg = load_config(args.config)
    explicit = set()
    for token in argv_tokens:
        if token.startswith("--"):
            explicit.add(token[2:].split("=")[0].replace("-", "_"))
    for key, attr in _CONFIG_TO_ARG.items():
        value = getattr(cfg, key)
        if value is None or not hasattr(args, attr) or attr in explicit:
            continue
        setattr(args, attr, value)


_HANDLERS = {
    "project": cmd_project,
    "cluster-scan": cmd_cluster_scan,
    "korovkin-test": cmd_korovkin_test,
    "lpo-rates": cmd_lpo_rates,
    "operator-scan": cmd_operator_scan,
    "pcg-bench": cmd_pcg_bench,
    "selftest": cmd_selftest,
}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _merge_config(args, argv)
        return _HANDLERS[args.command](args)
    except (UsageError, ParseError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except PrecondlabError as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return 2


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
