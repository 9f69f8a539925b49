"""Trigonometric symbols.

A Symbol is a 2pi-periodic function represented by a finite table of
Fourier coefficients a_k, |k| <= degree.  Real-valued symbols satisfy
a_{-k} = conj(a_k).  The interval convention is [0, 2pi) throughout.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from .errors import InsufficientSamplesError, ParseError

REALNESS_TOL = 1e-12


@dataclass(frozen=True)
class Symbol:
    """Finite trigonometric coefficient table, immutable by convention."""

    coefficients: Mapping[int, complex]
    label: str = ""

    def __post_init__(self):
        clean = {
            int(k): complex(v) for k, v in self.coefficients.items() if v != 0
        }
        object.__setattr__(self, "coefficients", clean)

    @property
    def degree(self) -> int:
        return max((abs(k) for k in self.coefficients), default=0)

    @property
    def is_real(self) -> bool:
        scale = 1.0 + max((abs(v) for v in self.coefficients.values()), default=0.0)
        for k, v in self.coefficients.items():
            if abs(self.coefficients.get(-k, 0.0) - v.conjugate()) > REALNESS_TOL * scale:
                return False
        return True

    def coefficient(self, k: int) -> complex:
        return self.coefficients.get(int(k), 0.0 + 0.0j)

    def eval(self, x):
        """Evaluate sum_k a_k exp(i k x); accepts scalars or arrays."""
        xs = np.asarray(x, dtype=np.float64)
        out = np.zeros(xs.shape, dtype=np.complex128)
        for k, a in self.coefficients.items():
            out += a * np.exp(1j * k * xs)
        return complex(out) if np.isscalar(x) or xs.ndim == 0 else out

    def eval_real(self, x):
        """Evaluate and drop the imaginary round-off of a real symbol."""
        val = self.eval(x)
        return val.real if isinstance(val, np.ndarray) else float(val.real)

    def trimmed(self, tol: float = 0.0) -> "Symbol":
        """Drop coefficients with |a_k| <= tol."""
        return Symbol(
            {k: v for k, v in self.coefficients.items() if abs(v) > tol}, self.label
        )

    def scaled(self, alpha: complex) -> "Symbol":
        return Symbol({k: alpha * v for k, v in self.coefficients.items()}, self.label)

    def plus(self, other: "Symbol", label: str = "") -> "Symbol":
        out = dict(self.coefficients)
        for k, v in other.coefficients.items():
            out[k] = out.get(k, 0.0) + v
        return Symbol(out, label)

    def parseval_mean_square(self) -> float:
        """(1/2pi) * integral of |f|^2 over a period, exact from coefficients."""
        return float(sum(abs(v) ** 2 for v in self.coefficients.values()))


@dataclass(frozen=True)
class SampledFunction:
    """Deterministic evaluator on [0, 2pi) plus its equispaced sample count."""

    evaluator: Callable[[np.ndarray], np.ndarray]
    sample_count: int


def constant(c: float | complex = 1.0, label: str = "") -> Symbol:
    return Symbol({0: complex(c)}, label or f"{c}")


def cosine(k: int = 1, amplitude: float = 1.0, label: str = "") -> Symbol:
    a = amplitude / 2.0
    return Symbol({k: a, -k: a}, label or (f"cos{k}x" if k != 1 else "cos"))


def sine(k: int = 1, amplitude: float = 1.0, label: str = "") -> Symbol:
    a = amplitude / (2.0j)
    return Symbol({k: a, -k: -a}, label or (f"sin{k}x" if k != 1 else "sin"))


def product(s: Symbol, t: Symbol, label: str = "") -> Symbol:
    """Pointwise product: coefficient convolution, degrees add."""
    out: dict[int, complex] = {}
    for k, a in s.coefficients.items():
        for l, b in t.coefficients.items():
            out[k + l] = out.get(k + l, 0.0) + a * b
    if not label and s.label and t.label:
        label = f"({s.label})*({t.label})"
    return Symbol(out, label)


def fourier_coefficients(g: SampledFunction, degree: int, label: str = "") -> Symbol:
    """Coefficients a_k = (1/2pi) int f(x) exp(-ikx) dx by the trapezoid/DFT rule.

    Exact to round-off for trigonometric polynomials of degree at most
    sample_count/2 - 1; the sample count must be a power of two with
    sample_count >= 4 * degree.
    """
    n = int(g.sample_count)
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    if n < 4 or n & (n - 1) != 0:
        raise InsufficientSamplesError(f"sample_count {n} is not a power of two >= 4")
    if n < 4 * degree:
        raise InsufficientSamplesError(
            f"sample_count {n} < 4 * degree = {4 * degree}"
        )
    xs = 2.0 * np.pi * np.arange(n) / n
    samples = np.asarray(g.evaluator(xs), dtype=np.complex128)
    if samples.shape != (n,):
        raise ValueError("evaluator must return one value per sample point")
    spectrum = np.fft.fft(samples) / n
    coeffs: dict[int, complex] = {0: complex(spectrum[0])}
    for k in range(1, degree + 1):
        coeffs[k] = complex(spectrum[k])
        coeffs[-k] = complex(spectrum[n - k])
    return Symbol(coeffs, label)


DEFAULT_TRUNCATION_DEGREE = 64


def from_function(
    evaluator: Callable[[np.ndarray], np.ndarray],
    degree: int = DEFAULT_TRUNCATION_DEGREE,
    label: str = "",
) -> Symbol:
    """Reduce a continuous 2pi-periodic function to a finite symbol.

    The truncation degree is an experiment parameter; the sample count is
    the smallest power of two with at least 4*degree points (and >= 256,
    which keeps aliasing negligible for merely continuous inputs).
    """
    count = 256
    while count < 4 * degree:
        count *= 2
    return fourier_coefficients(SampledFunction(evaluator, count), degree, label=label)


def standard_test_set(name: str) -> list[Symbol]:
    """Korovkin test sets.

    'classical' is the periodic substitute for {1, x, x^2}: the generators
    {1, cos, sin} together with their squares.  'fourier_basic' is just the
    generators.
    """
    one = constant(1.0, label="1")
    c, s = cosine(), sine()
    if name == "classical":
        return [
            one,
            c,
            s,
            product(c, c, label="cos^2"),
            product(s, s, label="sin^2"),
        ]
    if name == "fourier_basic":
        return [one, c, s]
    raise ValueError(f"unknown test set {name!r}")


# ---------------------------------------------------------------------------
# serialization: one coefficient per line, "k re im"

def symbol_to_lines(s: Symbol) -> list[str]:
    return [
        f"{k} {v.real!r} {v.imag!r}" for k, v in sorted(s.coefficients.items())
    ]


def symbol_from_lines(lines, label: str = "") -> Symbol:
    coeffs: dict[int, complex] = {}
    for lineno, raw in enumerate(lines, start=1):
        text = raw.strip()
        if not text or text.startswith("#"):
            continue
        parts = text.split()
        if len(parts) != 3:
            raise ParseError(f"line {lineno}: expected 'k re im', got {text!r}")
        try:
            k = int(parts[0])
            value = complex(float(parts[1]), float(parts[2]))
        except ValueError as exc:
            raise ParseError(f"line {lineno}: {exc}") from exc
        if k in coeffs:
            raise ParseError(f"line {lineno}: duplicate frequency {k}")
        coeffs[k] = value
    return Symbol(coeffs, label)


def save_symbol(s: Symbol, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(symbol_to_lines(s)) + "\n")


def load_symbol(path) -> Symbol:
    with open(path, "r", encoding="utf-8") as fh:
        return symbol_from_lines(fh, label=str(path))


# ---------------------------------------------------------------------------
# preset grammar: terms like "2", "cos", "2cos", "0.5sin3x", "delta(0.01)"

_TERM_RE = re.compile(
    r"^(?P<coef>[+-]?(?:\d+\.?\d*|\.\d+)?)\*?(?:(?P<fn>cos|sin)(?P<freq>\d*)x?|(?P<delta>delta\((?P<dval>[^)]+)\)))?$"
)


def parse_trig_expression(text: str) -> Symbol:
    """Parse a preset like ``2+cos``, ``2-2cos+delta(0.01)``, ``1+0.5cos2x``."""
    src = text.replace(" ", "")
    if not src:
        raise ParseError("empty symbol expression")
    # Split into signed terms.
    terms = re.findall(r"[+-]?[^+-]+(?:\([^)]*\))?", src)
    if "".join(terms) != src:
        raise ParseError(f"cannot tokenize symbol expression {text!r}")
    total = Symbol({}, label=text)
    for term in terms:
        m = _TERM_RE.match(term)
        if not m or (not m.group("coef") and not m.group("fn") and not m.group("delta")):
            raise ParseError(f"bad term {term!r} in symbol expression {text!r}")
        coef_text = m.group("coef")
        if coef_text in ("", "+", "-"):
            coef = 1.0 if coef_text != "-" else -1.0
        else:
            coef = float(coef_text)
        if m.group("fn"):
            freq = int(m.group("freq") or 1)
            if freq < 1:
                raise ParseError(f"bad frequency in term {term!r}")
            part = cosine(freq) if m.group("fn") == "cos" else sine(freq)
            total = total.plus(part.scaled(coef))
        elif m.group("delta"):
            try:
                shift = float(m.group("dval"))
            except ValueError as exc:
                raise ParseError(f"bad delta value in term {term!r}") from exc
            total = total.plus(constant(coef * shift))
        else:
            total = total.plus(constant(coef))
    return Symbol(total.coefficients, label=text)
