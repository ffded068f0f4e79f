"""Power-sum function models: parsing, evaluation, differentiation, certification.

A model is a finite sum of shifted power terms

    f(u) = sum_i  coeff_i * (u - shift_i)^exponent_i

restricted to a closed domain [lo, hi]. This family is closed under
differentiation away from singular edges, admits exact power-rule oracles for
fractional integrals, and covers every test function the bound evaluators
need (monomials, affine functions, constants, fractional powers).

The text form accepted by :func:`parse_function` is

    FLOAT "*(u-" FLOAT ")^" FLOAT   terms joined by "+",  suffix  "on [FLOAT,FLOAT]"

e.g. ``1*(u-0)^2 + -0.5*(u-0)^1 on [0,2]``. Whitespace is insignificant
between tokens. ``render`` emits this same form with shortest round-trip
float literals, so ``parse_function(m.render()) == m``.

Certification of s-convexity is probabilistic: the defining inequality

    g(lam*x + (1-lam)*y) <= lam^s g(x) + (1-lam)^s g(y)

is sampled on seeded random triples plus a deterministic boundary set, and
the signed worst violation is compared against a scale-aware tolerance. A
failed certificate is a result, not an error.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np

from .errors import DerivativeSingularityError, DomainError, ParseError

__all__ = [
    "PowerTerm",
    "FunctionModel",
    "parse_function",
    "CertificationReport",
    "certify_s_convex",
    "certify_s_concave",
    "certify_pointwise",
]

# Scale factor for the certification tolerance: tol = CERT_TOL * (1 + max|g|).
CERT_TOL = 1e-10

# Default number of random triples per certification run.
CERT_SAMPLES = 20_000


@dataclass(frozen=True)
class PowerTerm:
    """One term coeff * (u - shift)^exponent.

    Parsed terms always carry exponent >= 0; negative exponents appear only
    in derivative outputs, where the owning model guarantees shift < lo so
    the term stays bounded on the domain.
    """

    coeff: float
    shift: float
    exponent: float

    def __post_init__(self) -> None:
        for name in ("coeff", "shift", "exponent"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise DomainError(f"PowerTerm.{name} must be finite, got {v!r}")


@dataclass(frozen=True)
class FunctionModel:
    """A power-sum function on a closed domain [lo, hi]."""

    terms: tuple[PowerTerm, ...]
    lo: float
    hi: float

    def __post_init__(self) -> None:
        if not isinstance(self.terms, tuple):
            object.__setattr__(self, "terms", tuple(self.terms))
        if not self.terms:
            raise DomainError("FunctionModel requires at least one term")
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise DomainError("domain endpoints must be finite")
        if not self.lo < self.hi:
            raise DomainError(f"domain requires lo < hi, got [{self.lo!r}, {self.hi!r}]")
        for t in self.terms:
            fractional = not float(t.exponent).is_integer()
            if t.exponent < 0.0 and not t.shift < self.lo:
                raise DomainError(
                    f"term (u-{t.shift!r})^{t.exponent!r} is unbounded at "
                    f"u={t.shift!r} inside [{self.lo!r}, {self.hi!r}]"
                )
            if t.exponent >= 0.0 and fractional and not t.shift <= self.lo:
                raise DomainError(
                    f"term (u-{t.shift!r})^{t.exponent!r} is undefined below "
                    f"u={t.shift!r}; fractional exponents need shift <= lo"
                )

    @property
    def domain(self) -> tuple[float, float]:
        return (self.lo, self.hi)

    @property
    def has_singular_derivative(self) -> bool:
        """True when differentiation would blow up at the left domain edge."""
        return any(
            0.0 < t.exponent < 1.0 and t.shift >= self.lo and t.coeff != 0.0
            for t in self.terms
        )

    def evaluate(self, u):
        """Evaluate at a scalar or ndarray of points inside [lo, hi]."""
        arr = np.asarray(u, dtype=float)
        if arr.size and (arr.min() < self.lo or arr.max() > self.hi):
            raise DomainError(
                f"evaluation point outside domain [{self.lo!r}, {self.hi!r}]"
            )
        out = np.zeros_like(arr)
        for t in self.terms:
            if t.coeff == 0.0:
                continue
            out = out + t.coeff * np.power(arr - t.shift, t.exponent)
        return float(out) if arr.ndim == 0 else out

    __call__ = evaluate

    def derivative(self) -> FunctionModel:
        """Term-wise power rule; constants vanish.

        Raises DerivativeSingularityError when a term with 0 < e < 1 is
        anchored at (or above) the left edge: its derivative would be
        unbounded there, so the caller must shrink the domain first.
        """
        for t in self.terms:
            if 0.0 < t.exponent < 1.0 and t.shift >= self.lo and t.coeff != 0.0:
                raise DerivativeSingularityError(
                    f"derivative of (u-{t.shift!r})^{t.exponent!r} is unbounded "
                    f"at the left edge of [{self.lo!r}, {self.hi!r}]; "
                    "shrink the domain away from the singular point"
                )
        terms = []
        for t in self.terms:
            c = t.coeff * t.exponent
            if c == 0.0:
                continue
            terms.append(PowerTerm(c, t.shift, t.exponent - 1.0))
        if not terms:
            # canonical zero model so the result still renders and re-parses
            terms = [PowerTerm(0.0, self.lo, 0.0)]
        return FunctionModel(tuple(terms), self.lo, self.hi)

    def with_domain(self, lo: float, hi: float) -> FunctionModel:
        return FunctionModel(self.terms, lo, hi)

    def render(self) -> str:
        """Emit the grammar form; parse_function(render()) reproduces self."""
        body = " + ".join(
            f"{t.coeff!r}*(u-{t.shift!r})^{t.exponent!r}" for t in self.terms
        )
        return f"{body} on [{self.lo!r},{self.hi!r}]"

    def __str__(self) -> str:
        return self.render()


_FLOAT_RE = re.compile(r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")


class _Cursor:
    """Whitespace-skipping scanner that reports 0-based input positions."""

    def __init__(self, text: str) -> None:
        self.text = text
        self.pos = 0

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def at_end(self) -> bool:
        self.skip_ws()
        return self.pos >= len(self.text)

    def peek(self, literal: str) -> bool:
        self.skip_ws()
        return self.text.startswith(literal, self.pos)

    def expect(self, literal: str) -> None:
        self.skip_ws()
        if not self.text.startswith(literal, self.pos):
            raise ParseError(f"expected {literal!r}", self.pos)
        self.pos += len(literal)

    def expect_float(self, what: str) -> float:
        self.skip_ws()
        m = _FLOAT_RE.match(self.text, self.pos)
        if m is None:
            raise ParseError(f"expected {what}", self.pos)
        self.pos = m.end()
        return float(m.group())


def parse_function(spec: str) -> FunctionModel:
    """Parse the mini-grammar into a FunctionModel.

    Syntax violations raise ParseError with the offending position; terms
    that are undefined on the stated domain (negative exponents, fractional
    exponents anchored above lo) raise DomainError.
    """
    cur = _Cursor(spec)
    raw_terms: list[tuple[float, float, float, int]] = []
    while True:
        cpos = cur.pos
        coeff = cur.expect_float("a coefficient")
        cur.expect("*")
        cur.expect("(")
        cur.expect("u")
        cur.expect("-")
        shift = cur.expect_float("a shift")
        cur.expect(")")
        cur.expect("^")
        epos = cur.pos
        exponent = cur.expect_float("an exponent")
        raw_terms.append((coeff, shift, exponent, epos))
        if cur.peek("on"):
            break
        if cur.peek("+"):
            cur.expect("+")
            continue
        cur.skip_ws()
        raise ParseError("expected '+' or 'on'", cur.pos)
    cur.expect("on")
    cur.expect("[")
    lo = cur.expect_float("the domain lower bound")
    cur.expect(",")
    hi = cur.expect_float("the domain upper bound")
    cur.expect("]")
    if not cur.at_end():
        raise ParseError("unexpected trailing input", cur.pos)

    terms = []
    for coeff, shift, exponent, epos in raw_terms:
        if exponent < 0.0:
            raise DomainError(
                f"exponent must be >= 0 in a function spec, got {exponent!r} "
                f"(position {epos})"
            )
        terms.append(PowerTerm(coeff, shift, exponent))
    return FunctionModel(tuple(terms), lo, hi)


@dataclass(frozen=True)
class CertificationReport:
    """Outcome of a sampled s-convexity or s-concavity check.

    ``worst_violation`` is the signed maximum of (violated side minus
    satisfied side) over all sampled triples; positive means the defining
    inequality failed by that amount. ``witness`` is the (x, y, lambda)
    triple attaining it. ``verdict`` is True iff worst_violation <= tol.
    """

    verdict: bool
    worst_violation: float
    witness: tuple[float, float, float]
    samples: int
    s: float
    mode: str
    seed: int
    tol: float


def certify_pointwise(
    fn,
    lo: float,
    hi: float,
    s: float,
    mode: str,
    samples: int = CERT_SAMPLES,
    seed: int = 0,
) -> CertificationReport:
    """Certify a vectorized callable on [lo, hi] in the second sense.

    mode "convex" checks g(lam x + (1-lam) y) <= lam^s g(x) + (1-lam)^s g(y);
    mode "concave" checks the reversed inequality. The weights lam^s use the
    continuous extension 0^s = 0 at lam in {0, 1}. Sampling is a seeded
    uniform draw over [lo, hi]^2 x [0, 1] plus a deterministic boundary set
    (lam in {0, 1/2, 1} against all endpoint pairs).
    """
    if mode not in ("convex", "concave"):
        raise DomainError(f"mode must be 'convex' or 'concave', got {mode!r}")
    if not 0.0 < s <= 1.0:
        raise DomainError(f"s must lie in (0, 1], got {s!r}")
    if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
        raise DomainError(f"certification interval invalid: [{lo!r}, {hi!r}]")
    if samples < 0:
        raise DomainError("samples must be >= 0")

    ends = np.array([lo, hi])
    xb, yb = np.repeat(ends, 2), np.tile(ends, 2)
    lam_b = np.repeat([0.0, 0.5, 1.0], 4)
    xs_b, ys_b = np.tile(xb, 3), np.tile(yb, 3)

    rng = np.random.default_rng(seed)
    lam_r = rng.uniform(0.0, 1.0, samples)
    xs_r = rng.uniform(lo, hi, samples)
    ys_r = rng.uniform(lo, hi, samples)

    lam = np.concatenate([lam_b, lam_r])
    xs = np.concatenate([xs_b, xs_r])
    ys = np.concatenate([ys_b, ys_r])
    mix = np.clip(lam * xs + (1.0 - lam) * ys, lo, hi)

    def _vals(pts: np.ndarray) -> np.ndarray:
        out = np.asarray(fn(pts), dtype=float)
        return np.broadcast_to(out, pts.shape)

    gx, gy, gm = _vals(xs), _vals(ys), _vals(mix)
    combo = np.power(lam, s) * gx + np.power(1.0 - lam, s) * gy
    viol = gm - combo if mode == "convex" else combo - gm

    worst = int(np.argmax(viol))
    scale = max(np.abs(gx).max(), np.abs(gy).max(), np.abs(gm).max())
    tol = CERT_TOL * (1.0 + float(scale))
    worst_violation = float(viol[worst])
    return CertificationReport(
        verdict=worst_violation <= tol,
        worst_violation=worst_violation,
        witness=(float(xs[worst]), float(ys[worst]), float(lam[worst])),
        samples=int(lam.size),
        s=float(s),
        mode=mode,
        seed=int(seed),
        tol=tol,
    )


def certify_s_convex(
    g: FunctionModel, s: float, samples: int = CERT_SAMPLES, seed: int = 0
) -> CertificationReport:
    """Certify that a model is s-convex in the second sense on its domain."""
    return certify_pointwise(g.evaluate, g.lo, g.hi, s, "convex", samples, seed)


def certify_s_concave(
    g: FunctionModel, s: float, samples: int = CERT_SAMPLES, seed: int = 0
) -> CertificationReport:
    """Certify that a model is s-concave in the second sense on its domain."""
    return certify_pointwise(g.evaluate, g.lo, g.hi, s, "concave", samples, seed)
