"""Batch verification sweeps over parameter grids, with CSV persistence.

A sweep crosses every family with every (alpha, s, x, q) tuple and evaluates
the selected bound ids, recording tightness diagnostics per grid point. The
endpoint-average sandwich (id HH11) has no alpha, x or q parameters, so it is
evaluated once per (family, s) and its rows leave those columns empty; its
``lhs`` is the mean integral, ``rhs`` the endpoint-average bound, ``ratio``
lhs/rhs (1 at the sharpness witness u^s on [0, 1]), and ``margin`` the
smaller of the two sandwich slacks so one violation threshold covers both
inequalities.

A record is a violation when it is certified and margin < -1e-9 * (1 + rhs),
one order looser than the quadrature tolerance driving lhs. Certifications
are cached per (family, s, target, mode, q); certificate sampling seeds are
derived deterministically from the run seed and the cache key, so a sweep is
reproducible record-for-record and its CSV byte-for-byte.

Quadrature failures at a single grid point produce error rows (NaN metrics,
certified false) rather than aborting the sweep.
"""

from __future__ import annotations

import csv
import math
import zlib
from dataclasses import dataclass, replace
from importlib import resources

from .errors import CsvSchemaError, DomainError, ParseError, QuadratureToleranceError
from .funcmodel import CERT_SAMPLES, FunctionModel, certify_pointwise, parse_function
from .hh_core import (
    ProblemInstance,
    TheoremId,
    conjugate_exponent,
    hh_sandwich_with_error,
    identity_lhs_with_error,
    rhs_t21,
    rhs_t22,
    rhs_t23,
    rhs_t24,
)
from .rlint import DEFAULT_CONFIG, QuadratureConfig

__all__ = [
    "CSV_COLUMNS",
    "VIOLATION_TOL",
    "SweepGrid",
    "SweepRecord",
    "SweepSummary",
    "TheoremSummary",
    "run_sweep",
    "is_violation",
    "summarize",
    "format_summary",
    "write_csv",
    "read_csv",
    "render_svg",
    "grid_from_config_text",
    "apply_derivative_shrink",
    "standard_config_text",
    "standard_grid",
]

CSV_COLUMNS = (
    "theorem_id",
    "family_id",
    "alpha",
    "s",
    "x",
    "p",
    "q",
    "lhs",
    "rhs",
    "margin",
    "ratio",
    "certified",
    "quad_error_est",
)

# margin < -VIOLATION_TOL * (1 + rhs) flags a certified record as a violation
VIOLATION_TOL = 1e-9

_BOUND_ORDER = (TheoremId.T21, TheoremId.T22, TheoremId.T23, TheoremId.T24)
_THEOREM_ORDER = _BOUND_ORDER + (TheoremId.HH11,)

_SHRINK_FRACTION = 1e-9


@dataclass(frozen=True)
class SweepRecord:
    """One evaluated grid point; empty columns are None."""

    theorem_id: str
    family_id: str
    alpha: float | None
    s: float
    x: float | None
    p: float | None
    q: float | None
    lhs: float
    rhs: float
    margin: float
    ratio: float
    certified: bool
    quad_error_est: float


@dataclass(frozen=True)
class SweepGrid:
    """A cartesian verification grid.

    xfracs are relative positions: x = a + frac * (b - a) per family, where
    [a, b] is the family's model domain. q values must exceed 1 (the
    power-mean q = 1 case is already covered by the first-power bound).
    """

    alphas: tuple[float, ...]
    svals: tuple[float, ...]
    xfracs: tuple[float, ...]
    qvals: tuple[float, ...]
    families: tuple[tuple[str, FunctionModel], ...]
    theorems: tuple[TheoremId, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "alphas", tuple(self.alphas))
        object.__setattr__(self, "svals", tuple(self.svals))
        object.__setattr__(self, "xfracs", tuple(self.xfracs))
        object.__setattr__(self, "qvals", tuple(self.qvals))
        object.__setattr__(
            self, "families", tuple((fid, f) for fid, f in self.families)
        )
        theorems = tuple(TheoremId(t) for t in self.theorems)
        object.__setattr__(
            self, "theorems", tuple(t for t in _THEOREM_ORDER if t in theorems)
        )
        for name in ("alphas", "svals", "xfracs", "qvals", "families", "theorems"):
            if not getattr(self, name):
                raise DomainError(f"grid field {name} must be non-empty")
        if any(not a > 0.0 for a in self.alphas):
            raise DomainError("alphas must be positive")
        if any(not 0.0 < s <= 1.0 for s in self.svals):
            raise DomainError("svals must lie in (0, 1]")
        if any(not 0.0 <= fr <= 1.0 for fr in self.xfracs):
            raise DomainError("xfracs must lie in [0, 1]")
        if any(not q > 1.0 for q in self.qvals):
            raise DomainError("qvals must exceed 1")
        ids = [fid for fid, _ in self.families]
        if len(set(ids)) != len(ids):
            raise DomainError("family ids must be unique")
        if any(not fid for fid in ids):
            raise DomainError("family ids must be non-empty")


def _derive_seed(seed: int, *parts) -> int:
    key = "|".join(repr(p) for p in parts).encode()
    return ((seed & 0xFFFFFFFF) * 0x9E3779B1 + zlib.crc32(key)) % 2**32


def _error_record(
    theorem_id: TheoremId,
    family_id: str,
    alpha: float | None,
    s: float,
    x: float | None,
    p: float | None,
    q: float | None,
    err: float,
) -> SweepRecord:
    nan = math.nan
    return SweepRecord(
        theorem_id.value, family_id, alpha, s, x, p, q, nan, nan, nan, nan, False, err
    )


def run_sweep(
    grid: SweepGrid,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
    seed: int = 0,
    samples: int = CERT_SAMPLES,
) -> list[SweepRecord]:
    """Evaluate the grid, in family -> s -> alpha -> x -> q -> theorem order.

    Deterministic given (grid, cfg, seed, samples). Per-point quadrature
    failures become error rows; everything else fails loudly.
    """
    records: list[SweepRecord] = []
    fp_by_family = {fid: f.derivative() for fid, f in grid.families}
    lhs_cache: dict = {}
    cert_cache: dict = {}
    bound_thms = [t for t in grid.theorems if t is not TheoremId.HH11]

    def cert(fid, f, fp, s, target, mode, q):
        key = (fid, s, target, mode, q)
        if key not in cert_cache:
            if target == "f":
                fn = f.evaluate
            elif target == "abs_deriv":
                fn = lambda u: abs(fp.evaluate(u))
            else:
                fn = lambda u: abs(fp.evaluate(u)) ** q
            cert_cache[key] = certify_pointwise(
                fn, f.lo, f.hi, s, mode, samples, _derive_seed(seed, *key)
            )
        return cert_cache[key]

    def lhs(fid, f, alpha, x):
        key = (fid, alpha, x)
        if key not in lhs_cache:
            inst = ProblemInstance(f, f.lo, f.hi, x, alpha, 1.0)
            try:
                value, err = identity_lhs_with_error(inst, cfg)
                lhs_cache[key] = (abs(value), err)
            except QuadratureToleranceError as exc:
                lhs_cache[key] = exc
        return lhs_cache[key]

    for fid, f in grid.families:
        a, b = f.lo, f.hi
        fp = fp_by_family[fid]
        for s in grid.svals:
            if TheoremId.HH11 in grid.theorems:
                c = cert(fid, f, fp, s, "f", "convex", None)
                try:
                    (left, mid, right), err = hh_sandwich_with_error(f, a, b, s, cfg)
                    ratio = mid / right if right != 0.0 else (0.0 if mid == 0.0 else math.inf)
                    records.append(
                        SweepRecord(
                            TheoremId.HH11.value,
                            fid,
                            None,
                            s,
                            None,
                            None,
                            None,
                            lhs=mid,
                            rhs=right,
                            margin=min(right - mid, mid - left),
                            ratio=ratio,
                            certified=c.verdict,
                            quad_error_est=err,
                        )
                    )
                except QuadratureToleranceError as exc:
                    records.append(
                        _error_record(
                            TheoremId.HH11, fid, None, s, None, None, None,
                            exc.error_estimate,
                        )
                    )
            if not bound_thms:
                continue
            for alpha in grid.alphas:
                for frac in grid.xfracs:
                    x = a + frac * (b - a)
                    for q in grid.qvals:
                        p = conjugate_exponent(q)
                        got = lhs(fid, f, alpha, x)
                        for thm in bound_thms:
                            if thm is TheoremId.T21:
                                c = cert(fid, f, fp, s, "abs_deriv", "convex", None)
                            elif thm is TheoremId.T24:
                                c = cert(fid, f, fp, s, "abs_deriv_pow", "concave", q)
                            else:
                                c = cert(fid, f, fp, s, "abs_deriv_pow", "convex", q)
                            if isinstance(got, QuadratureToleranceError):
                                records.append(
                                    _error_record(
                                        thm, fid, alpha, s, x, p, q,
                                        got.error_estimate,
                                    )
                                )
                                continue
                            lhs_val, qerr = got
                            inst = ProblemInstance(f, a, b, x, alpha, s, q=q)
                            if thm is TheoremId.T21:
                                rhs = rhs_t21(inst)
                            elif thm is TheoremId.T22:
                                rhs = rhs_t22(inst)
                            elif thm is TheoremId.T23:
                                rhs = rhs_t23(inst)
                            else:
                                rhs = rhs_t24(inst)
                            ratio = (
                                lhs_val / rhs
                                if rhs != 0.0
                                else (0.0 if lhs_val == 0.0 else math.inf)
                            )
                            records.append(
                                SweepRecord(
                                    thm.value,
                                    fid,
                                    alpha,
                                    s,
                                    x,
                                    p,
                                    q,
                                    lhs=lhs_val,
                                    rhs=rhs,
                                    margin=rhs - lhs_val,
                                    ratio=ratio,
                                    certified=c.verdict,
                                    quad_error_est=qerr,
                                )
                            )
    return records


def is_violation(rec: SweepRecord) -> bool:
    """Certified record whose margin undercuts the violation threshold."""
    return (
        rec.certified
        and math.isfinite(rec.margin)
        and rec.margin < -VIOLATION_TOL * (1.0 + rec.rhs)
    )


@dataclass(frozen=True)
class TheoremSummary:
    count: int
    certified: int
    violations: int
    max_ratio: float | None
    argmax: SweepRecord | None
    mean_margin: float | None


@dataclass(frozen=True)
class SweepSummary:
    total: int
    certified: int
    errors: int
    violations: int
    by_theorem: dict


def summarize(records: list[SweepRecord]) -> SweepSummary:
    """Violation count, per-theorem max ratio with its parameters, mean margin.

    max_ratio is taken over certified records with finite ratio; an infinite
    ratio only arises from rhs = 0 rows, whose tightness margin already says
    everything.
    """
    if not records:
        raise DomainError("summarize requires at least one record")
    errors = sum(1 for r in records if not math.isfinite(r.lhs))
    certified = sum(1 for r in records if r.certified)
    violations = sum(1 for r in records if is_violation(r))
    by_theorem: dict[str, TheoremSummary] = {}
    for tid in _THEOREM_ORDER:
        rows = [r for r in records if r.theorem_id == tid.value]
        if not rows:
            continue
        live = [
            r
            for r in rows
            if r.certified and math.isfinite(r.margin) and math.isfinite(r.ratio)
        ]
        argmax = max(live, key=lambda r: r.ratio, default=None)
        by_theorem[tid.value] = TheoremSummary(
            count=len(rows),
            certified=sum(1 for r in rows if r.certified),
            violations=sum(1 for r in rows if is_violation(r)),
            max_ratio=argmax.ratio if argmax is not None else None,
            argmax=argmax,
            mean_margin=(
                sum(r.margin for r in live) / len(live) if live else None
            ),
        )
    return SweepSummary(
        total=len(records),
        certified=certified,
        errors=errors,
        violations=violations,
        by_theorem=by_theorem,
    )


def _g12(v: float) -> str:
    return format(v, ".12g")


def format_summary(summary: SweepSummary) -> str:
    lines = [
        f"records = {summary.total}  certified = {summary.certified}  "
        f"errors = {summary.errors}  violations = {summary.violations}"
    ]
    for tid, ts in summary.by_theorem.items():
        if ts.argmax is None:
            lines.append(
                f"{tid}: records={ts.count} certified={ts.certified} "
                f"violations={ts.violations} (no certified records)"
            )
            continue
        r = ts.argmax
        where = [f"family={r.family_id}", f"s={_g12(r.s)}"]
        if r.alpha is not None:
            where.append(f"alpha={_g12(r.alpha)}")
        if r.x is not None:
            where.append(f"x={_g12(r.x)}")
        if r.q is not None:
            where.append(f"q={_g12(r.q)}")
        lines.append(
            f"{tid}: records={ts.count} certified={ts.certified} "
            f"violations={ts.violations} max_ratio={_g12(ts.max_ratio)} "
            f"({' '.join(where)}) mean_margin={_g12(ts.mean_margin)}"
        )
    return "\n".join(lines)


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_csv(records: list[SweepRecord], path) -> None:
    """Persist records; float cells use shortest round-trip literals."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for r in records:
            writer.writerow(
                [
                    r.theorem_id,
                    r.family_id,
                    _cell(r.alpha),
                    _cell(r.s),
                    _cell(r.x),
                    _cell(r.p),
                    _cell(r.q),
                    _cell(r.lhs),
                    _cell(r.rhs),
                    _cell(r.margin),
                    _cell(r.ratio),
                    _cell(r.certified),
                    _cell(r.quad_error_est),
                ]
            )


def _parse_float(cell: str, column: str, row: int) -> float:
    try:
        return float(cell)
    except ValueError:
        raise CsvSchemaError(
            f"row {row}: column {column!r} is not a number: {cell!r}"
        ) from None


def read_csv(path) -> list[SweepRecord]:
    """Read records back; schema violations name the offending column."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise CsvSchemaError("empty file: missing header row") from None
        if tuple(header) != CSV_COLUMNS:
            missing = [c for c in CSV_COLUMNS if c not in header]
            if missing:
                raise CsvSchemaError(f"missing column(s): {', '.join(missing)}")
            raise CsvSchemaError(
                f"header mismatch: expected {','.join(CSV_COLUMNS)}, got {','.join(header)}"
            )
        records = []
        for i, row in enumerate(reader, start=1):
            if len(row) != len(CSV_COLUMNS):
                raise CsvSchemaError(
                    f"row {i}: expected {len(CSV_COLUMNS)} cells, got {len(row)}"
                )
            vals = dict(zip(CSV_COLUMNS, row))
            if vals["certified"] not in ("true", "false"):
                raise CsvSchemaError(
                    f"row {i}: column 'certified' must be true/false, "
                    f"got {vals['certified']!r}"
                )
            optional = {
                c: (None if vals[c] == "" else _parse_float(vals[c], c, i))
                for c in ("alpha", "x", "p", "q")
            }
            records.append(
                SweepRecord(
                    theorem_id=vals["theorem_id"],
                    family_id=vals["family_id"],
                    alpha=optional["alpha"],
                    s=_parse_float(vals["s"], "s", i),
                    x=optional["x"],
                    p=optional["p"],
                    q=optional["q"],
                    lhs=_parse_float(vals["lhs"], "lhs", i),
                    rhs=_parse_float(vals["rhs"], "rhs", i),
                    margin=_parse_float(vals["margin"], "margin", i),
                    ratio=_parse_float(vals["ratio"], "ratio", i),
                    certified=vals["certified"] == "true",
                    quad_error_est=_parse_float(
                        vals["quad_error_est"], "quad_error_est", i
                    ),
                )
            )
    return records


_SVG_COLORS = {
    "T21": "#1f77b4",
    "T22": "#ff7f0e",
    "T23": "#2ca02c",
    "T24": "#d62728",
    "HH11": "#9467bd",
}


def render_svg(records: list[SweepRecord]) -> str:
    """Scatter of ratio against alpha per bound id, 800x600 viewBox.

    Sandwich rows carry no alpha and are omitted.
    """
    pts = [
        r
        for r in records
        if r.certified and r.alpha is not None and math.isfinite(r.ratio)
    ]
    width, height = 800, 600
    ml, mr, mt, mb = 70, 150, 30, 50
    alphas = sorted({r.alpha for r in pts})
    amin, amax = (alphas[0], alphas[-1]) if alphas else (0.0, 1.0)
    if amin == amax:
        amin, amax = amin - 0.5, amax + 0.5
    rmax = max((r.ratio for r in pts), default=1.0)
    ymax = max(1.0, rmax) * 1.05

    def px(alpha: float) -> float:
        return ml + (alpha - amin) / (amax - amin) * (width - ml - mr)

    def py(ratio: float) -> float:
        return height - mb - ratio / ymax * (height - mt - mb)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{ml}" y1="{height - mb}" x2="{width - mr}" y2="{height - mb}" '
        'stroke="black"/>',
        f'<line x1="{ml}" y1="{mt}" x2="{ml}" y2="{height - mb}" stroke="black"/>',
        f'<text x="{(ml + width - mr) / 2:.1f}" y="{height - 12}" '
        'text-anchor="middle" font-size="14">alpha</text>',
        f'<text x="18" y="{(mt + height - mb) / 2:.1f}" text-anchor="middle" '
        f'font-size="14" transform="rotate(-90 18 {(mt + height - mb) / 2:.1f})">'
        "lhs / rhs</text>",
    ]
    for a in alphas[:12]:
        out.append(
            f'<line x1="{px(a):.1f}" y1="{height - mb}" x2="{px(a):.1f}" '
            f'y2="{height - mb + 5}" stroke="black"/>'
        )
        out.append(
            f'<text x="{px(a):.1f}" y="{height - mb + 20}" text-anchor="middle" '
            f'font-size="12">{a:g}</text>'
        )
    ticks = 5
    for i in range(ticks + 1):
        yv = ymax * i / ticks
        out.append(
            f'<line x1="{ml - 5}" y1="{py(yv):.1f}" x2="{ml}" y2="{py(yv):.1f}" '
            'stroke="black"/>'
        )
        out.append(
            f'<text x="{ml - 9}" y="{py(yv) + 4:.1f}" text-anchor="end" '
            f'font-size="12">{yv:.2f}</text>'
        )
    seen = [t.value for t in _BOUND_ORDER if any(r.theorem_id == t.value for r in pts)]
    for r in pts:
        color = _SVG_COLORS.get(r.theorem_id, "#7f7f7f")
        out.append(
            f'<circle cx="{px(r.alpha):.2f}" cy="{py(r.ratio):.2f}" r="3" '
            f'fill="{color}" fill-opacity="0.55"/>'
        )
    for i, tid in enumerate(seen):
        yy = mt + 16 + 20 * i
        out.append(
            f'<circle cx="{width - mr + 18}" cy="{yy}" r="4" fill="{_SVG_COLORS[tid]}"/>'
        )
        out.append(
            f'<text x="{width - mr + 30}" y="{yy + 4}" font-size="13">{tid}</text>'
        )
    out.append("</svg>")
    return "\n".join(out)


_THEOREM_TOKENS = {
    "t21": TheoremId.T21,
    "t22": TheoremId.T22,
    "t23": TheoremId.T23,
    "t24": TheoremId.T24,
    "hh": TheoremId.HH11,
}

_LIST_KEYS = ("alphas", "svals", "xfracs", "qvals")


def grid_from_config_text(text: str) -> SweepGrid:
    """Parse a sweep config: 'key = value' lines with '#' comments.

    Keys: alphas, svals, xfracs, qvals (comma-separated numbers), theorems
    (comma-separated from t21, t22, t23, t24, hh) and one 'family.<id> =
    <function spec>' line per family. ParseError positions are line indices.
    """
    lists: dict[str, tuple[float, ...]] = {}
    theorems: tuple[TheoremId, ...] | None = None
    families: list[tuple[str, FunctionModel]] = []
    for lineno, raw in enumerate(text.splitlines()):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError("expected 'key = value'", lineno)
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key in _LIST_KEYS:
            try:
                lists[key] = tuple(float(tok) for tok in value.split(","))
            except ValueError:
                raise ParseError(f"{key} expects comma-separated numbers", lineno) from None
        elif key == "theorems":
            toks = [t.strip().lower() for t in value.split(",")]
            unknown = [t for t in toks if t not in _THEOREM_TOKENS]
            if unknown:
                raise ParseError(
                    f"unknown theorem id(s) {', '.join(unknown)} "
                    f"(expected t21, t22, t23, t24, hh)",
                    lineno,
                )
            theorems = tuple(_THEOREM_TOKENS[t] for t in toks)
        elif key.startswith("family."):
            fid = key[len("family.") :].strip()
            if not fid:
                raise ParseError("family key needs an id: family.<id> = <spec>", lineno)
            families.append((fid, parse_function(value)))
        else:
            raise ParseError(f"unknown config key {key!r}", lineno)
    missing = [k for k in _LIST_KEYS if k not in lists]
    if theorems is None:
        missing.append("theorems")
    if missing:
        raise DomainError(f"config missing required key(s): {', '.join(missing)}")
    if not families:
        raise DomainError("config defines no families (family.<id> = <spec> lines)")
    return SweepGrid(
        alphas=lists["alphas"],
        svals=lists["svals"],
        xfracs=lists["xfracs"],
        qvals=lists["qvals"],
        families=tuple(families),
        theorems=theorems,
    )


def apply_derivative_shrink(grid: SweepGrid) -> tuple[SweepGrid, list[str]]:
    """Move singular-derivative families off their left edge when f' is needed.

    Bounds t21..t24 evaluate f', which blows up at the left endpoint for
    terms c*(u-lo)^e with 0 < e < 1. When the grid includes such bounds,
    affected family domains shrink to [lo + 1e-9*(hi-lo), hi]; each shrink
    is reported in the returned notes. Sandwich-only grids are untouched
    (the sandwich needs no derivative, and its sharpness witness u^s lives
    exactly at a = 0).
    """
    if not any(t in grid.theorems for t in _BOUND_ORDER):
        return grid, []
    notes = []
    families = []
    for fid, f in grid.families:
        if f.has_singular_derivative:
            lo = f.lo + _SHRINK_FRACTION * (f.hi - f.lo)
            f = f.with_domain(lo, f.hi)
            notes.append(
                f"note: family {fid}: domain shrunk to [{lo!r}, {f.hi!r}] "
                "(derivative singular at the left endpoint)"
            )
        families.append((fid, f))
    if not notes:
        return grid, []
    return replace(grid, families=tuple(families)), notes


def standard_config_text() -> str:
    """The shipped default sweep configuration."""
    return (
        resources.files("fracineq.data").joinpath("standard_sweep.cfg").read_text()
    )


def standard_grid() -> SweepGrid:
    """Grid parsed from the shipped default configuration."""
    return grid_from_config_text(standard_config_text())
