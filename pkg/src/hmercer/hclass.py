"""Generator functions ``h`` and grid certification of the structural hypotheses.

Every check samples a finite grid and reports the tightest point it saw.
A passing verdict means "certified on grid", nothing stronger.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import ConfigError, DomainError, NonNegativityError
from .expr import Expression, evaluate, evaluate_array, parse
from .objective import ObjectiveSpec
from .sequences import WeightVector

DEFAULT_GRID_N = 64
EPS = 1e-6

VARIANTS = ("identity", "power", "reciprocal", "constant", "custom")


@dataclass(frozen=True)
class Tolerance:
    """Mixed criterion: violation iff margin < -(abs + rel * max(|lhs|, |rhs|, 1))."""

    abs: float = 1e-9
    rel: float = 1e-9

    def __post_init__(self):
        if not (self.abs >= 0.0 and self.rel >= 0.0):
            raise ConfigError("tolerances must be non-negative", "tolerance")

    def allowance(self, lhs, rhs):
        scale = np.maximum(np.maximum(np.abs(lhs), np.abs(rhs)), 1.0)
        return self.abs + self.rel * scale


DEFAULT_TOL = Tolerance()


@dataclass(frozen=True)
class HFamily:
    """``h : J -> [0, inf)`` with ``J = (lo, hi]``; the default J is (0, 1]."""

    variant: str
    param: float | None = None
    expr: Expression | None = None
    domain: tuple[float, float] = (0.0, 1.0)

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ConfigError(f"unknown h family {self.variant!r}", "h.family")
        if self.variant == "power" and not (self.param is not None and self.param > 0):
            raise ConfigError("power exponent must be > 0", "h.param")
        if self.variant == "constant" and not (self.param is not None and self.param > 0):
            raise ConfigError("constant must be > 0", "h.param")
        if self.variant == "custom" and self.expr is None:
            raise ConfigError("custom h needs an expression", "h.param")
        lo, hi = self.domain
        if not (lo >= 0.0 and hi >= 1.0 and lo < 1.0):
            raise ConfigError(f"domain J=({lo}, {hi}] must contain (0, 1)", "h.domain")

    @classmethod
    def identity(cls) -> "HFamily":
        return cls("identity")

    @classmethod
    def power(cls, s: float) -> "HFamily":
        return cls("power", float(s))

    @classmethod
    def reciprocal(cls) -> "HFamily":
        return cls("reciprocal")

    @classmethod
    def constant(cls, c: float = 1.0) -> "HFamily":
        return cls("constant", float(c))

    @classmethod
    def custom(cls, source: str | Expression, domain=(0.0, 1.0)) -> "HFamily":
        e = source if isinstance(source, Expression) else parse(source)
        return cls("custom", None, e, tuple(domain))

    @property
    def name(self) -> str:
        if self.variant in ("power", "constant"):
            return f"{self.variant}({self.param!r})"
        if self.variant == "custom":
            return f"custom({self.expr.source or self.expr})"
        return self.variant

    def _check_domain(self, t) -> None:
        lo, hi = self.domain
        arr = np.asarray(t, dtype=float)
        if not np.all((arr > lo) & (arr <= hi)):
            bad = arr[~((arr > lo) & (arr <= hi))] if arr.ndim else arr
            raise DomainError(f"h({np.ravel(bad)[0]!r}) is outside J = ({lo}, {hi}]")

    def __call__(self, t):
        if isinstance(t, np.ndarray):
            return self.many(t)
        self._check_domain(t)
        t = float(t)
        v = self.variant
        if v == "identity":
            return t
        if v == "power":
            return t**self.param
        if v == "reciprocal":
            return 1.0 / t
        if v == "constant":
            return self.param
        return evaluate(self.expr, t)

    def many(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        self._check_domain(t)
        v = self.variant
        if v == "identity":
            return t.copy()
        if v == "power":
            return t**self.param
        if v == "reciprocal":
            return 1.0 / t
        if v == "constant":
            return np.full_like(t, self.param)
        return evaluate_array(self.expr, t)

    def describe(self) -> dict:
        out = {"family": "expression" if self.variant == "custom" else self.variant}
        if self.variant in ("power", "constant"):
            out["param"] = self.param
        elif self.variant == "custom":
            out["param"] = self.expr.source or str(self.expr)
        return out


@dataclass(frozen=True)
class CheckVerdict:
    """Outcome of one grid check.

    ``worst_margin`` is signed (negative = violated) and ``witness`` is the
    grid point that attains it, populated on pass as well. ``tolerance`` is
    the allowance in force at the witness, so ``passed`` is exactly
    ``worst_margin >= -tolerance``.
    """

    name: str
    passed: bool
    worst_margin: float
    witness: tuple
    grid_size: int
    tolerance: float
    detail: dict = field(default_factory=dict, compare=False)

    @property
    def status(self) -> str:
        return "certified on grid" if self.passed else "violated on grid"

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "status": self.status,
            "worst_margin": self.worst_margin,
            "witness": list(self.witness),
            "grid_size": self.grid_size,
            "tolerance": self.tolerance,
            **({"detail": self.detail} if self.detail else {}),
        }


def _verdict(name, margin, lhs, rhs, points, tol: Tolerance, detail=None) -> CheckVerdict:
    """Pick the point most violated relative to its own allowance.

    ``points`` is a tuple of arrays broadcastable to ``margin``; ties go to the
    lexicographically smallest grid index (``argmin`` on C order).
    """
    margin = np.asarray(margin, dtype=float)
    allow = np.broadcast_to(tol.allowance(lhs, rhs), margin.shape)
    idx = int(np.argmin(margin + allow))
    pos = np.unravel_index(idx, margin.shape)
    witness = tuple(float(np.broadcast_to(p, margin.shape)[pos]) for p in points)
    worst = float(margin.flat[idx])
    allowance = float(allow.flat[idx])
    return CheckVerdict(name, bool(worst >= -allowance), worst, witness, int(margin.size), allowance, detail or {})


def _require_grid(grid_n: int) -> None:
    if grid_n < 2:
        raise ConfigError(f"grid_n must be >= 2, got {grid_n}", "grid_n")


def _pair_grid(grid_n: int) -> np.ndarray:
    return np.linspace(EPS, 1.0, grid_n)


def _t_grid(grid_n: int) -> np.ndarray:
    return np.linspace(EPS, 1.0 - EPS, grid_n)


@lru_cache(maxsize=256)
def check_h_nonnegative(h: HFamily, grid_n: int = DEFAULT_GRID_N, tol: Tolerance = DEFAULT_TOL) -> CheckVerdict:
    _require_grid(grid_n)
    t = _pair_grid(grid_n)
    v = h.many(t)
    return _verdict("h_nonnegative", v, v, 0.0, (t,), tol)


@lru_cache(maxsize=256)
def check_supermultiplicative(h: HFamily, grid_n: int = DEFAULT_GRID_N, tol: Tolerance = DEFAULT_TOL) -> CheckVerdict:
    """h(xy) >= h(x) h(y) on a grid of pairs in (0, 1]^2."""
    _require_grid(grid_n)
    g = _pair_grid(grid_n)
    x, y = np.meshgrid(g, g, indexing="ij")
    hxy = h.many(x * y)
    prod = h.many(x) * h.many(y)
    return _verdict("supermultiplicative", hxy - prod, hxy, prod, (x, y), tol)


@lru_cache(maxsize=256)
def check_submultiplicative(h: HFamily, grid_n: int = DEFAULT_GRID_N, tol: Tolerance = DEFAULT_TOL) -> CheckVerdict:
    """h(xy) <= h(x) h(y) on a grid of pairs in (0, 1]^2."""
    _require_grid(grid_n)
    g = _pair_grid(grid_n)
    x, y = np.meshgrid(g, g, indexing="ij")
    hxy = h.many(x * y)
    prod = h.many(x) * h.many(y)
    return _verdict("submultiplicative", prod - hxy, hxy, prod, (x, y), tol)


def _direction(direction: str) -> float:
    if direction in ("<=1", "≤1", "le"):
        return 1.0
    if direction in (">=1", "≥1", "ge"):
        return -1.0
    raise ConfigError(f"direction must be '<=1' or '>=1', got {direction!r}", "direction")


def _sense_sign(sense: str) -> float:
    if sense == "convex":
        return 1.0
    if sense == "concave":
        return -1.0
    raise ConfigError(f"sense must be 'convex' or 'concave', got {sense!r}", "sense")


def direction_for(sense: str) -> str:
    return "<=1" if _sense_sign(sense) > 0 else ">=1"


@lru_cache(maxsize=256)
def check_lemma_condition(
    h: HFamily, grid_n: int = DEFAULT_GRID_N, tol: Tolerance = DEFAULT_TOL, direction: str = "<=1"
) -> CheckVerdict:
    """h(a) + h(1 - a) against 1 for a on [eps, 1 - eps]."""
    _require_grid(grid_n)
    sign = _direction(direction)
    a = _t_grid(grid_n)
    s = h.many(a) + h.many(1.0 - a)
    return _verdict(f"lemma_condition{direction}", sign * (1.0 - s), s, 1.0, (a, 1.0 - a), tol)


def check_lemma_condition_at(
    h: HFamily, alphas: Sequence[float], tol: Tolerance = DEFAULT_TOL, direction: str = "<=1"
) -> CheckVerdict:
    """The lemma condition at the pairs (a_k, 1 - a_k) realized by a data set.

    Endpoint pairs (a_k in {0, 1}) are skipped: there the lemma inequality is
    an identity and h need not be defined at 0. With no interior pair left the
    check is vacuous: it passes with an infinite margin and an empty witness.
    """
    name = f"lemma_condition_realized{direction}"
    sign = _direction(direction)
    a = np.asarray([v for v in alphas if 0.0 < v < 1.0], dtype=float)
    if a.size == 0:
        return CheckVerdict(name, True, math.inf, (), 0, tol.abs, {"note": "no interior pairs"})
    s = h.many(a) + h.many(1.0 - a)
    return _verdict(name, sign * (1.0 - s), s, 1.0, (a, 1.0 - a), tol)


def check_weight_condition(
    h: HFamily, weights: WeightVector | Sequence[float], direction: str = "<=1", tol: Tolerance = DEFAULT_TOL
) -> CheckVerdict:
    """sum_k h(w_k / W_n) against 1."""
    if not isinstance(weights, WeightVector):
        weights = WeightVector(tuple(weights))
    sign = _direction(direction)
    values = [h(v) for v in weights.normalized()]
    s = math.fsum(values)
    margin = sign * (1.0 - s)
    allowance = float(tol.allowance(s, 1.0))
    return CheckVerdict(
        f"weight_condition{direction}",
        margin >= -allowance,
        margin,
        tuple(weights.w),
        1,
        allowance,
        {"sum": s},
    )


def check_h_convex(
    f: ObjectiveSpec,
    h: HFamily,
    interval: tuple[float, float],
    grid_n: int = DEFAULT_GRID_N,
    tol: Tolerance = DEFAULT_TOL,
    sense: str = "convex",
    segment: tuple | None = None,
) -> CheckVerdict:
    """f(t a + (1-t) b) <= h(t) f(a) + h(1-t) f(b) over a (t, a, b) grid.

    Vector-valued ``f`` (a norm on R^d, d > 1) is checked along the line
    ``segment[0] + s * (segment[1] - segment[0])`` with ``s`` on ``interval``.
    """
    a, b = (float(v) for v in interval)
    if not a < b:
        raise ConfigError(f"interval [{a}, {b}] must have a < b", "interval")
    return _check_h_convex_cached(f, h, (a, b), grid_n, tol, sense, segment)


@lru_cache(maxsize=512)
def _check_h_convex_cached(f, h, interval, grid_n, tol, sense, segment) -> CheckVerdict:
    _require_grid(grid_n)
    sign = _sense_sign(sense)
    a, b = interval
    if f.is_vector:
        if segment is None:
            raise ConfigError("vector objectives need a segment to check along", "f")
        p0 = np.asarray(segment[0], dtype=float)
        du = np.asarray(segment[1], dtype=float) - p0

        def fv(s):
            return f.many(p0 + s[..., None] * du)

    else:
        fv = f.many

    t = _t_grid(grid_n)[:, None, None]
    al = np.linspace(a, b, grid_n)
    fa = fv(al)
    if np.any(fa < -tol.abs):
        k = int(np.argmin(fa))
        raise NonNegativityError(f"f({al[k]!r}) = {fa[k]!r} is negative", (float(al[k]),), float(fa[k]))
    mid = t * al[None, :, None] + (1.0 - t) * al[None, None, :]
    fmid = fv(mid.ravel()).reshape(mid.shape)
    if np.any(fmid < -tol.abs):
        k = int(np.argmin(fmid))
        raise NonNegativityError(f"f({mid.flat[k]!r}) = {fmid.flat[k]!r} is negative", (float(mid.flat[k]),), float(fmid.flat[k]))
    ht = h.many(t)
    h1t = h.many(1.0 - t)
    bound = ht * fa[None, :, None] + h1t * fa[None, None, :]
    margin = sign * (bound - fmid)
    return _verdict(
        "h_convex" if sign > 0 else "h_concave",
        margin,
        fmid,
        bound,
        (t, al[None, :, None], al[None, None, :]),
        tol,
    )


def certify(
    f: ObjectiveSpec,
    h: HFamily,
    interval: tuple[float, float] | None,
    weights: WeightVector | None = None,
    *,
    sense: str = "convex",
    grid_n: int = DEFAULT_GRID_N,
    tol: Tolerance = DEFAULT_TOL,
    alphas: Sequence[float] | None = None,
    segment: tuple | None = None,
) -> list[CheckVerdict]:
    """Every hypothesis of the h-Mercer theorem for one scenario, in a fixed order.

    A negative ``f`` shows up as a failed ``f_nonnegative`` verdict rather than
    an exception. ``interval=None`` skips the h-convexity check (degenerate data).
    """
    direction = direction_for(sense)
    out = [check_h_nonnegative(h, grid_n, tol)]
    if sense == "convex":
        out.append(check_supermultiplicative(h, grid_n, tol))
    else:
        out.append(check_submultiplicative(h, grid_n, tol))
    out.append(check_lemma_condition(h, grid_n, tol, direction))
    if alphas is not None:
        out.append(check_lemma_condition_at(h, alphas, tol, direction))
    if weights is not None:
        out.append(check_weight_condition(h, weights, direction, tol))
    if interval is not None:
        try:
            out.append(check_h_convex(f, h, interval, grid_n, tol, sense, segment))
        except NonNegativityError as exc:
            out.append(CheckVerdict("f_nonnegative", False, exc.value, exc.witness, grid_n, tol.abs, {"reason": str(exc)}))
    return out
