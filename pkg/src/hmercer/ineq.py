"""Evaluators for the Jensen and Mercer type inequalities.

Each evaluator returns an :class:`InequalityReport` with ``gap = rhs - lhs``;
a non-negative gap means the inequality holds. Weights are normalized to
``w_k / W_n`` internally and (w_k, x_k) pairs are sorted jointly by x_k, so
callers may pass them in any order. Hypothesis verdicts are attached but never
short-circuit the numbers: lhs and rhs are computed even when a hypothesis
fails.

With ``sense="concave"`` the reversed inequality is evaluated; lhs and rhs
then swap roles so that ``gap >= 0`` still means "holds".

Scalar sums go through :func:`math.fsum`, which makes every sum independent
of summation order and keeps linear ``f`` equality cases exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .hclass import (
    DEFAULT_GRID_N,
    DEFAULT_TOL,
    CheckVerdict,
    HFamily,
    Tolerance,
    certify,
    check_h_convex,
)
from .objective import ObjectiveSpec
from .sequences import SampleSequence, WeightVector, sort_pairs

INEQUALITIES = (
    "jensen_h",
    "mercer_classical",
    "lemma_pointwise",
    "mercer_h",
    "converse_jensen",
    "triangle_refinement",
)

_IDENTITY = HFamily.identity()


@dataclass(frozen=True)
class InequalityReport:
    name: str
    lhs: float
    rhs: float
    gap: float
    satisfied: bool
    tolerance: float
    sense: str = "convex"
    hypothesis_verdicts: tuple[CheckVerdict, ...] = ()
    mercer_point: float | tuple | None = None
    extra: dict = field(default_factory=dict, compare=False)

    @property
    def hypotheses_passed(self) -> bool:
        return all(v.passed for v in self.hypothesis_verdicts)

    def to_dict(self) -> dict:
        out = {
            "name": self.name,
            "sense": self.sense,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "gap": self.gap,
            "satisfied": self.satisfied,
            "tolerance": self.tolerance,
        }
        if self.mercer_point is not None:
            mp = self.mercer_point
            out["mercer_point"] = list(mp) if isinstance(mp, tuple) else mp
        if self.extra:
            out["extra"] = self.extra
        out["hypothesis_verdicts"] = [v.to_dict() for v in self.hypothesis_verdicts]
        return out


def _report(name, left, right, sense, tol, verdicts=(), mercer_point=None, extra=None, gap=None) -> InequalityReport:
    lhs, rhs = (left, right) if sense == "convex" else (right, left)
    if gap is None:
        gap = rhs - lhs
    elif sense != "convex":
        gap = -gap
    allowance = float(tol.allowance(lhs, rhs))
    return InequalityReport(
        name, lhs, rhs, gap, gap >= -allowance, allowance, sense, tuple(verdicts), mercer_point, extra or {}
    )


# ---------------------------------------------------------------------------
# shared preparation


@dataclass(frozen=True)
class _Data:
    w: WeightVector
    x: SampleSequence
    wn: tuple[float, ...]
    pts: list  # floats, or numpy rows in vector mode
    fx: list[float]
    first: object
    last: object


def _prepare(f: ObjectiveSpec, w: WeightVector, x: SampleSequence, positive: bool) -> _Data:
    if len(w) != len(x):
        raise DomainError(f"{len(w)} weights but {len(x)} points")
    w, x = sort_pairs(w, x)
    if x.is_vector:
        if not f.is_norm:
            raise DomainError("vector samples need a norm objective")
        pts = list(x.array())
    else:
        if positive and x.x[0] <= 0.0:
            raise DomainError(f"samples must be positive, got x_1 = {x.x[0]!r}")
        pts = list(x.x)
    fx = [f(p) for p in pts]
    return _Data(w, x, w.normalized(), pts, fx, pts[0], pts[-1])


def _wsum(coeffs, pts):
    """sum_k c_k p_k for scalar or vector p_k, correctly rounded per component."""
    if isinstance(pts[0], np.ndarray):
        stacked = np.asarray(pts)
        return np.array([math.fsum(c * v for c, v in zip(coeffs, col)) for col in stacked.T])
    return math.fsum(c * p for c, p in zip(coeffs, pts))


def _as_point(p):
    return tuple(float(v) for v in p) if isinstance(p, np.ndarray) else float(p)


def _hconvex_window(d: _Data):
    """Interval (and segment for vectors) on which to certify h-convexity of f."""
    if d.x.is_vector:
        if np.array_equal(d.first, d.last):
            return None, None
        return (0.0, 1.0), (_as_point(d.first), _as_point(d.last))
    if d.x.interval is not None and d.x.interval[0] < d.x.interval[1]:
        return d.x.interval, None
    if d.first < d.last:
        return (d.first, d.last), None
    return None, None


def _alphas(d: _Data) -> list[float]:
    """alpha_k with x_k = alpha_k x_1 + (1 - alpha_k) x_n."""
    t = d.x.positions()
    if d.x.is_vector:
        return [1.0 - v for v in t]
    x1, xn = d.first, d.last
    if xn == x1:
        return [0.5] * len(t)
    return [(xn - v) / (xn - x1) for v in t]


def _certify(d, f, h, sense, grid_n, tol, weights=True, alphas=False, full=True):
    interval, segment = _hconvex_window(d)
    if not full:
        # h-convexity only (classical statements)
        if interval is None:
            return []
        return [check_h_convex(f, h, interval, grid_n, tol, sense, segment)]
    return certify(
        f,
        h,
        interval,
        d.w if weights else None,
        sense=sense,
        grid_n=grid_n,
        tol=tol,
        alphas=_alphas(d) if alphas is True else (alphas or None),
        segment=segment,
    )


# ---------------------------------------------------------------------------
# evaluators


def jensen_h(
    f: ObjectiveSpec,
    h: HFamily,
    w: WeightVector,
    x: SampleSequence,
    tol: Tolerance = DEFAULT_TOL,
    *,
    sense: str = "convex",
    grid_n: int = DEFAULT_GRID_N,
    check_hypotheses: bool = True,
) -> InequalityReport:
    """f(sum w_k x_k / W_n) <= sum h(w_k / W_n) f(x_k)."""
    d = _prepare(f, w, x, positive=False)
    mean = _wsum(d.wn, d.pts)
    hw = [h(v) for v in d.wn]
    left = f(mean)
    right = math.fsum(c * v for c, v in zip(hw, d.fx))
    verdicts = []
    if check_hypotheses:
        verdicts = _certify(d, f, h, sense, grid_n, tol, weights=False)
        # the lemma condition is not a Jensen hypothesis
        verdicts = [v for v in verdicts if not v.name.startswith("lemma_condition")]
    return _report("jensen_h", left, right, sense, tol, verdicts, extra={"weighted_mean": _as_point(mean)})


def mercer_classical(
    f: ObjectiveSpec,
    w: WeightVector,
    x: SampleSequence,
    tol: Tolerance = DEFAULT_TOL,
    *,
    grid_n: int = DEFAULT_GRID_N,
    check_hypotheses: bool = True,
) -> InequalityReport:
    """f(x_1 + x_n - sum w_k x_k) <= f(x_1) + f(x_n) - sum w_k f(x_k), weights summing to 1.

    Classical Mercer only needs every x_k in [x_1, x_n]; pairs are sorted
    first, which guarantees that.
    """
    d = _prepare(f, w, x, positive=True)
    mean = _wsum(d.wn, d.pts)
    point = (d.first + d.last) - mean
    left = f(point)
    right = (d.fx[0] + d.fx[-1]) - math.fsum(c * v for c, v in zip(d.wn, d.fx))
    verdicts = _certify(d, f, _IDENTITY, "convex", grid_n, tol, full=False) if check_hypotheses else []
    return _report("mercer_classical", left, right, "convex", tol, verdicts, _as_point(point))


def lemma_pointwise(
    f: ObjectiveSpec,
    x: SampleSequence,
    k: int,
    tol: Tolerance = DEFAULT_TOL,
    *,
    h: HFamily | None = None,
    sense: str = "convex",
    grid_n: int = DEFAULT_GRID_N,
    check_hypotheses: bool = True,
) -> InequalityReport:
    """f(x_1 + x_n - x_k) <= f(x_1) + f(x_n) - f(x_k) for 1-based ``k`` in sorted order.

    Also reports the midpoint pairing ``y_k = x_1 + x_n - x_k`` and the split
    ``x_k = alpha_k x_1 + beta_k x_n``; ``alpha_k = 1/2`` when ``x_1 = x_n``.
    """
    n = len(x)
    if not 1 <= k <= n:
        raise IndexError(f"k = {k} out of range 1..{n}")
    # the lemma carries no weights; uniform ones only drive the sorting
    w = WeightVector((1.0,) * n)
    d = _prepare(f, w, x, positive=True)
    xk = d.pts[k - 1]
    y = (d.first + d.last) - xk
    left = f(y)
    right = (d.fx[0] + d.fx[-1]) - d.fx[k - 1]
    alpha = _alphas(d)[k - 1]
    beta = 1.0 - alpha
    verdicts = []
    if check_hypotheses:
        hh = h if h is not None else _IDENTITY
        verdicts = _certify(d, f, hh, sense, grid_n, tol, weights=False, alphas=[alpha])
    extra = {"k": k, "y_k": _as_point(y), "alpha_k": alpha, "beta_k": beta}
    return _report("lemma_pointwise", left, right, sense, tol, verdicts, extra=extra)


def _mercer_terms(f, h, d: _Data):
    mean = _wsum(d.wn, d.pts)
    point = (d.first + d.last) - mean
    f_point = f(point)
    hw = [h(v) for v in d.wn]
    s = math.fsum(c * v for c, v in zip(hw, d.fx))
    ends = d.fx[0] + d.fx[-1]
    return point, f_point, s, ends, hw


def mercer_h(
    f: ObjectiveSpec,
    h: HFamily,
    w: WeightVector,
    x: SampleSequence,
    tol: Tolerance = DEFAULT_TOL,
    sense: str = "convex",
    *,
    grid_n: int = DEFAULT_GRID_N,
    check_hypotheses: bool = True,
) -> InequalityReport:
    """f(x_1 + x_n - sum w_k x_k / W_n) <= f(x_1) + f(x_n) - sum h(w_k / W_n) f(x_k)."""
    d = _prepare(f, w, x, positive=True)
    point, f_point, s, ends, hw = _mercer_terms(f, h, d)
    verdicts = _certify(d, f, h, sense, grid_n, tol, alphas=True) if check_hypotheses else []
    return _report(
        "mercer_h", f_point, ends - s, sense, tol, verdicts, _as_point(point), {"h_weight_sum": math.fsum(hw)}
    )


def converse_jensen(
    f: ObjectiveSpec,
    h: HFamily,
    w: WeightVector,
    x: SampleSequence,
    tol: Tolerance = DEFAULT_TOL,
    sense: str = "convex",
    *,
    grid_n: int = DEFAULT_GRID_N,
    check_hypotheses: bool = True,
) -> InequalityReport:
    """sum h(w_k / W_n) f(x_k) <= f(x_1) + f(x_n) - f(x_1 + x_n - sum w_k x_k / W_n).

    ``gap`` is evaluated in mercer_h's grouping, so it equals mercer_h's gap
    exactly; ``rhs - lhs`` agrees with it up to rounding.
    """
    d = _prepare(f, w, x, positive=True)
    point, f_point, s, ends, hw = _mercer_terms(f, h, d)
    verdicts = _certify(d, f, h, sense, grid_n, tol, alphas=True) if check_hypotheses else []
    # same terms as mercer_h, rearranged; share its rounding so the gaps agree bit for bit
    return _report(
        "converse_jensen",
        s,
        ends - f_point,
        sense,
        tol,
        verdicts,
        _as_point(point),
        {"h_weight_sum": math.fsum(hw)},
        gap=(ends - s) - f_point,
    )


def triangle_refinement(
    w: WeightVector,
    x: SampleSequence,
    p: float = 2.0,
    tol: Tolerance = DEFAULT_TOL,
    *,
    grid_n: int = DEFAULT_GRID_N,
    check_hypotheses: bool = True,
) -> InequalityReport:
    """sum w_k |x_k| <= |x_1| + |x_n| - |x_1 + x_n - sum w_k x_k| (weights summing to 1).

    Vector samples use the p-norm; scalars use the absolute value. The plain
    triangle inequality ``|sum w_k x_k| <= sum w_k |x_k|`` is reported in
    ``extra`` for comparison.
    """
    if not p >= 1.0:
        raise DomainError(f"p must be >= 1, got {p!r}")
    f = ObjectiveSpec.norm(p, x.dim)
    d = _prepare(f, w, x, positive=False)
    mean = _wsum(d.wn, d.pts)
    point = (d.first + d.last) - mean
    left = math.fsum(c * v for c, v in zip(d.wn, d.fx))
    right = (d.fx[0] + d.fx[-1]) - f(point)
    norm_mean = f(mean)
    extra = {
        "p": p if math.isfinite(p) else "inf",
        "plain_lhs": norm_mean,
        "plain_rhs": left,
        "plain_gap": left - norm_mean,
    }
    verdicts = _certify(d, f, _IDENTITY, "convex", grid_n, tol, full=False) if check_hypotheses else []
    return _report("triangle_refinement", left, right, "convex", tol, verdicts, _as_point(point), extra)
