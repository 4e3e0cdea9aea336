"""Falsification search and an exhaustive small-grid oracle.

:func:`search_max_violation` runs random-restart coordinate hill climbing
over (weights, points) to drive an inequality's gap as low as possible.
With hypotheses relaxed that hunts for counterexamples; with hypotheses
enforced it measures how tight the inequality is.

:func:`brute_force_oracle` enumerates every sorted point tuple and weight
tuple on a coarse grid and recomputes each inequality from its formula,
without going through :mod:`hmercer.ineq`, then cross-checks the engine.
"""

from __future__ import annotations

import itertools
import math
import random
from fractions import Fraction
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .errors import ConfigError, HMercerError
from .hclass import DEFAULT_GRID_N, DEFAULT_TOL, CheckVerdict, HFamily, Tolerance
from .ineq import (
    INEQUALITIES,
    InequalityReport,
    converse_jensen,
    jensen_h,
    lemma_pointwise,
    mercer_classical,
    mercer_h,
    triangle_refinement,
)
from .objective import ObjectiveSpec
from .sequences import SampleSequence, WeightVector

W_MIN = 1e-3
SIGMA0 = 0.1
SIGMA_MIN = 1e-9

ORACLE_MAX_N = 4
ORACLE_MAX_GRID = 9
ORACLE_TARGETS = ("jensen_h", "mercer_classical", "lemma_pointwise", "mercer_h", "converse_jensen")


@dataclass(frozen=True)
class SearchConfig:
    target: str
    f: ObjectiveSpec
    h: HFamily
    interval: tuple[float, float]
    n: int = 2
    d: int = 1
    enforce_hypotheses: bool = False
    budget: int = 5000
    restarts: int = 4
    seed: int = 0
    step_decay: float = 0.5
    sense: str = "convex"
    p: float = 2.0
    tol: Tolerance = DEFAULT_TOL
    grid_n: int = DEFAULT_GRID_N
    workers: int = 1

    def __post_init__(self):
        if self.target not in INEQUALITIES:
            raise ConfigError(f"unknown target {self.target!r}; choose from {', '.join(INEQUALITIES)}", "target")
        if self.n < 2:
            raise ConfigError(f"n must be >= 2, got {self.n}", "n")
        if self.d < 1:
            raise ConfigError(f"d must be >= 1, got {self.d}", "d")
        a, b = self.interval
        if not 0 < a < b:
            raise ConfigError(f"need 0 < a < b, got [{a}, {b}]", "interval")
        if not 1 <= self.restarts <= self.budget:
            raise ConfigError(f"budget must be >= restarts >= 1 (budget={self.budget}, restarts={self.restarts})", "budget")
        if not 0 < self.step_decay < 1:
            raise ConfigError(f"step_decay must lie in (0, 1), got {self.step_decay}", "step_decay")
        if self.sense not in ("convex", "concave"):
            raise ConfigError(f"sense must be convex or concave, got {self.sense!r}", "sense")
        if self.d > 1 and self.target != "triangle_refinement" and not self.f.is_vector:
            raise ConfigError("d > 1 needs a norm objective with matching d", "f")

    @property
    def vector_mode(self) -> bool:
        return self.d > 1


@dataclass
class SearchResult:
    best_gap: float
    best_scenario: dict | None
    evaluations_used: int
    hypothesis_verdicts: tuple[CheckVerdict, ...] = ()
    report: InequalityReport | None = None
    per_restart: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "best_gap": self.best_gap,
            "best_scenario": self.best_scenario,
            "evaluations_used": self.evaluations_used,
            "hypothesis_verdicts": [v.to_dict() for v in self.hypothesis_verdicts],
            "report": self.report.to_dict() if self.report else None,
            "per_restart": self.per_restart,
        }


# ---------------------------------------------------------------------------
# scenario encoding


def _bounds(cfg: SearchConfig) -> list[tuple[float, float]]:
    a, b = cfg.interval
    lw = (math.log(W_MIN), 0.0)
    if cfg.vector_mode:
        return [(a, b)] * (2 * cfg.d) + [(0.0, 1.0)] * (cfg.n - 2) + [lw] * cfg.n
    return [(a, b)] * cfg.n + [lw] * cfg.n


def _decode(cfg: SearchConfig, theta: list[float]) -> dict:
    n, d = cfg.n, cfg.d
    logw = theta[-n:]
    if cfg.vector_mode:
        x1 = theta[:d]
        xn = theta[d : 2 * d]
        ts = [0.0] + sorted(theta[2 * d : 2 * d + n - 2]) + [1.0]
        points = [[p + t * (q - p) for p, q in zip(x1, xn)] for t in ts]
        # endpoints exactly as sampled
        points[0], points[-1] = list(x1), list(xn)
        weights = [math.exp(v) for v in logw]
    else:
        pairs = sorted(zip(theta[:n], logw))
        points = [p for p, _ in pairs]
        weights = [math.exp(v) for _, v in pairs]
    return {"weights": weights, "points": points}


def evaluate_target(cfg: SearchConfig, scenario: dict, check_hypotheses: bool = True) -> InequalityReport:
    """Evaluate ``cfg.target`` on a scenario dict. lemma_pointwise reports its worst k."""
    w = WeightVector(tuple(scenario["weights"]))
    pts = scenario["points"]
    x = SampleSequence(tuple(tuple(p) for p in pts) if cfg.vector_mode else tuple(pts), None if cfg.vector_mode else cfg.interval)
    kw = {"grid_n": cfg.grid_n, "check_hypotheses": check_hypotheses}
    t = cfg.target
    if t == "jensen_h":
        return jensen_h(cfg.f, cfg.h, w, x, cfg.tol, sense=cfg.sense, **kw)
    if t == "mercer_classical":
        return mercer_classical(cfg.f, w, x, cfg.tol, **kw)
    if t == "mercer_h":
        return mercer_h(cfg.f, cfg.h, w, x, cfg.tol, cfg.sense, **kw)
    if t == "converse_jensen":
        return converse_jensen(cfg.f, cfg.h, w, x, cfg.tol, cfg.sense, **kw)
    if t == "triangle_refinement":
        p = cfg.f.p if cfg.f.is_norm else cfg.p
        return triangle_refinement(w, x, p, cfg.tol, **kw)
    k = scenario.get("k")
    if k is not None:
        return lemma_pointwise(cfg.f, x, k, cfg.tol, h=cfg.h, sense=cfg.sense, **kw)
    reports = [lemma_pointwise(cfg.f, x, j, cfg.tol, h=cfg.h, sense=cfg.sense, check_hypotheses=False, grid_n=cfg.grid_n)
               for j in range(1, len(x) + 1)]
    j = min(range(len(reports)), key=lambda i: (reports[i].gap, i)) + 1
    scenario["k"] = j
    return lemma_pointwise(cfg.f, x, j, cfg.tol, h=cfg.h, sense=cfg.sense, **kw) if check_hypotheses else reports[j - 1]


def replay(cfg: SearchConfig, scenario: dict) -> InequalityReport:
    return evaluate_target(cfg, dict(scenario), check_hypotheses=True)


def _score(cfg: SearchConfig, theta: list[float]) -> tuple[float, dict] | None:
    """Gap of the decoded scenario, or None if rejected (out of domain, or failing hypotheses)."""
    scenario = _decode(cfg, theta)
    try:
        rep = evaluate_target(cfg, scenario, check_hypotheses=cfg.enforce_hypotheses)
    except (HMercerError, OverflowError, ZeroDivisionError):
        return None
    if cfg.enforce_hypotheses and not rep.hypotheses_passed:
        return None
    return rep.gap, scenario


# ---------------------------------------------------------------------------
# hill climbing


def _restart_budget(cfg: SearchConfig, idx: int) -> int:
    q, r = divmod(cfg.budget, cfg.restarts)
    return q + (1 if idx < r else 0)


def _run_restart(cfg: SearchConfig, idx: int) -> dict:
    rng = random.Random(cfg.seed + idx)
    bounds = _bounds(cfg)
    budget = _restart_budget(cfg, idx)
    used = 0
    best_gap, best_scenario = math.inf, None

    def clip(i, v):
        lo, hi = bounds[i]
        return min(max(v, lo), hi)

    while used < budget:
        theta = [rng.uniform(lo, hi) for lo, hi in bounds]
        used += 1
        scored = _score(cfg, theta)
        if scored is None:
            continue
        gap, scenario = scored
        if gap < best_gap:
            best_gap, best_scenario = gap, scenario
        sigma = SIGMA0
        while used < budget and sigma > SIGMA_MIN:
            improved = False
            for i in range(len(theta)):
                span = bounds[i][1] - bounds[i][0]
                for sign in (1.0, -1.0):
                    if used >= budget:
                        break
                    cand = list(theta)
                    cand[i] = clip(i, theta[i] + sign * sigma * span)
                    if cand[i] == theta[i]:
                        continue
                    used += 1
                    scored = _score(cfg, cand)
                    if scored is not None and scored[0] < gap:
                        theta, (gap, scenario) = cand, scored
                        improved = True
                        if gap < best_gap:
                            best_gap, best_scenario = gap, scenario
                        break
            if not improved:
                sigma *= cfg.step_decay
    return {"restart": idx, "best_gap": best_gap, "scenario": best_scenario, "evaluations": used}


def _run_restart_star(args):
    return _run_restart(*args)


def search_max_violation(cfg: SearchConfig) -> SearchResult:
    """Minimize the target's gap. Deterministic for a fixed config, whatever ``workers`` is."""
    jobs = [(cfg, i) for i in range(cfg.restarts)]
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            runs = list(pool.map(_run_restart_star, jobs))
    else:
        runs = [_run_restart(c, i) for c, i in jobs]
    runs.sort(key=lambda r: r["restart"])
    used = sum(r["evaluations"] for r in runs)
    winner = min(runs, key=lambda r: (r["best_gap"], r["restart"]))
    summary = [{"restart": r["restart"], "best_gap": r["best_gap"], "evaluations": r["evaluations"]} for r in runs]
    if winner["scenario"] is None:
        return SearchResult(math.inf, None, used, (), None, summary)
    scenario = dict(winner["scenario"])
    report = replay(cfg, scenario)
    return SearchResult(winner["best_gap"], scenario, used, report.hypothesis_verdicts, report, summary)


# ---------------------------------------------------------------------------
# brute-force oracle


def _exact_h(h: HFamily, q: Fraction) -> Fraction:
    if h.variant == "identity":
        return q
    if h.variant == "reciprocal":
        return 1 / q
    if h.variant == "constant":
        return Fraction(h.param)
    return Fraction(h(float(q)))


def _oracle_gap(target, f, h, w, x, k=None):
    """(lhs, rhs) straight from the formulas as exact rationals over the float samples of f and h.

    Only f's arguments and f, h values are rounded; every sum is exact, so a
    gap that is zero in exact arithmetic comes out as exactly zero.
    """
    F = lambda q: Fraction(f(float(q)))  # noqa: E731
    n = len(x)
    xq = [Fraction(v) for v in x]
    x1, xn = xq[0], xq[n - 1]
    if target == "lemma_pointwise":
        return F(x1 + xn - xq[k]), F(x1) + F(xn) - F(xq[k])
    W = sum(w)
    mean = sum(wi * xi for wi, xi in zip(w, xq)) / W
    if target == "jensen_h":
        return F(mean), sum(_exact_h(h, wi / W) * F(xi) for wi, xi in zip(w, xq))
    if target == "mercer_classical":
        return F(x1 + xn - mean), F(x1) + F(xn) - sum(wi * F(xi) for wi, xi in zip(w, xq)) / W
    hsum = sum(_exact_h(h, wi / W) * F(xi) for wi, xi in zip(w, xq))
    if target == "mercer_h":
        return F(x1 + xn - mean), F(x1) + F(xn) - hsum
    return hsum, F(x1) + F(xn) - F(x1 + xn - mean)


def brute_force_oracle(
    target: str,
    f: ObjectiveSpec,
    h: HFamily,
    n: int,
    grid_m: int,
    interval: tuple[float, float],
    tol: Tolerance = DEFAULT_TOL,
    *,
    sense: str = "convex",
    compare_engine: bool = True,
) -> CheckVerdict:
    """Exhaustive check of ``target`` on all sorted n-tuples from an m-point grid on ``interval``.

    Weights range over all n-tuples from {1/m, 2/m, ..., 1}. The witness is
    ``(weights, points)`` (``(k, points)`` for lemma_pointwise).
    """
    if target not in ORACLE_TARGETS:
        raise ConfigError(f"oracle supports {', '.join(ORACLE_TARGETS)}; got {target!r}", "target")
    if not 2 <= n <= ORACLE_MAX_N:
        raise ConfigError(f"n must lie in 2..{ORACLE_MAX_N}, got {n}", "n")
    if not 2 <= grid_m <= ORACLE_MAX_GRID:
        raise ConfigError(f"grid must lie in 2..{ORACLE_MAX_GRID}, got {grid_m}", "grid")
    a, b = (float(v) for v in interval)
    if not 0 < a < b:
        raise ConfigError(f"need 0 < a < b, got [{a}, {b}]", "interval")
    if f.is_vector:
        raise ConfigError("the oracle is scalar-only", "f")
    # classical Mercer has no reversed form
    sign = 1.0 if sense == "convex" or target == "mercer_classical" else -1.0

    grid = [a + (b - a) * i / (grid_m - 1) for i in range(grid_m)]
    wgrid = [Fraction(j, grid_m) for j in range(1, grid_m + 1)]
    if target == "lemma_pointwise":
        second = [(k,) for k in range(n)]
    else:
        second = list(itertools.product(wgrid, repeat=n))

    best_key = math.inf
    best = None
    count = 0
    max_disc = 0.0
    for xs in itertools.combinations_with_replacement(grid, n):
        for extra in second:
            if target == "lemma_pointwise":
                k = extra[0]
                left, right = _oracle_gap(target, f, h, None, xs, k)
                witness = (k + 1, list(xs))
            else:
                left, right = _oracle_gap(target, f, h, extra, xs)
                witness = ([float(v) for v in extra], list(xs))
            lq, rq = (left, right) if sign > 0 else (right, left)
            gap, lhs, rhs = float(rq - lq), float(lq), float(rq)
            allow = float(tol.allowance(lhs, rhs))
            count += 1
            if gap + allow < best_key:
                best_key, best = gap + allow, (gap, allow, witness)
            if compare_engine:
                eng = _engine(target, f, h, extra, xs, tol, sense)
                max_disc = max(max_disc, abs(eng.gap - gap))

    gap, allow, witness = best
    detail = {"instances": count}
    if compare_engine:
        detail["max_engine_discrepancy"] = max_disc
    return CheckVerdict(f"oracle:{target}", gap >= -allow, gap, witness, count, allow, detail)


def _engine(target, f, h, extra, xs, tol, sense):
    x = SampleSequence(tuple(xs))
    if target == "lemma_pointwise":
        return lemma_pointwise(f, x, extra[0] + 1, tol, sense=sense, check_hypotheses=False)
    w = WeightVector(tuple(float(v) for v in extra))
    if target == "jensen_h":
        return jensen_h(f, h, w, x, tol, sense=sense, check_hypotheses=False)
    if target == "mercer_classical":
        return mercer_classical(f, w, x, tol, check_hypotheses=False)
    if target == "mercer_h":
        return mercer_h(f, h, w, x, tol, sense, check_hypotheses=False)
    return converse_jensen(f, h, w, x, tol, sense, check_hypotheses=False)
