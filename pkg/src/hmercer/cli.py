"""Command-line front end.

Usage:
    hmercer check --config FILE [options]
    hmercer hypotheses --config FILE [options]
    hmercer search --config FILE [--budget N] [--restarts R] [--seed S] [--enforce-hypotheses]
    hmercer oracle --target NAME --n N --grid M --interval A B --f EXPR --h FAMILY [--h-param P]

Exit codes: 0 all good, 1 an inequality or hypothesis failed (for search and
oracle: a violation was found), 2 configuration or domain error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from . import __version__
from .config import Scenario, load_scenario, parse_h, parse_objective
from .errors import ConfigError, HMercerError
from .hclass import Tolerance, certify
from .ineq import (
    converse_jensen,
    jensen_h,
    lemma_pointwise,
    mercer_classical,
    mercer_h,
    triangle_refinement,
)
from .report import document, dumps, render_text
from .search import ORACLE_TARGETS, SearchConfig, brute_force_oracle, search_max_violation

EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2
ENGINE_AGREEMENT = 1e-12


class UsageError(Exception):
    pass


def _emit(doc: dict, args) -> None:
    text = dumps(doc) if args.format == "machine" else render_text(doc)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _load(args) -> Scenario:
    sc = load_scenario(args.config)
    tol = Tolerance(
        sc.tol.abs if args.tol_abs is None else args.tol_abs,
        sc.tol.rel if args.tol_rel is None else args.tol_rel,
    )
    grid_n = sc.grid_n if args.grid_n is None else args.grid_n
    if grid_n < 2:
        raise ConfigError(f"expected an integer >= 2, got {grid_n}", "grid_n")
    return replace(sc, tol=tol, grid_n=grid_n)


def _require_data(sc: Scenario) -> None:
    if sc.weights is None:
        raise ConfigError("missing", "weights")
    if sc.points is None:
        raise ConfigError("missing", "points")


def _reports(sc: Scenario) -> list:
    _require_data(sc)
    f, h, w, x, tol = sc.f, sc.h, sc.weights, sc.points, sc.tol
    kw = {"grid_n": sc.grid_n}
    out = [jensen_h(f, h, w, x, tol, sense=sc.sense, **kw)]
    if h.variant == "identity" and sc.sense == "convex":
        out.append(mercer_classical(f, w, x, tol, **kw))
    out += [lemma_pointwise(f, x, k, tol, h=h, sense=sc.sense, **kw) for k in range(1, len(x) + 1)]
    out.append(mercer_h(f, h, w, x, tol, sc.sense, **kw))
    out.append(converse_jensen(f, h, w, x, tol, sc.sense, **kw))
    if f.is_norm or (f.kind == "builtin" and f.name == "abs"):
        out.append(triangle_refinement(w, x, f.p if f.is_norm else 2.0, tol, **kw))
    return out


def cmd_check(args) -> int:
    sc = _load(args)
    reports = _reports(sc)
    checks = next(r for r in reports if r.name == "mercer_h").hypothesis_verdicts
    satisfied = all(r.satisfied for r in reports)
    certified = all(r.hypotheses_passed for r in reports)
    status = "ok" if satisfied and certified else "violated" if not satisfied else "hypotheses_not_certified"
    _emit(document("check", sc.echo(), reports, checks, status), args)
    return EXIT_OK if status == "ok" else EXIT_FAIL


def cmd_hypotheses(args) -> int:
    sc = _load(args)
    if sc.weights is not None and sc.points is not None:
        checks = mercer_h(sc.f, sc.h, sc.weights, sc.points, sc.tol, sc.sense, grid_n=sc.grid_n).hypothesis_verdicts
    else:
        if sc.interval is None:
            raise ConfigError("need either interval or weights and points", "interval")
        checks = certify(sc.f, sc.h, sc.interval, sc.weights, sense=sc.sense, grid_n=sc.grid_n, tol=sc.tol)
    ok = all(c.passed for c in checks)
    _emit(document("hypotheses", sc.echo(), (), checks, "ok" if ok else "hypotheses_not_certified"), args)
    return EXIT_OK if ok else EXIT_FAIL


def _search_config(sc: Scenario, args) -> SearchConfig:
    s = dict(sc.search)
    unknown = sorted(set(s) - {"target", "n", "d", "budget", "restarts", "seed", "step_decay", "enforce_hypotheses", "interval", "p", "workers"})
    if unknown:
        raise ConfigError(f"unknown field(s) {', '.join(unknown)}", f"search.{unknown[0]}")
    for key in ("target", "n", "d", "budget", "restarts", "seed", "workers"):
        v = getattr(args, key, None)
        if v is not None:
            s[key] = v
    if args.enforce_hypotheses:
        s["enforce_hypotheses"] = True
    interval = s.pop("interval", None) or sc.interval
    if interval is None and sc.points is not None and not sc.points.is_vector:
        interval = (sc.points.x[0], sc.points.x[-1])
    if interval is None:
        raise ConfigError("missing; set interval or search.interval", "interval")
    n = s.pop("n", len(sc.points) if sc.points is not None else 2)
    d = s.pop("d", sc.f.d if sc.f.is_norm else 1)
    return SearchConfig(
        target=s.pop("target", "mercer_h"),
        f=sc.f,
        h=sc.h,
        interval=tuple(float(v) for v in interval),
        n=int(n),
        d=int(d),
        sense=sc.sense,
        tol=sc.tol,
        grid_n=sc.grid_n,
        **s,
    )


def cmd_search(args) -> int:
    sc = _load(args)
    cfg = _search_config(sc, args)
    result = search_max_violation(cfg)
    violated = result.report is not None and not result.report.satisfied
    reports = [result.report] if result.report is not None else []
    summary = result.to_dict()
    summary.pop("report")
    echo = sc.echo()
    echo["search"] = {
        "target": cfg.target,
        "n": cfg.n,
        "d": cfg.d,
        "interval": list(cfg.interval),
        "budget": cfg.budget,
        "restarts": cfg.restarts,
        "seed": cfg.seed,
        "step_decay": cfg.step_decay,
        "enforce_hypotheses": cfg.enforce_hypotheses,
    }
    doc = document("search", echo, reports, result.hypothesis_verdicts,
                   "violation_found" if violated else "no_violation_found", search=summary)
    _emit(doc, args)
    return EXIT_FAIL if violated else EXIT_OK


def cmd_oracle(args) -> int:
    if args.config:
        sc = _load(args)
        f, h, tol, sense = sc.f, sc.h, sc.tol, sc.sense
        interval = tuple(args.interval) if args.interval else sc.interval
    else:
        if args.f_builtin:
            f = parse_objective({"kind": "builtin", "spec": args.f_builtin})
        elif args.f:
            f = parse_objective({"kind": "expression", "spec": args.f})
        else:
            raise UsageError("oracle needs --f, --f-builtin or --config")
        hraw = {"family": args.h}
        if args.h_param is not None:
            try:
                hraw["param"] = float(args.h_param)
            except ValueError:
                hraw["param"] = args.h_param
        h = parse_h(hraw)
        tol = Tolerance(1e-9 if args.tol_abs is None else args.tol_abs, 1e-9 if args.tol_rel is None else args.tol_rel)
        sense = args.sense
        interval = tuple(args.interval) if args.interval else None
    if interval is None:
        raise ConfigError("missing; pass --interval A B", "interval")
    verdict = brute_force_oracle(args.target, f, h, args.n, args.grid, interval, tol, sense=sense)
    echo = {"target": args.target, "f": f.describe(), "h": h.describe(), "sense": sense,
            "n": args.n, "grid": args.grid, "interval": list(interval),
            "tolerance": {"abs": tol.abs, "rel": tol.rel}}
    disc = verdict.detail.get("max_engine_discrepancy", 0.0)
    if disc > ENGINE_AGREEMENT * max(1.0, abs(verdict.worst_margin)):
        _emit(document("oracle", echo, (), (verdict,), "engine_mismatch"), args)
        print(f"hmercer: error: oracle and engine disagree by {disc!r}", file=sys.stderr)
        return EXIT_ERROR
    _emit(document("oracle", echo, (), (verdict,), "ok" if verdict.passed else "violation_found"), args)
    return EXIT_OK if verdict.passed else EXIT_FAIL


def _common(p: argparse.ArgumentParser, config_required: bool) -> None:
    p.add_argument("--config", required=config_required, metavar="PATH", help="scenario file (TOML)")
    p.add_argument("--format", choices=("text", "machine"), default="text")
    p.add_argument("--output", "-o", metavar="PATH", help="write the report here instead of stdout")
    p.add_argument("--tol-abs", type=float, default=None)
    p.add_argument("--tol-rel", type=float, default=None)
    p.add_argument("--grid-n", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hmercer", description="Certify and test Mercer-type inequalities for h-convex functions.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="evaluate every applicable inequality on a scenario")
    _common(p, True)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("hypotheses", help="run the hypothesis checks only")
    _common(p, True)
    p.set_defaults(func=cmd_hypotheses)

    p = sub.add_parser("search", help="hill-climb for the smallest gap")
    _common(p, True)
    p.add_argument("--target", default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--restarts", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--enforce-hypotheses", action="store_true")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("oracle", help="exhaustive small-grid check")
    _common(p, False)
    p.add_argument("--target", default="mercer_h", choices=ORACLE_TARGETS)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--grid", type=int, default=5)
    p.add_argument("--interval", type=float, nargs=2, metavar=("A", "B"))
    p.add_argument("--f", metavar="EXPR")
    p.add_argument("--f-builtin", metavar="NAME")
    p.add_argument("--h", default="identity", metavar="FAMILY")
    p.add_argument("--h-param", default=None)
    p.add_argument("--sense", choices=("convex", "concave"), default="convex")
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_OK
    where = f"{args.config}: " if getattr(args, "config", None) else ""
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"hmercer: error: {where}{exc}", file=sys.stderr)
    except (HMercerError, OverflowError, UsageError, IndexError) as exc:
        print(f"hmercer: error: {where}{exc}", file=sys.stderr)
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
