"""Smallest slack of the h-Mercer inequality with all hypotheses enforced.

A best gap near zero means the bound is attained (or approached) inside the
certified region; a clearly positive one means the inequality is loose there.
"""

import argparse

from hmercer.hclass import HFamily
from hmercer.objective import ObjectiveSpec
from hmercer.report import fmt
from hmercer.search import SearchConfig, search_max_violation


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--budget", type=int, default=1500)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    cases = [
        ("x", HFamily.identity()),
        ("x^2", HFamily.identity()),
        ("exp(x)", HFamily.identity()),
        ("x^2", HFamily.power(2.0)),
    ]
    for spec, h in cases:
        for n in (2, 4):
            cfg = SearchConfig(
                target="mercer_h",
                f=ObjectiveSpec.expression(spec),
                h=h,
                interval=(0.5, 3.0),
                n=n,
                budget=args.budget,
                seed=args.seed,
                enforce_hypotheses=True,
                grid_n=16,
            )
            res = search_max_violation(cfg)
            where = res.best_scenario["points"] if res.best_scenario else "no admissible scenario"
            print(f"f={spec:<7} h={h.name:<10} n={n}  best_gap={fmt(res.best_gap):<24} x={where}")


if __name__ == "__main__":
    main()
