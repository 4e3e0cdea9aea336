"""Relaxed-hypothesis search over the power family h(t) = t^s.

For each exponent s and objective f, hill-climb for the most negative
h-Mercer gap on [0.5, 5] and report which hypotheses the witness breaks.
Violations should only ever appear where some check fails.
"""

import argparse

from hmercer.hclass import HFamily
from hmercer.objective import ObjectiveSpec
from hmercer.search import SearchConfig, search_max_violation
from hmercer.report import fmt


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--budget", type=int, default=3000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--n", type=int, default=3)
    args = ap.parse_args()

    objectives = ["x^2", "sqrt(x)", "exp(x/2)", "abs(x - 2)"]
    print(f"{'f':>12} {'s':>5} {'best_gap':>24}  failed checks")
    for spec in objectives:
        for s in (0.25, 0.5, 1.0, 2.0):
            cfg = SearchConfig(
                target="mercer_h",
                f=ObjectiveSpec.expression(spec),
                h=HFamily.power(s),
                interval=(0.5, 5.0),
                n=args.n,
                budget=args.budget,
                seed=args.seed,
                grid_n=16,
            )
            res = search_max_violation(cfg)
            failed = [v.name for v in res.hypothesis_verdicts if not v.passed]
            print(f"{spec:>12} {s:>5} {fmt(res.best_gap):>24}  {', '.join(failed) or '-'}")


if __name__ == "__main__":
    main()
