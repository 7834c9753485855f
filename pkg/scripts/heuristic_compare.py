"""Per-degree and cumulative 3-rank proportions against the Friedman-Washington
and Malle predictions.

    python scripts/heuristic_compare.py --q 5 --n 8
"""

import argparse

from threerank.algebra import FieldCtx
from threerank.census import distribution
from threerank.heuristics import HeuristicModel, compare, default_model
from threerank.search import SearchConfig, run_search


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--q", type=int, default=5)
    ap.add_argument("--n", type=int, default=7)
    ap.add_argument("--model", choices=["fw", "malle"])
    args = ap.parse_args()

    ctx = FieldCtx(args.q)
    model = HeuristicModel(args.model or default_model(args.q))
    for case in ("imaginary", "unusual"):
        rows = distribution(run_search(SearchConfig(ctx, args.n, case)), ctx)
        for cumulative in (False, True):
            label = "cumulative" if cumulative else "per degree"
            print(f"\nq={args.q} {case} ({label}) vs {model.name}")
            print(f"{'deg':>4} {'r':>2} {'fields':>9} {'of':>9} {'empirical':>10} "
                  f"{'model':>9} {'diff':>9}")
            for c in compare(rows, model, cumulative):
                print(f"{c.degD:>4} {c.rank:>2} {c.num:>9} {c.den:>9} "
                      f"{float(c.empirical):>10.5f} {c.model_prob:>9.5f} {c.diff:>+9.5f}")


if __name__ == "__main__":
    main()
