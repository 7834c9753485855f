"""Sample real discriminants over F_q (q = 2 mod 3) and tally how often the
unusual dual has the larger 3-rank.

    python scripts/escalatory_pairs.py --q 5 --deg 6 --count 200
"""

import argparse
import random
from collections import Counter

from threerank.algebra import FieldCtx, Poly, is_squarefree
from threerank.oracle import dual_check


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--q", type=int, default=5)
    ap.add_argument("--deg", type=int, default=6)
    ap.add_argument("--count", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    if args.q % 3 != 2 or args.deg % 2:
        ap.error("needs q = 2 mod 3 and an even degree")

    ctx = FieldCtx(args.q)
    rng = random.Random(args.seed)
    tally = Counter()
    done = 0
    while done < args.count:
        D = Poly(args.q, [rng.randrange(args.q) for _ in range(args.deg)] + [1])
        if not is_squarefree(D):
            continue
        res = dual_check(ctx, D)
        tally[res["r_real"], res["r_unusual"], res["classification"]] += 1
        done += 1
    for (r, r2, kind), k in sorted(tally.items()):
        print(f"r_real={r} r_unusual={r2} {kind}: {k}")


if __name__ == "__main__":
    main()
