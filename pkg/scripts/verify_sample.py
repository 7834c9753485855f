"""Check census ranks against direct class group computations.

Every census key of the given family is a candidate; a random sample of keys
and of squarefree non-keys is sent through the ideal-class oracle, and the
class number is cross-checked against point counts each time.

    python scripts/verify_sample.py --q 7 --n 6 --case unusual --keys 200
"""

import argparse
import random
import time

from threerank.algebra import FieldCtx, Poly, is_squarefree
from threerank.census import rank_from_count
from threerank.oracle import census_model, check_class_number, three_rank
from threerank.search import SearchConfig, run_search


def random_nonkey(rng, ctx, T):
    q, k3 = ctx.q, (-3) % ctx.q
    wanted = {1, ctx.h} if T.case == "imaginary" else {ctx.h}
    lead = [c for c in range(1, q) if c * k3 % q in wanted]
    while True:
        d = rng.choice(T.degrees())
        D = Poly(q, [rng.randrange(q) for _ in range(d)] + [rng.choice(lead)])
        if is_squarefree(D) and D not in T:
            return D


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--q", type=int, default=5)
    ap.add_argument("--n", type=int, default=5)
    ap.add_argument("--case", default="imaginary", choices=["imaginary", "unusual"])
    ap.add_argument("--keys", type=int, default=100)
    ap.add_argument("--nonkeys", type=int, default=50)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    ctx = FieldCtx(args.q)
    rng = random.Random(args.seed)
    T = run_search(SearchConfig(ctx, args.n, args.case))
    keys = [Poly(args.q, k) for k in sorted(T.entries)]
    sample = rng.sample(keys, min(args.keys, len(keys)))
    sample += [random_nonkey(rng, ctx, T) for _ in range(args.nonkeys)]

    t0 = time.time()
    bad = 0
    for D in sample:
        want = rank_from_count(T.count(D)) if D in T else 0
        m = census_model(ctx, D, args.case)
        info = check_class_number(m)
        got = three_rank(m)
        if got != want:
            bad += 1
            print(f"mismatch D={D.pretty()} census={want} oracle={got} h={info['h_jac']}")
    print(f"{len(sample)} discriminants checked, {bad} mismatches, {time.time() - t0:.1f}s")


if __name__ == "__main__":
    main()
