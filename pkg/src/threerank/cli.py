"""Command line front end: tabulate, verify, stats, minima, dualcheck,
heuristic-table.

Exit codes: 0 success, 1 verification mismatch, 2 usage or config error.
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import random
import sys
import tempfile
from dataclasses import dataclass
from pathlib import Path

from .algebra import DomainError, FieldCtx, Poly, inv_mod, is_squarefree, parse_poly
from .census import (CensusError, CensusTable, census_csv, distribution,
                     minima, parse_census, rank_from_count, summary_csv, CENSUS_HEADER)
from .heuristics import HeuristicModel, compare, heuristic_table, sig_round, stats_csv
from .oracle import (BudgetExceeded, census_model, check_class_number, dual_check,
                     three_rank)
from .search import SearchConfig, run_search

SUPPORTED_Q = (5, 7, 11, 13)
EXIT_OK, EXIT_MISMATCH, EXIT_USAGE = 0, 1, 2

# (q, case) -> [(rank, minimal genus, example D)] from the published minima
MINIMA_EXAMPLES = {
    (5, "imaginary"): [(3, 4, "t^9 + 2t^6 + 2t^3 + 3")],
    (7, "imaginary"): [(3, 3, "6t^7 + t^6 + 2t^2 + 3t + 2"),
                       (4, 4, "6t^9 + 3t^8 + 4t^7 + 4t^4 + 6t^3 + 3t^2 + 2t + 2")],
    (11, "imaginary"): [(3, 3, "7t^7 + 5t^6 + 9t^5 + 6t^4 + 5t^3 + 9t^2 + 5t + 6")],
    (13, "imaginary"): [(3, 2, "4t^5 + t^3 + 6t^2 + 4"),
                        (4, 3, "4t^7 + t^6 + 9t^5 + 7t^4 + 12t^3 + 5t^2 + 3t + 1")],
    (5, "unusual"): [(3, 4, "2t^10 + 4t^9 + 2t^8 + 3t^7 + 4t^6 + t^5 + t^4 + 3t^3 + t^2 + 2t")],
    (7, "unusual"): [(3, 3, "6t^8 + 2t^6 + 3t^2 + t + 5")],
}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    q: int = 5
    h: int | None = None
    deg_max: int | None = None
    case: str = "both"
    threads: int = 1
    seed: int = 0
    out: Path = Path(".")
    budget: int = 10 ** 6
    sample: int = 50

    def __post_init__(self):
        if self.q not in SUPPORTED_Q:
            raise UsageError(f"q must be one of {SUPPORTED_Q}")
        if self.deg_max is not None and self.deg_max < 3:
            raise UsageError("deg-max must be >= 3")
        if self.threads < 1:
            raise UsageError("threads must be >= 1")
        if self.case not in ("imaginary", "unusual", "both"):
            raise UsageError("case must be imaginary, unusual or both")
        try:
            self.ctx = FieldCtx(self.q, self.h or 0)
        except ValueError as e:
            raise UsageError(str(e))

    @property
    def cases(self) -> list[str]:
        return ["imaginary", "unusual"] if self.case == "both" else [self.case]

    def degree_bound(self, case: str) -> int:
        if self.deg_max is None:
            raise UsageError("--deg-max is required")
        n = self.deg_max
        return n if (n % 2 == 1) == (case == "imaginary") else n - 1


def write_atomic(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", newline="") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def census_text(tables: list[CensusTable]) -> str:
    parts = [census_csv(t) for t in tables]
    head = ",".join(CENSUS_HEADER) + "\n"
    return head + "".join(p[len(head):] for p in parts)


def load_census(path: str) -> list[CensusTable]:
    try:
        text = Path(path).read_text()
        return parse_census(text)
    except (OSError, CensusError, ValueError) as e:
        raise UsageError(f"cannot read census {path}: {e}")


# -- commands ---------------------------------------------------------------

def cmd_tabulate(cfg: RunConfig, progress: bool = False) -> list[CensusTable]:
    tables = []
    for case in cfg.cases:
        n = cfg.degree_bound(case)
        sc = SearchConfig(cfg.ctx, n, case, workers=cfg.threads, progress=progress)
        tables.append(run_search(sc))
    rows = [r for t in tables for r in distribution(t, cfg.ctx)]
    write_atomic(cfg.out / f"census_q{cfg.q}.csv", census_text(tables))
    write_atomic(cfg.out / f"summary_q{cfg.q}.csv", summary_csv(rows))
    print(summary_csv(rows), end="")
    return tables


VERIFY_HEADER = ["q", "case", "D", "census_rank", "oracle_rank", "h_ideal", "h_jac", "status"]


def _random_nonkey(rng: random.Random, ctx: FieldCtx, table: CensusTable) -> Poly:
    q, k3 = ctx.q, (-3) % ctx.q
    wanted = {1, ctx.h} if table.case == "imaginary" else {ctx.h}
    lead = [c for c in range(1, q) if c * k3 % q in wanted]
    degs = table.degrees()
    while True:
        n = rng.choice(degs)
        D = Poly(q, [rng.randrange(q) for _ in range(n)] + [rng.choice(lead)])
        if is_squarefree(D) and D not in table:
            return D


def verify_one(ctx: FieldCtx, D: Poly, case: str, census_rank: int, budget: int) -> list:
    model = census_model(ctx, D, case, budget)
    info = check_class_number(model)
    r = three_rank(model)
    return [ctx.q, case, D.text(), census_rank, r, info["h_ideal"], info["h_jac"],
            "ok" if r == census_rank else "mismatch"]


def cmd_verify(cfg: RunConfig, census_path: str, verify_all: bool = False,
               probes: list[str] = ()) -> int:
    tables = load_census(census_path)
    rng = random.Random(cfg.seed)
    rows = []
    for t in tables:
        if t.q != cfg.q:
            raise UsageError(f"census is for q={t.q}, not {cfg.q}")
        if cfg.case != "both" and t.case != cfg.case:
            continue
        ctx = FieldCtx(t.q, t.h)
        keys = [k for k, _ in t.sorted_items()]
        if not verify_all:
            keys = rng.sample(keys, min(cfg.sample, len(keys)))
        jobs = [(Poly(t.q, k), rank_from_count(t.count(k))) for k in keys]
        n_probe = len(t) if verify_all else cfg.sample // 2
        jobs += [(_random_nonkey(rng, ctx, t), 0) for _ in range(n_probe)]
        for D, cr in jobs:
            rows.append(verify_one(ctx, D, t.case, cr, cfg.budget))
    for s in probes:
        D = parse_poly(cfg.q, s)
        case = "imaginary" if D.deg % 2 else "unusual"
        t = next((t for t in tables if t.case == case), None)
        cr = rank_from_count(t.count(D)) if t is not None else 0
        rows.append(verify_one(cfg.ctx, D, case, cr, cfg.budget))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(VERIFY_HEADER)
    w.writerows(rows)
    write_atomic(cfg.out / f"verify_q{cfg.q}.csv", buf.getvalue())
    bad = [r for r in rows if r[-1] != "ok"]
    print(f"verified {len(rows)} discriminants, {len(bad)} mismatches")
    for r in bad:
        print("mismatch:", ",".join(map(str, r)))
    return EXIT_MISMATCH if bad else EXIT_OK


def cmd_stats(cfg: RunConfig, census_path: str, model: str = "both",
              cumulative: bool = False) -> str:
    tables = load_census(census_path)
    names = ["fw", "malle"] if model == "both" else [model]
    comps = []
    for t in tables:
        if cfg.case != "both" and t.case != cfg.case:
            continue
        if cfg.deg_max is not None:
            t.n = min(t.n, cfg.deg_max)
        rows = distribution(t, FieldCtx(t.q, t.h))
        for name in names:
            comps.extend(compare(rows, HeuristicModel(name), cumulative))
    comps.sort(key=lambda c: (c.case, c.degD, c.rank, c.model))
    text = stats_csv(comps)
    suffix = "_cumulative" if cumulative else ""
    write_atomic(cfg.out / f"stats_q{cfg.q}{suffix}.csv", text)
    print(text, end="")
    return text


def example_key(ctx: FieldCtx, D: Poly, case: str) -> Poly:
    """Census key for a published unusual example.  The published unusual
    discriminant is the key itself when that is unusual (q = 1 mod 3) and
    -3 times the key otherwise; exactly one of D, D/(-3) has the key's
    leading coefficient."""
    if case != "unusual":
        return D
    q, k3 = ctx.q, inv_mod(-3 % ctx.q, ctx.q)
    for E in (D, D * k3):
        if (-3 * E.sgn) % q == ctx.h:
            return E
    raise UsageError(f"{D.text()} is not an unusual discriminant for q={q}")


def cmd_minima(cfg: RunConfig, census_path: str) -> str:
    tables = load_census(census_path)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["q", "case", "rank", "degD", "genus", "example"])
    checks = []
    for t in tables:
        if cfg.case != "both" and t.case != cfg.case:
            continue
        for m in minima(t):
            w.writerow([t.q, t.case, m.rank, m.degD, m.genus, Poly(t.q, m.example).pretty()])
        for rank, genus, text in MINIMA_EXAMPLES.get((t.q, t.case), []):
            D = example_key(cfg.ctx, parse_poly(t.q, text), t.case)
            if D.deg > t.n:
                checks.append(f"{t.case} {text}: degree {D.deg} beyond census")
                continue
            found = rank_from_count(t.count(D)) if D in t else None
            status = "present" if found == rank else f"absent or rank {found}"
            checks.append(f"{t.case} rank {rank} genus {genus} {text}: {status}")
    text = buf.getvalue()
    write_atomic(cfg.out / f"minima_q{cfg.q}.csv", text)
    print(text, end="")
    for c in checks:
        print("example", c)
    return text


def cmd_dualcheck(cfg: RunConfig, D_text: str) -> dict:
    try:
        D = parse_poly(cfg.q, D_text)
    except ValueError as e:
        raise UsageError(str(e))
    if cfg.q % 3 != 2:
        raise UsageError("dualcheck needs q = 2 mod 3")
    if D.is_const() or not is_squarefree(D):
        raise UsageError("D must be squarefree and nonconstant")
    try:
        res = dual_check(cfg.ctx, D, cfg.budget)
    except DomainError as e:
        raise UsageError(str(e))
    print(f"r_real={res['r_real']} r_unusual={res['r_unusual']} "
          f"{res['classification'].replace('_', '-')} ({res['r_real']} -> {res['r_unusual']})")
    return res


def cmd_heuristic_table() -> list:
    rows = heuristic_table()
    print("model,r,computed,computed_k5,published")
    for name, r, val, cut, pub in rows:
        print(f"{name},{r},{sig_round(val, 5):.5g},{sig_round(cut, 5):.5g},{pub:.5g}")
    return rows


# -- argument parsing -------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--q", type=int, default=5)
    common.add_argument("--h", type=int, default=None, help="primitive root override")
    common.add_argument("--deg-max", type=int, default=None)
    common.add_argument("--case", choices=["imaginary", "unusual", "both"], default="both")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", type=Path, default=Path("."))
    common.add_argument("--budget", type=int, default=10 ** 6, help="oracle refuses when q^(largest reduced ideal degree) exceeds this")

    p = argparse.ArgumentParser(prog="threerank", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="cmd", required=True)
    t = sub.add_parser("tabulate", parents=[common])
    t.add_argument("--progress", action="store_true")
    v = sub.add_parser("verify", parents=[common])
    v.add_argument("census")
    v.add_argument("--sample", type=int, default=50)
    v.add_argument("--all", action="store_true")
    v.add_argument("--probe", action="append", default=[])
    s = sub.add_parser("stats", parents=[common])
    s.add_argument("census")
    s.add_argument("--model", choices=["fw", "malle", "both"], default="both")
    s.add_argument("--cumulative", action="store_true")
    m = sub.add_parser("minima", parents=[common])
    m.add_argument("census")
    d = sub.add_parser("dualcheck", parents=[common])
    d.add_argument("D")
    sub.add_parser("heuristic-table", parents=[common])
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    try:
        cfg = RunConfig(q=args.q, h=args.h, deg_max=args.deg_max, case=args.case,
                        threads=args.threads, seed=args.seed, out=args.out,
                        budget=args.budget, sample=getattr(args, "sample", 50))
        if args.cmd == "tabulate":
            cmd_tabulate(cfg, args.progress)
        elif args.cmd == "verify":
            return cmd_verify(cfg, args.census, args.all, args.probe)
        elif args.cmd == "stats":
            cmd_stats(cfg, args.census, args.model, args.cumulative)
        elif args.cmd == "minima":
            cmd_minima(cfg, args.census)
        elif args.cmd == "dualcheck":
            cmd_dualcheck(cfg, args.D)
        else:
            cmd_heuristic_table()
    except (UsageError, BudgetExceeded) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
