"""Discriminant tallies and the rank tables derived from them."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

from .algebra import FieldCtx, Poly, genus_of_degree, is_squarefree, polys_of_degree


class CensusError(ValueError):
    """A count that cannot come from a Hasse count, or mismatched tables."""


def count_from_rank(r: int) -> int:
    return (3 ** r - 1) // 2


def rank_from_count(c: int) -> int:
    """r with (3^r - 1)/2 == c."""
    if c < 0:
        raise CensusError(f"negative count {c}")
    m, r = 2 * c + 1, 0
    while m % 3 == 0:
        m //= 3
        r += 1
    if m != 1:
        raise CensusError(f"count {c} is not of the form (3^r - 1)/2")
    return r


@dataclass
class CensusTable:
    q: int
    case: str
    h: int
    n: int
    entries: dict = field(default_factory=dict)
    stats: dict = field(default_factory=dict, compare=False)

    def add_counts(self, tally: dict):
        for k, v in tally.items():
            k = tuple(k)
            self.entries[k] = self.entries.get(k, 0) + v

    def poly(self, key) -> Poly:
        return Poly(self.q, key)

    def __len__(self):
        return len(self.entries)

    def __contains__(self, D):
        if isinstance(D, Poly):
            D = D.coeffs
        return tuple(D) in self.entries

    def count(self, D) -> int:
        if isinstance(D, Poly):
            D = D.coeffs
        return self.entries.get(tuple(D), 0)

    def by_degree(self) -> dict:
        out: dict = {}
        for k, v in self.entries.items():
            out.setdefault(len(k) - 1, {})[k] = v
        return out

    def degrees(self) -> list[int]:
        """Degrees of the case's parity up to n (the rows a run covers)."""
        start = 1 if self.case == "imaginary" else 2
        return list(range(start, self.n + 1, 2))

    def sorted_items(self):
        return sorted(self.entries.items(), key=lambda kv: (len(kv[0]), kv[0][::-1]))

    def meta(self) -> tuple:
        return (self.q, self.case, self.h, self.n)


def merge(a: CensusTable, b: CensusTable) -> CensusTable:
    if a.meta() != b.meta():
        raise CensusError(f"metadata mismatch {a.meta()} vs {b.meta()}")
    out = CensusTable(*a.meta())
    out.add_counts(a.entries)
    out.add_counts(b.entries)
    return out


def count_squarefree(ctx: FieldCtx, n: int, case: str) -> int:
    """Number of squarefree D of degree n whose -3D has sign 1 or h
    (imaginary, n odd) or sign h (unusual, n even)."""
    q = ctx.q
    monic = q if n == 1 else q ** n - q ** (n - 1)
    if case == "imaginary":
        if n % 2 == 0:
            return 0
        return 2 * monic
    if n % 2 or n == 0:
        return 0
    return monic


def count_squarefree_brute(ctx: FieldCtx, n: int, case: str) -> int:
    q = ctx.q
    k3 = (-3) % q
    wanted = {1, ctx.h} if case == "imaginary" else {ctx.h}
    if (n % 2 == 1) != (case == "imaginary"):
        return 0
    lead = [c for c in range(1, q) if c * k3 % q in wanted]
    return sum(1 for D in polys_of_degree(q, n, lead) if is_squarefree(D))


@dataclass(frozen=True)
class RankRow:
    q: int
    case: str
    degD: int
    genus: int
    rank: int
    num_fields: int
    total_squarefree: int
    derived: bool = False


def distribution(table: CensusTable, ctx: FieldCtx | None = None) -> list[RankRow]:
    """Per degree: one row per rank >= 1 found, plus a derived rank-0 row."""
    ctx = ctx or FieldCtx(table.q, table.h)
    rows = []
    per_deg = table.by_degree()
    for n in table.degrees():
        total = count_squarefree(ctx, n, table.case)
        ranks: dict = {}
        for c in per_deg.get(n, {}).values():
            r = rank_from_count(c)
            ranks[r] = ranks.get(r, 0) + 1
        g = genus_of_degree(n)
        rows.append(RankRow(table.q, table.case, n, g, 0,
                            total - sum(ranks.values()), total, derived=True))
        for r in sorted(ranks):
            rows.append(RankRow(table.q, table.case, n, g, r, ranks[r], total))
    return rows


def rank_counts(table: CensusTable, n: int) -> dict:
    """{rank: number of D} for rank >= 1 at degree n."""
    out: dict = {}
    for c in table.by_degree().get(n, {}).values():
        r = rank_from_count(c)
        out[r] = out.get(r, 0) + 1
    return dict(sorted(out.items()))


@dataclass(frozen=True)
class Minimum:
    rank: int
    degD: int
    genus: int
    example: tuple


def minima(table: CensusTable) -> list[Minimum]:
    best: dict = {}
    for key, c in table.entries.items():
        r = rank_from_count(c)
        cand = (len(key) - 1, (len(key), key[::-1]))
        if r not in best or cand < best[r][0]:
            best[r] = (cand, key)
    return [Minimum(r, len(k) - 1, genus_of_degree(len(k) - 1), k)
            for r, (_, k) in sorted(best.items())]


# -- CSV -------------------------------------------------------------------

CENSUS_HEADER = ["q", "case", "h", "degD", "D", "count", "rank"]
SUMMARY_HEADER = ["q", "case", "degD", "genus", "rank", "num_fields", "total_squarefree"]


def census_csv(table: CensusTable) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CENSUS_HEADER)
    for key, c in table.sorted_items():
        w.writerow([table.q, table.case, table.h, len(key) - 1,
                    Poly(table.q, key).text(), c, rank_from_count(c)])
    return buf.getvalue()


def summary_csv(rows: list[RankRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SUMMARY_HEADER)
    for r in sorted(rows, key=lambda r: (r.case, r.degD, r.rank)):
        w.writerow([r.q, r.case, r.degD, r.genus, r.rank, r.num_fields, r.total_squarefree])
    return buf.getvalue()


def parse_census(text: str, n: int | None = None) -> list[CensusTable]:
    """Parse census CSV text into one table per case present.

    ``n`` defaults to the largest degree present for each case."""
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames != CENSUS_HEADER:
        raise CensusError(f"bad census header {reader.fieldnames}")
    tables: dict = {}
    for row in reader:
        q, h = int(row["q"]), int(row["h"])
        case = row["case"]
        D = Poly.from_text(q, row["D"])
        c = int(row["count"])
        if D.deg != int(row["degD"]) or rank_from_count(c) != int(row["rank"]):
            raise CensusError(f"inconsistent census row {row}")
        t = tables.setdefault(case, CensusTable(q, case, h, 0))
        if (t.q, t.h) != (q, h):
            raise CensusError("mixed q/h in census file")
        t.add_counts({D.coeffs: c})
        t.n = max(t.n, D.deg)
    out = []
    for case, t in sorted(tables.items()):
        if n is not None:
            t.n = n
        out.append(t)
    return out
