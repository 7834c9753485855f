"""Friedman-Washington and Malle 3-rank probabilities, and their comparison
with census distributions."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction

from .census import RankRow

ETA_K = 64


def eta_inf(p: float, K: int = ETA_K) -> float:
    """prod_{k=1}^K (1 - p^-k)."""
    if K < 1:
        raise ValueError("K must be >= 1")
    out = 1.0
    for k in range(1, K + 1):
        out *= 1.0 - p ** -k
    return out


def _partial(p: float, r: int, power: int) -> float:
    out = 1.0
    for k in range(1, r + 1):
        out *= (1.0 - p ** -k) ** -power
    return out


def fw_prob(p: float, r: int, K: int = ETA_K) -> float:
    if r < 0:
        raise ValueError("r must be >= 0")
    return p ** -(r * r) * eta_inf(p, K) * _partial(p, r, 2)


def malle_prob(p: float, r: int, K: int = ETA_K) -> float:
    if r < 0:
        raise ValueError("r must be >= 0")
    return p ** -((r * r + r) / 2) * eta_inf(p, K) / eta_inf(p * p, K) * _partial(p, r, 1)


MODELS = {"fw": fw_prob, "malle": malle_prob}


@dataclass(frozen=True)
class HeuristicModel:
    name: str = "fw"
    p: int = 3
    K: int = ETA_K

    def __post_init__(self):
        if self.name not in MODELS:
            raise ValueError(f"model must be one of {sorted(MODELS)}")

    def prob(self, r: int) -> float:
        return MODELS[self.name](self.p, r, self.K)

    def table(self, r_max: int) -> list[float]:
        return [self.prob(r) for r in range(r_max + 1)]


def default_model(q: int) -> str:
    """fw when F_q lacks cube roots of unity, malle when it has them."""
    return "malle" if q % 3 == 1 else "fw"


@dataclass(frozen=True)
class Comparison:
    q: int
    case: str
    degD: int
    rank: int
    num: int
    den: int
    model: str
    model_prob: float

    @property
    def empirical(self) -> Fraction:
        return Fraction(self.num, self.den) if self.den else Fraction(0)

    @property
    def diff(self) -> float:
        return float(self.empirical) - self.model_prob


def compare(rows: list[RankRow], model: HeuristicModel, cumulative: bool = False) -> list[Comparison]:
    """Empirical rank proportions per degree (or summed over all degrees up
    to each one) against the model."""
    fams = {(r.q, r.case) for r in rows}
    if len(fams) > 1:
        raise ValueError(f"rows mix families {sorted(fams)}")
    by_deg: dict = {}
    totals: dict = {}
    for r in rows:
        by_deg.setdefault(r.degD, {})
        by_deg[r.degD][r.rank] = by_deg[r.degD].get(r.rank, 0) + r.num_fields
        totals[r.degD] = r.total_squarefree
    out = []
    acc: dict = {}
    acc_total = 0
    for d in sorted(by_deg):
        if cumulative:
            for k, v in by_deg[d].items():
                acc[k] = acc.get(k, 0) + v
            acc_total += totals[d]
            counts, total = dict(acc), acc_total
        else:
            counts, total = by_deg[d], totals[d]
        q, case = rows[0].q, rows[0].case
        for rank in range(max(counts) + 1):
            out.append(Comparison(q, case, d, rank, counts.get(rank, 0), total,
                                  model.name, model.prob(rank)))
    return out


STATS_HEADER = ["q", "case", "degD", "rank", "empirical_num", "empirical_den",
                "empirical", "model", "model_prob", "diff"]


def stats_csv(comps: list[Comparison]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(STATS_HEADER)
    for c in comps:
        w.writerow([c.q, c.case, c.degD, c.rank, c.num, c.den,
                    f"{float(c.empirical):.6f}", c.model, f"{c.model_prob:.6f}", f"{c.diff:.6f}"])
    return buf.getvalue()


# constants quoted alongside the two formulas, r = 0..4
PUBLISHED = {
    "fw": [0.56128, 0.42009, 0.019692, 0.00008739, 4.0964e-8],
    "malle": [0.64032, 0.31950, 0.03994, 1.5361e-3, 1.9201e-5],
}


def sig_round(x: float, digits: int = 5) -> float:
    if x == 0:
        return 0.0
    return round(x, digits - 1 - math.floor(math.log10(abs(x))))


# The quoted r = 0 values equal the products cut off after five factors;
# every other quoted value uses the converged product.
PUBLISHED_K0 = 5


def heuristic_table(r_max: int = 4) -> list[tuple]:
    """(model, r, converged, five-factor, published) per quoted constant."""
    out = []
    for name in ("fw", "malle"):
        m = HeuristicModel(name)
        cut = HeuristicModel(name, K=PUBLISHED_K0)
        for r in range(r_max + 1):
            out.append((name, r, m.prob(r), cut.prob(r),
                        PUBLISHED[name][r] if r < 5 else None))
    return out
