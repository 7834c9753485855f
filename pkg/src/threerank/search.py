"""Exhaustive enumeration of reduced binary cubic forms with imaginary or
unusual Hessian discriminant -3D, |D| <= q^n, tallied by discriminant.

The coefficient loops run in a numba kernel that applies every cheap
reduction clause; survivors are finished here (primitivity,
irreducibility and the |P| == |R| tie-breaks).
"""

from __future__ import annotations

import logging
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from . import _kernel
from .algebra import DEG_ZERO, FieldCtx, Poly, inv_mod
from .census import CensusTable
from .forms import (CubicForm, cubic_tie_candidates, form_key, hessian, tie_matrices_for,
                    is_irreducible_cubic, is_primitive, is_reduced_quad)

log = logging.getLogger(__name__)

CASES = ("imaginary", "unusual")


@dataclass(frozen=True)
class SearchConfig:
    ctx: FieldCtx
    n: int
    case: str = "imaginary"
    workers: int = 1
    progress: bool = False

    def __post_init__(self):
        if self.case not in CASES:
            raise ValueError(f"case must be one of {CASES}")
        if self.n < 1:
            raise ValueError("degree bound must be >= 1")

    @property
    def X(self) -> int:
        return self.ctx.q ** self.n


@dataclass
class PruneState:
    deg_a: float
    deg_b: float
    deg_c: float
    i: int
    terms: tuple = field(init=False)

    def __post_init__(self):
        a, b, c, i = self.deg_a, self.deg_b, self.deg_c, self.i
        self.terms = (2 * (b + c), a + 3 * c, a + b + c + i, 3 * b + i, 2 * (a + i))

    @property
    def m(self):
        return max(self.terms)


def prune(state: PruneState, case: str, n: int) -> str:
    """'keep' or 'skip' for the d-loop of one (a, b, c, deg d) block."""
    m = state.m
    if sum(t == m for t in state.terms) >= 2:
        return "keep"
    if m == DEG_ZERO or (m % 2 == 1) != (case == "imaginary") or m > n:
        return "skip"
    return "keep"


def coeff_iter(ctx: FieldCtx, max_deg: float, sgn_filter=None) -> Iterator[Poly]:
    """Nonzero polys of degree <= max_deg, degree ascending then by counter."""
    q = ctx.q
    if max_deg < 0:
        return
    for code in range(1, q ** (int(max_deg) + 1)):
        p = decode(q, code)
        if sgn_filter is None or p.sgn in sgn_filter:
            yield p


def decode(q: int, code: int) -> Poly:
    c = []
    while code:
        c.append(code % q)
        code //= q
    return Poly(q, c)


def encode(p: Poly) -> int:
    code = 0
    for x in reversed(p.coeffs):
        code = code * p.q + x
    return code


def a_codes(cfg: SearchConfig) -> np.ndarray:
    ctx = cfg.ctx
    return np.array([encode(a) for a in coeff_iter(ctx, cfg.n // 4, ctx.S)], np.int64)


def _tables(ctx: FieldCtx):
    q = ctx.q
    in_S = np.zeros(q, np.bool_)
    for s in ctx.S:
        in_S[s] = True
    inv = np.zeros(q, np.int64)
    for x in range(1, q):
        inv[x] = inv_mod(x, q)
    return in_S, inv, *_tie_tables(q)


def _tie_tables(q: int):
    """Tie matrices indexed by sgn R, padded to a common length."""
    size = max(len(tie_matrices_for(q, r)) for r in range(1, q))
    ties = np.zeros((q, size, 4), np.int64)
    nties = np.zeros(q, np.int64)
    for r in range(1, q):
        mats = tie_matrices_for(q, r)
        ties[r, :len(mats)] = mats
        nties[r] = len(mats)
    return ties, nties


def finish(ctx: FieldCtx, rows: np.ndarray, forms: list | None = None) -> dict:
    """Apply the expensive reduction clauses to kernel survivors and tally
    the discriminants D = disc(f) (keys are coefficient tuples).  Surviving
    forms are appended to ``forms`` when given."""
    q = ctx.q
    k3 = inv_mod(-3 % q, q)
    tally: dict = {}
    for ac, bc, cc, dc, tie, fc, flags in rows.tolist():
        f = None
        if not flags & 2 or not flags & 1 or tie or forms is not None:
            f = CubicForm(decode(q, ac), decode(q, bc), decode(q, cc), decode(q, dc))
        if not flags & 2 and not is_primitive(f):
            continue
        if not flags & 1 and not is_irreducible_cubic(f):
            continue
        if tie:
            H = hessian(f)
            if not is_reduced_quad(ctx, H):
                continue
            key = form_key(f)
            if any(form_key(g) < key for g in cubic_tie_candidates(ctx, f, H)):
                continue
        D = (decode(q, fc) * k3).coeffs
        tally[D] = tally.get(D, 0) + 1
        if forms is not None:
            forms.append(f)
    return tally


def _scan_chunk(args):
    q, h, n, unusual, codes, prune_on, wide, kernel_ties = args
    ctx = FieldCtx(q, h)
    rows, _, stats = _kernel.scan(q, n, unusual, h, *_tables(ctx),
                                  np.asarray(codes, np.int64), prune_on, wide, kernel_ties)
    return finish(ctx, rows), stats


def _chunks(codes: np.ndarray, k: int) -> list[np.ndarray]:
    # small chunks keep the heavy low-degree a's from landing in one worker
    return [codes[i::k] for i in range(k) if len(codes[i::k])]


def _run(cfg: SearchConfig, prune_on: bool, wide: bool, kernel_ties: bool) -> CensusTable:
    ctx = cfg.ctx
    codes = a_codes(cfg)
    unusual = cfg.case == "unusual"
    table = CensusTable(ctx.q, cfg.case, ctx.h, cfg.n)
    t0 = time.time()
    totals = np.zeros(3, np.int64)
    nchunks = max(1, min(len(codes), 4 * cfg.workers))
    jobs = [(ctx.q, ctx.h, cfg.n, unusual, c, prune_on, wide, kernel_ties)
            for c in _chunks(codes, nchunks)]
    if cfg.workers > 1:
        with ProcessPoolExecutor(cfg.workers) as pool:
            results = list(pool.map(_scan_chunk, jobs))
    else:
        results = map(_scan_chunk, jobs)
    for k, (tally, stats) in enumerate(results, 1):
        table.add_counts(tally)
        totals += stats
        if cfg.progress:
            print(f"[search q={ctx.q} n={cfg.n} {cfg.case}] chunk {k}/{len(jobs)}: "
                  f"scanned {totals[0]} kept {totals[1]} "
                  f"elapsed {time.time() - t0:.1f}s", file=sys.stderr)
    table.stats = {"scanned": int(totals[0]), "kernel_kept": int(totals[1]),
                   "pruned_blocks": int(totals[2]), "elapsed": time.time() - t0}
    return table


def reduced_forms(cfg: SearchConfig) -> list[CubicForm]:
    """Every reduced form the search counts (single process)."""
    ctx = cfg.ctx
    rows, _, _ = _kernel.scan(ctx.q, cfg.n, cfg.case == "unusual", ctx.h, *_tables(ctx),
                              a_codes(cfg), True, False, True)
    out: list = []
    finish(ctx, rows, out)
    return out


def run_search(cfg: SearchConfig) -> CensusTable:
    return _run(cfg, True, False, True)


BRUTE_MAX_N = 4


def brute_search(cfg: SearchConfig) -> CensusTable:
    """Same contract as :func:`run_search` with every shortcut disabled and
    d running over all degrees up to n/2.  Tie-breaks are decided by the
    Python form predicates rather than the kernel."""
    if cfg.n > BRUTE_MAX_N:
        raise ValueError(f"brute_search refuses n > {BRUTE_MAX_N}")
    return _run(cfg, False, True, False)


def reference_search(cfg: SearchConfig) -> CensusTable:
    """Pure-Python search straight from the form predicates; tiny n only."""
    from .algebra import is_squarefree
    from .forms import disc_cubic, is_reduced_cubic

    ctx = cfg.ctx
    q, n = ctx.q, cfg.n
    if q ** n > 5 ** 4:
        raise ValueError("reference_search is for tiny bounds only")
    table = CensusTable(q, cfg.case, ctx.h, n)
    zero = Poly(q)
    k3 = inv_mod(-3 % q, q)
    bcs = [zero, *coeff_iter(ctx, n // 4)]
    for a in coeff_iter(ctx, n // 4, ctx.S):
        for b in bcs:
            cmax = n // 2 - (b.deg if b else 0)
            for c in [zero, *coeff_iter(ctx, cmax)]:
                for d in coeff_iter(ctx, n // 2):
                    f = CubicForm(a, b, c, d)
                    D3 = disc_cubic(f) * -3
                    if D3.is_const() or D3.deg > n:
                        continue
                    if (D3.deg % 2 == 1) != (cfg.case == "imaginary"):
                        continue
                    if cfg.case == "unusual" and D3.sgn != ctx.h:
                        continue
                    if D3.sgn not in (1, ctx.h):
                        continue
                    if not is_squarefree(D3) or not is_reduced_cubic(ctx, f):
                        continue
                    if not is_primitive(f) or not is_irreducible_cubic(f):
                        continue
                    table.add_counts({(D3 * k3).coeffs: 1})
    return table
