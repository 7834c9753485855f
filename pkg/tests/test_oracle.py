import random

import pytest
from hypothesis import given, settings, strategies as st

from threerank.algebra import DomainError, FieldCtx, Poly, is_squarefree, parse_poly
from threerank.oracle import (BudgetExceeded, QuadModel, census_model,
                              check_class_number, class_number_pc, compose, cycle_partition,
                              dual_check, enumerate_reduced, point_counts, sqrt_mod_prime,
                              three_rank, three_rank_real)
from threerank.algebra import monic_irreducibles

from conftest import census

C5, C7, C13 = FieldCtx(5), FieldCtx(7), FieldCtx(13)
ESCALATORY_REAL = "t^10+2t^9+t^8+4t^7+2t^6+3t^5+3t^4+4t^3+3t^2+t"


def model(ctx, s):
    return QuadModel(ctx, parse_poly(ctx.q, s))


def random_sqfree(rng, ctx, n, lead=None):
    q = ctx.q
    while True:
        D = Poly(q, [rng.randrange(q) for _ in range(n)] + [lead or rng.randrange(1, q)])
        if is_squarefree(D):
            return D


def test_hand_examples():
    m = model(C5, "t^3+1")
    assert len(enumerate_reduced(m)) == 6
    L, h = class_number_pc(m)
    assert point_counts(m, 1) == [6] and h == 6
    assert three_rank(m) == 1
    m = model(C5, "t^3+t")
    assert len(enumerate_reduced(m)) == 4 and point_counts(m, 1) == [4]
    assert three_rank(m) == 0


def test_genus_zero():
    m = model(C5, "t+1")
    assert enumerate_reduced(m) == [m.one]
    m = model(C5, "2t^2+1")
    assert m.kind == "unusual" and len(enumerate_reduced(m)) == 2


@pytest.mark.parametrize("ctx,s,r", [(C13, "4t^5 + t^3 + 6t^2 + 4", 3),
                                     (C5, "t^9 + 2t^6 + 2t^3 + 3", 3)])
def test_published_rank3(ctx, s, r):
    m = model(ctx, s)
    assert three_rank(m) == r
    check_class_number(m)


def test_kind_guards():
    with pytest.raises(DomainError):
        enumerate_reduced(model(C5, "t^2-2"))
    with pytest.raises(DomainError):
        three_rank(model(C5, "t^2-2"))
    with pytest.raises(DomainError):
        cycle_partition(model(C5, "t^3+1"))
    with pytest.raises(DomainError):
        QuadModel(C5, parse_poly(5, "t^2+2t+1"))
    with pytest.raises(BudgetExceeded):
        QuadModel(C5, parse_poly(5, "t^9+1"), budget=100)


@pytest.mark.parametrize("q", [5, 7, 13])
def test_sqrt_mod_prime(q):
    rng = random.Random(q)
    for p in monic_irreducibles(q, 2)[:6]:
        for _ in range(5):
            x = Poly(q, [rng.randrange(q), rng.randrange(q)])
            r = sqrt_mod_prime(x * x, p)
            assert (r * r - x * x) % p == Poly(q)
    # a non-residue has no root
    p = monic_irreducibles(q, 1)[0]
    nonres = next(a for a in range(1, q) if pow(a, (q - 1) // 2, q) != 1)
    assert sqrt_mod_prime(Poly(q, [nonres]), p) is None


def _group_laws(m, rng):
    els = m.class_reps()
    e = m.one
    h = len(els)
    for _ in range(10):
        I, J, K = (rng.choice(els) for _ in range(3))
        assert compose(m, I, e) == I
        assert compose(m, I, J) == compose(m, J, I)
        assert compose(m, compose(m, I, J), K) == compose(m, I, compose(m, J, K))
        assert m.is_identity(m.power(I, h))


@pytest.mark.parametrize("case,n", [("imaginary", 5), ("imaginary", 7), ("unusual", 6)])
def test_group_laws(case, n):
    rng = random.Random(n)
    lead = 1 if case == "imaginary" else 2
    for _ in range(3):
        m = QuadModel(C5, random_sqfree(rng, C5, n, lead))
        _group_laws(m, rng)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(0, 6), min_size=5, max_size=5), st.sampled_from([1, 3, 6]))
def test_class_number_consistency(low, lead):
    D = Poly(7, low + [lead])
    if not is_squarefree(D):
        return
    m = QuadModel(C7, D)
    info = check_class_number(m)
    lo, hi = info["L"].hasse_weil_bounds()
    assert lo <= info["h_jac"] <= hi
    assert info["L"].functional_equation_holds()
    r = three_rank_real(m) if m.kind == "real" else three_rank(m)
    assert 0 <= r <= 2 * m.g


def test_real_cycles():
    m = model(C5, "t^2-2")
    assert cycle_partition(m)[0] == 1 and three_rank_real(m) == 0
    rng = random.Random(1)
    for _ in range(4):
        m = QuadModel(C5, random_sqfree(rng, C5, 6, 1))
        h, cycles = cycle_partition(m)
        assert sum(len(c) for c in cycles) == len(m.reduced_ideals)
        assert check_class_number(m)["h_jac"] % h == 0
        _group_laws(m, rng)


def test_escalatory_example():
    res = dual_check(C5, parse_poly(5, ESCALATORY_REAL))
    assert res == {"r_real": 2, "r_unusual": 3, "classification": "escalatory"}


def test_dual_bound():
    rng = random.Random(7)
    for _ in range(6):
        D = random_sqfree(rng, C5, 6, 1)
        res = dual_check(C5, D)
        assert res["r_unusual"] - res["r_real"] in (0, 1)
    with pytest.raises(DomainError):
        dual_check(C7, parse_poly(7, "t^2-2"))


@pytest.mark.parametrize("q,n,case", [(5, 5, "imaginary"), (5, 4, "unusual"), (7, 4, "unusual")])
def test_census_agreement(q, n, case):
    ctx = FieldCtx(q)
    T = census(q, n, case)
    rng = random.Random(n)
    for key in rng.sample(sorted(T.entries), 15):
        m = census_model(ctx, Poly(q, key), case)
        assert 3 ** three_rank(m) == 2 * T.count(key) + 1
