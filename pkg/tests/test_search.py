import pytest

from threerank.algebra import DEG_ZERO, FieldCtx, Poly, genus_of_degree, is_squarefree
from threerank.census import census_csv, count_squarefree, rank_counts, rank_from_count
from threerank.search import (BRUTE_MAX_N, PruneState, SearchConfig, brute_search, coeff_iter,
                              _run, decode, encode, prune, reference_search, run_search)

from conftest import census

NEG = DEG_ZERO


def test_coeff_iter_counts():
    ctx = FieldCtx(5)
    assert [p.coeffs for p in coeff_iter(ctx, 0, ctx.S)] == [(1,), (2,)]
    polys = list(coeff_iter(ctx, 1))
    assert len(polys) == 24
    assert [p.deg for p in polys] == sorted(p.deg for p in polys)
    assert len(list(coeff_iter(ctx, 7 // 4, ctx.S))) == 2 + 2 * 5


def test_encode_round_trip():
    for code in range(1, 200):
        assert encode(decode(7, code)) == code


def test_prune_rules():
    # unique max m5 = 2(deg a + i) even: imaginary skip, unusual keep when small
    s = PruneState(1, NEG, NEG, 1)
    assert s.m == 4
    assert prune(s, "imaginary", 7) == "skip"
    assert prune(s, "unusual", 4) == "keep"
    assert prune(s, "unusual", 3) == "skip"
    # a tied maximum keeps even when its parity and size look wrong
    s = PruneState(1, 1, 1, 1)
    assert s.terms[2] == s.terms[4] == s.m == 4
    assert prune(s, "imaginary", 1) == "keep"
    # m2 = deg a + 3 deg c
    s = PruneState(0, NEG, 1, 0)
    assert s.terms[1] == 3 and s.m == 3
    assert prune(s, "imaginary", 3) == "keep"


def test_config_validation():
    with pytest.raises(ValueError):
        SearchConfig(FieldCtx(5), 3, "real")
    with pytest.raises(ValueError):
        SearchConfig(FieldCtx(5), 0)
    with pytest.raises(ValueError):
        brute_search(SearchConfig(FieldCtx(5), BRUTE_MAX_N + 1))


# q = 11, 13 at n = 4 take minutes; they run in the acceptance suite
@pytest.mark.parametrize("q,n,case", [(5, 3, "imaginary"), (5, 4, "unusual"),
                                      (7, 3, "imaginary"), (7, 4, "unusual"),
                                      (11, 3, "imaginary"), (13, 3, "imaginary")])
def test_pruned_matches_brute(q, n, case):
    cfg = SearchConfig(FieldCtx(q), n, case)
    assert run_search(cfg).entries == brute_search(cfg).entries


@pytest.mark.parametrize("n,case", [(3, "imaginary"), (4, "unusual")])
def test_kernel_matches_reference(n, case):
    cfg = SearchConfig(FieldCtx(5), n, case)
    assert run_search(cfg).entries == reference_search(cfg).entries


@pytest.mark.parametrize("q,n,case", [(5, 6, "unusual"), (7, 4, "unusual"),
                                      (5, 7, "imaginary"), (11, 4, "unusual")])
def test_kernel_ties_match_python(q, n, case):
    cfg = SearchConfig(FieldCtx(q), n, case)
    assert _run(cfg, True, False, True).entries == _run(cfg, True, False, False).entries


@pytest.mark.parametrize("q,n,case", [(5, 5, "imaginary"), (5, 6, "unusual"),
                                      (7, 5, "imaginary"), (7, 4, "unusual"),
                                      (13, 3, "imaginary")])
def test_census_invariants(q, n, case):
    ctx = FieldCtx(q)
    T = census(q, n, case)
    k3 = (-3) % q
    for key, c in T.entries.items():
        D = Poly(q, key)
        assert 1 <= D.deg <= n and (D.deg % 2 == 1) == (case == "imaginary")
        assert is_squarefree(D)
        lead = D.sgn * k3 % q
        assert lead in ((1, ctx.h) if case == "imaginary" else (ctx.h,))
        r = rank_from_count(c)
        assert r >= 1 and 2 * c + 1 == 3 ** r
        assert r <= 2 * genus_of_degree(D.deg)
    for d in T.degrees():
        assert all(v % q == 0 for v in rank_counts(T, d).values())
        if d >= 3:
            assert count_squarefree(ctx, d, case) % (q * q * (q - 1)) == 0


def test_workers_deterministic():
    cfg1 = SearchConfig(FieldCtx(7), 5, "imaginary", workers=1)
    cfg3 = SearchConfig(FieldCtx(7), 5, "imaginary", workers=3)
    assert census_csv(run_search(cfg1)) == census_csv(run_search(cfg3))


def test_small_counts():
    T = census(5, 3, "imaginary")
    assert len(T.by_degree()[3]) == 80 and set(T.entries.values()) == {1}
    T = census(7, 3, "imaginary")
    assert sorted(T.by_degree()[3].values()).count(4) == 14
