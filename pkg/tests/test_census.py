import pytest
from hypothesis import given, strategies as st

from threerank.algebra import FieldCtx
from threerank.census import (CENSUS_HEADER, CensusError, CensusTable, census_csv,
                              count_from_rank, count_squarefree, count_squarefree_brute,
                              distribution, merge, minima, parse_census, rank_counts,
                              rank_from_count, summary_csv)

from conftest import census


@given(st.integers(0, 30))
def test_rank_count_inverse(r):
    assert rank_from_count(count_from_rank(r)) == r


@pytest.mark.parametrize("c", [2, 3, 5, 12, -1])
def test_bad_counts(c):
    with pytest.raises(CensusError):
        rank_from_count(c)


@pytest.mark.parametrize("q", [5, 7])
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_squarefree_closed_form(q, n):
    ctx = FieldCtx(q)
    for case in ("imaginary", "unusual"):
        assert count_squarefree(ctx, n, case) == count_squarefree_brute(ctx, n, case)


@pytest.mark.parametrize("q", [5, 7, 11, 13])
def test_squarefree_divisibility(q):
    ctx = FieldCtx(q)
    for n in range(3, 12):
        case = "imaginary" if n % 2 else "unusual"
        assert count_squarefree(ctx, n, case) % (q * q * (q - 1)) == 0


def test_published_totals():
    assert count_squarefree(FieldCtx(5), 11, "imaginary") == 78125000
    assert count_squarefree(FieldCtx(7), 6, "unusual") == 100842


def test_csv_round_trip():
    T = census(5, 5, "imaginary")
    text = census_csv(T)
    assert text.splitlines()[0] == ",".join(CENSUS_HEADER)
    (back,) = parse_census(text)
    assert back.entries == T.entries and back.n == 5
    assert census_csv(back) == text


def test_parse_rejects_inconsistent_rows():
    bad = ",".join(CENSUS_HEADER) + "\n5,imaginary,2,3,\"1,0,0,1\",4,1\n"
    with pytest.raises(CensusError):
        parse_census(bad)
    with pytest.raises(CensusError):
        parse_census("q,D\n")


def test_merge():
    a = CensusTable(5, "imaginary", 2, 3, {(1, 0, 0, 1): 1})
    b = CensusTable(5, "imaginary", 2, 3, {(1, 0, 0, 1): 3, (2, 0, 0, 1): 1})
    m = merge(a, b)
    assert m.entries == {(1, 0, 0, 1): 4, (2, 0, 0, 1): 1}
    assert merge(a, b).entries == merge(b, a).entries
    with pytest.raises(CensusError):
        merge(a, CensusTable(7, "imaginary", 3, 3))


def test_distribution_rows():
    T = census(7, 5, "imaginary")
    rows = {(r.degD, r.rank): r for r in distribution(T)}
    assert rows[3, 1].num_fields == 196 and rows[3, 2].num_fields == 14
    assert rows[3, 0].num_fields == 588 - 210 and rows[3, 0].derived
    assert rank_counts(T, 5) == {1: 8400, 2: 588}
    for d in (1, 3, 5):
        assert sum(r.num_fields for (dd, _), r in rows.items() if dd == d) == rows[d, 0].total_squarefree
    text = summary_csv(list(rows.values()))
    assert text.startswith("q,case,degD,genus,rank,num_fields,total_squarefree\n")


def test_minima():
    T = census(13, 5, "imaginary")
    m = {x.rank: x for x in minima(T)}
    assert m[3].genus == 2 and m[3].degD == 5
    assert (4, 0, 6, 1, 0, 4) in T and T.count((4, 0, 6, 1, 0, 4)) == 13
