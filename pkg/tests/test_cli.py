import csv

import pytest

from threerank.algebra import FieldCtx, parse_poly
from threerank.cli import RunConfig, UsageError, build_parser, example_key, main


@pytest.fixture(scope="module")
def tabulated(tmp_path_factory):
    out = tmp_path_factory.mktemp("tab")
    assert main(["tabulate", "--q", "5", "--deg-max", "5", "--out", str(out)]) == 0
    return out


def test_tabulate_summary(tabulated):
    rows = list(csv.DictReader(open(tabulated / "summary_q5.csv")))
    got = {(r["case"], int(r["degD"]), int(r["rank"])): int(r["num_fields"]) for r in rows}
    assert got["imaginary", 3, 1] == 80
    assert got["imaginary", 5, 1] == 1600 and got["imaginary", 5, 2] == 10
    assert got["unusual", 4, 1] == 200


def test_tabulate_threads_identical(tabulated, tmp_path):
    assert main(["tabulate", "--q", "5", "--deg-max", "5", "--threads", "2",
                 "--out", str(tmp_path)]) == 0
    for name in ("census_q5.csv", "summary_q5.csv"):
        assert (tmp_path / name).read_bytes() == (tabulated / name).read_bytes()
    assert not [p for p in tmp_path.iterdir() if p.name.startswith(".")]


def test_verify(tabulated, tmp_path, capsys):
    code = main(["verify", str(tabulated / "census_q5.csv"), "--q", "5", "--sample", "10",
                 "--probe", "t^3+t", "--probe", "t^3+1", "--out", str(tmp_path)])
    assert code == 0
    rows = list(csv.DictReader(open(tmp_path / "verify_q5.csv")))
    assert list(rows[0]) == ["q", "case", "D", "census_rank", "oracle_rank", "h_ideal",
                             "h_jac", "status"]
    probes = {r["D"]: r for r in rows[-2:]}
    assert probes["0,1,0,1"]["oracle_rank"] == "0" and probes["0,1,0,1"]["h_jac"] == "4"
    assert probes["1,0,0,1"]["census_rank"] == "1" and probes["1,0,0,1"]["h_jac"] == "6"
    assert all(r["status"] == "ok" for r in rows)


def test_verify_mismatch_exit(tabulated, tmp_path):
    text = (tabulated / "census_q5.csv").read_text().replace('"1,0,0,1",1,1', '"1,0,0,1",4,2')
    bad = tmp_path / "bad.csv"
    bad.write_text(text)
    assert main(["verify", str(bad), "--q", "5", "--sample", "0", "--probe", "t^3+1",
                 "--out", str(tmp_path)]) == 1


def test_verify_budget_refusal(tabulated, tmp_path):
    assert main(["verify", str(tabulated / "census_q5.csv"), "--q", "5", "--sample", "3",
                 "--budget", "4", "--out", str(tmp_path)]) == 2


def test_stats_and_minima(tabulated, tmp_path, capsys):
    assert main(["stats", str(tabulated / "census_q5.csv"), "--q", "5", "--model", "both",
                 "--out", str(tmp_path)]) == 0
    out = capsys.readouterr().out
    assert "0.420095" in out and ",malle," in out
    assert main(["minima", str(tabulated / "census_q5.csv"), "--q", "5",
                 "--out", str(tmp_path)]) == 0
    out = capsys.readouterr().out
    assert "5,imaginary,2,5,2," in out


def test_dualcheck(capsys):
    assert main(["dualcheck", "--q", "5", "t^10+2t^9+t^8+4t^7+2t^6+3t^5+3t^4+4t^3+3t^2+t"]) == 0
    assert "escalatory (2 -> 3)" in capsys.readouterr().out
    assert main(["dualcheck", "--q", "5", "t^2-2"]) == 0
    assert main(["dualcheck", "--q", "5", "t^^2"]) == 2
    assert main(["dualcheck", "--q", "7", "t^2-2"]) == 2


def test_heuristic_table(capsys):
    assert main(["heuristic-table"]) == 0
    out = capsys.readouterr().out
    assert "fw,1,0.42009,0.42096,0.42009" in out


@pytest.mark.parametrize("argv", [["tabulate", "--bogus"], ["tabulate", "--q", "9", "--deg-max", "3"],
                                  ["tabulate", "--q", "5"], ["tabulate", "--q", "5", "--deg-max", "2"],
                                  ["stats", "/nonexistent.csv"], []])
def test_usage_errors(argv, tmp_path):
    assert main(argv + (["--out", str(tmp_path)] if argv else [])) == 2


def test_common_flags_everywhere():
    p = build_parser()
    for cmd in (["tabulate"], ["verify", "x"], ["stats", "x"], ["minima", "x"],
                ["dualcheck", "t"], ["heuristic-table"]):
        args = p.parse_args(cmd + ["--q", "7", "--deg-max", "4", "--case", "unusual", "--h", "3",
                                   "--threads", "2", "--seed", "1", "--out", ".", "--budget", "9"])
        assert args.q == 7 and args.budget == 9


def test_run_config_guards():
    with pytest.raises(UsageError):
        RunConfig(q=5, threads=0)
    with pytest.raises(UsageError):
        RunConfig(q=7, h=2)
    assert RunConfig(q=5, deg_max=6).degree_bound("imaginary") == 5


def test_example_key():
    q5 = FieldCtx(5)
    dual = parse_poly(5, "2t^10 + 4t^9 + 2t^8 + 3t^7 + 4t^6 + t^5 + t^4 + 3t^3 + t^2 + 2t")
    real = parse_poly(5, "t^10 + 2t^9 + t^8 + 4t^7 + 2t^6 + 3t^5 + 3t^4 + 4t^3 + 3t^2 + t")
    assert example_key(q5, dual, "unusual") == real
    D7 = parse_poly(7, "6t^8 + 2t^6 + 3t^2 + t + 5")
    assert example_key(FieldCtx(7), D7, "unusual") == D7
    assert example_key(q5, real, "imaginary") == real
