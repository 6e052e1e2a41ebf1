import json

import pytest

from abelsum.cli import EXIT_BUDGET, EXIT_FAIL, EXIT_OK, EXIT_USAGE, RunConfig, UsageError, build_parser, dispatch, run


def _json(argv):
    code, out = run(argv)
    return code, json.loads(out)


def test_ind_example():
    code, obj = _json(["ind", "-g", "25", "-A", "1,4,6,9,11"])
    assert code == EXIT_OK and obj["ind"] == 3
    lam = obj["witness"]
    assert sum(map(abs, lam)) == 4
    assert sum(l * a for l, a in zip(lam, [1, 4, 6, 9, 11])) % 25 == 0
    assert obj["certificate"]["holds"]


def test_span_and_check():
    code, obj = _json(["span", "-g", "25", "-A", "3,4"])
    assert code == 0 and obj["span"] == 3 and obj["certificate"]["perfect"]
    assert _json(["check", "--claim", "tight:6", "-g", "25", "-A", "3,4"])[0] == EXIT_OK
    assert _json(["check", "--claim", "perfect:2", "-g", "25", "-A", "3,4"])[0] == EXIT_FAIL
    code, obj = _json(["span", "-g", "4", "-A", "2"])
    assert code == 0 and obj["value"] == "not-spanning"


def test_noncyclic_input():
    code, obj = _json(["ind", "-g", "2,4", "-A", "1,0;0,1"])
    assert code == 0 and obj["ind"] == 1


def test_construct_q3_bound(capsys):
    code, obj = _json(["construct", "--family", "5mod6", "--n", "25", "--p", "5"])
    assert code == 0 and obj["certificate"]["set"] == [1, 6, 11, 16, 21]
    code, obj = _json(["q3", "--n", "25"])
    assert obj == {"n": 25, "value": 5, "branch": "5mod6(p=5)"}
    assert _json(["bound", "a", "2", "3"])[1]["value"] == 25
    code, obj = _json(["bound", "q", "3", "1"])
    assert obj["value"] == 2 and "warning" in capsys.readouterr().err
    code, out = run(["q3", "--n", "38", "--format", "text"])
    assert out == "9 (even)\n"


def test_pmin_qmax_and_cache(tmp_path):
    cache = str(tmp_path / "r.jsonl")
    code, obj = _json(["qmax", "-g", "38", "-t", "5", "--cache", cache])
    assert code == 0 and obj["value"] == 3 and not obj["cached"]
    code, obj = _json(["qmax", "-g", "38", "-t", "5", "--cache", cache])
    assert obj["cached"]
    code, obj = _json(["qmax", "-g", "38", "-t", "5", "--cache", cache, "--fresh"])
    assert not obj["cached"]
    code, obj = _json(["pmin", "-g", "25", "-s", "3", "--symmetry", "--no-cache"])
    assert code == 0 and obj["value"] == 2


def test_env_cache_used(tmp_path, monkeypatch):
    path = tmp_path / "env.jsonl"
    monkeypatch.setenv("ABELSUM_CACHE", str(path))
    run(["qmax", "-g", "13", "-t", "4"])
    assert path.exists() and '"value": 2' in path.read_text()


def test_budget_exit():
    code, obj = _json(["qmax", "-g", "97", "-t", "3", "--budget", "10", "--no-cache"])
    assert code == EXIT_BUDGET and not obj["proved"]


def test_table_formats_and_determinism():
    argv = ["table", "p", "--param", "2", "--from", "1", "--to", "20", "--no-cache"]
    code, a = run(argv)
    _, b = run(argv)
    assert code == 0 and a == b
    rows = json.loads(a)["rows"]
    assert [r["value"] for r in rows][:6] == [0, 1, 1, 1, 1, 2]
    assert [r["n"] for r in rows if r["extremal"]] == [1, 5, 13]
    _, c = run(argv + ["--format", "csv"])
    assert c.splitlines()[0] == "n,value,extremal,proved,set" and c.splitlines()[6] == "6,2,0,1,1 2"
    _, t = run(argv + ["--format", "text"])
    assert len(t.splitlines()) == 20


def test_table_parallel_matches_serial():
    argv = ["table", "q", "--param", "4", "--from", "1", "--to", "30", "--no-cache"]
    _, serial = run(argv)
    _, par = run(argv + ["--jobs", "2"])
    assert serial == par


def test_table_uses_cache_identically(tmp_path):
    argv = ["table", "q", "--param", "3", "--from", "1", "--to", "25", "--cache", str(tmp_path / "t.jsonl")]
    _, first = run(argv)
    _, second = run(argv)
    assert first == second


def test_design_commands(tmp_path):
    pts = tmp_path / "pts.csv"
    assert dispatch(["design", "gen", "-A", "1,4,6,9,11", "-n", "25", "--out", str(pts)]) == 0
    assert len(pts.read_text().splitlines()) == 25
    code, obj = _json(["design", "verify", "--in", str(pts), "-t", "3"])
    assert code == 0 and obj["passed"]
    code, obj = _json(["design", "verify", "--in", str(pts), "-t", "4"])
    assert code == EXIT_FAIL and obj["verdict"]["4"] is False
    code, obj = _json(["design", "verify", "-A", "1,4,6,9,11", "-n", "25", "-t", "3", "--exact"])
    assert code == 0 and obj["exact"]
    assert _json(["design", "dgs", "-t", "11", "-d", "23"])[1]["value"] == 196560
    code, out = run(["design", "polygon", "-n", "4"])
    assert code == 0 and len(out.splitlines()) == 4
    code, obj = _json(["design", "corollary", "-t", "3", "-d", "9", "-n", "19"])
    assert code == EXIT_FAIL and not obj["feasible"]


@pytest.mark.parametrize(
    "argv, expected",
    [
        (["span", "-g", "25", "-A", "3,4"], EXIT_OK),
        (["check", "--claim", "spanning:1", "-g", "25", "-A", "3,4"], EXIT_FAIL),
        ([], EXIT_USAGE),
        (["frobnicate"], EXIT_USAGE),
        (["span", "--bogus", "-g", "5"], EXIT_USAGE),
        (["span", "-g", "0"], EXIT_USAGE),
        (["span", "-g", "x"], EXIT_USAGE),
        (["check", "--claim", "nope:3", "-g", "25", "-A", "1"], EXIT_USAGE),
        (["construct", "--family", "consec", "--n", "99", "--s", "2"], EXIT_USAGE),
        (["bound", "a", "-1", "2"], EXIT_USAGE),
        (["table", "p", "--param", "2", "--from", "5", "--to", "3", "--no-cache"], EXIT_USAGE),
        (["table", "p", "--param", "0", "--from", "1", "--to", "3", "--no-cache"], EXIT_USAGE),
        (["pmin", "-g", "25", "-s", "0", "--no-cache"], EXIT_USAGE),
        (["design", "verify", "-t", "3"], EXIT_USAGE),
        (["design", "verify", "--exact", "-t", "3"], EXIT_USAGE),
        (["pmin", "-g", "104", "-s", "3", "--budget", "5", "--no-cache"], EXIT_BUDGET),
        (["--version"], EXIT_OK),
    ],
)
def test_exit_code_matrix(argv, expected, capsys):
    assert dispatch(argv) == expected
    if expected == EXIT_USAGE:
        assert capsys.readouterr().err


def test_json_fixed_point():
    for argv in (
        ["ind", "-g", "25", "-A", "1,4,6,9,11"],
        ["span", "-g", "2,4", "-A", "1,0;0,1"],
        ["qmax", "-g", "38", "-t", "5", "--no-cache"],
        ["table", "q", "--param", "5", "--from", "1", "--to", "20", "--no-cache"],
    ):
        _, out = run(argv)
        assert json.dumps(json.loads(out), sort_keys=True) + "\n" == out


def test_run_config_invariants():
    with pytest.raises(UsageError):
        RunConfig("table", jobs=0)
    with pytest.raises(UsageError):
        RunConfig("design", tolerance=0.0)


def test_env_jobs(monkeypatch):
    monkeypatch.setenv("ABELSUM_JOBS", "3")
    args = build_parser().parse_args(["table", "p", "--param", "2", "--from", "1", "--to", "3"])
    assert RunConfig.from_args(args).jobs == 3
