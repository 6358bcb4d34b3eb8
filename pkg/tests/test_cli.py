import json

import pytest
from click.testing import CliRunner

from redcheck import cli
from redcheck.suites import Record, RunResult

GRID = {"p": [2], "n": [3], "suites": ["odd"], "quad_random": 2, "series_samples": 2}


@pytest.fixture
def grid_file(tmp_path):
    path = tmp_path / "grid.json"
    path.write_text(json.dumps(GRID))
    return path


def run(*args):
    return CliRunner().invoke(cli.main, [str(a) for a in args])


def test_verify_passes_and_writes_reports(tmp_path, grid_file):
    out = tmp_path / "out"
    res = run("verify", "--grid", grid_file, "--out", out)
    assert res.exit_code == 0, res.output
    assert (out / "records.jsonl").exists() and (out / "summary.csv").exists()
    assert res.output.startswith("suite,pass,fail")


def test_second_run_hits_cache_and_no_cache_agrees(tmp_path, grid_file):
    out = tmp_path / "out"
    first = run("verify", "--grid", grid_file, "--out", out)
    second = run("verify", "--grid", grid_file, "--out", out)
    assert " 0 misses" in second.output and "0 hits" not in second.output
    nc = tmp_path / "nc"
    third = run("verify", "--grid", grid_file, "--out", nc, "--no-cache")
    assert first.exit_code == second.exit_code == third.exit_code == 0
    assert (out / "records.jsonl").read_bytes() == (nc / "records.jsonl").read_bytes()
    assert not (nc / "cache").exists()


def test_suite_argument_and_overrides(tmp_path, grid_file):
    out = tmp_path / "out"
    res = run("verify", "even", "--grid", grid_file, "--out", out, "--seed", 3, "--budget", 1e6, "--jobs", 2)
    assert res.exit_code == 0, res.output
    suites = {json.loads(line)["suite"] for line in (out / "records.jsonl").read_text().splitlines()}
    assert suites == {"even"}


@pytest.mark.parametrize("content", ['{"p": [4]}', '{"bogus": 1}', "not json"])
def test_configuration_errors_exit_2(tmp_path, content):
    path = tmp_path / "bad.json"
    path.write_text(content)
    res = run("verify", "--grid", path, "--out", tmp_path / "o")
    assert res.exit_code == 2
    assert "configuration error" in res.output


def test_missing_grid_and_bad_budget_exit_2(tmp_path):
    assert run("verify", "--grid", tmp_path / "none.json").exit_code == 2
    assert run("verify", "--budget", -1, "--out", tmp_path / "o").exit_code == 2


def test_failure_exits_1(tmp_path, grid_file, monkeypatch):
    bad = RunResult([Record("odd", {"n": 3}, "id", "1", "2", "fail")])
    monkeypatch.setattr(cli, "run_suite", lambda *a, **k: bad)
    out = tmp_path / "out"
    assert run("verify", "--grid", grid_file, "--out", out).exit_code == 1
    rep = run("report", "--out", out, "--failures")
    assert rep.exit_code == 1
    assert "odd: fail=1" in rep.output and '"verdict":"fail"' in rep.output


def test_report(tmp_path, grid_file):
    out = tmp_path / "out"
    run("verify", "--grid", grid_file, "--out", out)
    rep = run("report", "--out", out)
    assert rep.exit_code == 0 and rep.output.startswith("odd: pass=")
    assert run("report", "--out", tmp_path / "nothing").exit_code == 2


def test_cache_inspect_and_clear(tmp_path, grid_file):
    out = tmp_path / "out"
    run("verify", "--grid", grid_file, "--out", out)
    info = run("cache", "inspect", "--cache-dir", out / "cache")
    assert info.exit_code == 0 and " 0 corrupt" in info.output and not info.output.startswith("0 entries")
    cleared = run("cache", "clear", "--cache-dir", out / "cache")
    assert cleared.output.startswith("removed ")
    assert run("cache", "inspect", "--cache-dir", out / "cache").output.startswith("0 entries")
