import json

import pytest

from nevkit.cli import (
    EXIT_FAILED,
    EXIT_INVALID,
    EXIT_OK,
    EXIT_UNDETERMINED,
    RunOptions,
    bundled_scenario_paths,
    classify,
    main,
)
from nevkit.criterion import CheckReport, FAILS, HOLDS, UNDETERMINED
from nevkit.scenario import scenario_from_json


ATOMIC = {
    "name": "atoms",
    "dimension": 2,
    "measure": {"dimension": 2,
                "atoms": [{"point": [0.5, 0.0], "mass": 0.6},
                          {"point": [-0.3, 0.25], "mass": 0.4}]},
    "radii": {"r": 1.0, "R": 2.0, "r0": 0.5},
    "checks": ["statement_IV", "statement_V"],
    "grid": 9,
}

SHELL_PJ = {
    "name": "shellpj",
    "dimension": 2,
    "measure": {"dimension": 2,
                "spheres": [{"center": [0.0, 0.0], "radius": 0.5, "mass": 1.0}]},
    "functions": [{"label": "u", "dimension": 2,
                   "charges": [{"point": [0.3, 0.1], "weight": 1.0}]}],
    "radii": {"r": 0.75, "R": 1.0},
    "checks": ["poisson_jensen"],
    "grid": 9,
}


def write_scenario(tmp_path, data, name="sc.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


def test_list_bundled(capsys):
    assert main(["list"]) == EXIT_OK
    out = capsys.readouterr().out
    for path in bundled_scenario_paths():
        assert path.stem in out


def test_run_bundled_outputs(tmp_path, capsys):
    out_dir = tmp_path / "out"
    code = main(["run", "--bundled", "--out", str(out_dir)])
    assert code == EXIT_OK
    text = capsys.readouterr().out
    assert "holds" in text

    lines = (out_dir / "reports.jsonl").read_text().splitlines()
    assert len(lines) >= 18
    for line in lines:
        rec = json.loads(line)  # strict JSON, including infinities as strings
        assert {"scenario", "name", "lhs", "rhs", "verdict"} <= set(rec)

    summary = (out_dir / "summary.csv").read_text().splitlines()
    assert summary[0] == "name,lhs,rhs,margin,verdict"
    assert len(summary) == len(lines) + 1

    # plot data: one counting grid per planar scenario
    for path in bundled_scenario_paths():
        assert (out_dir / f"{path.stem}.counting.csv").exists()


def test_run_unexpected_failure_exit_code(tmp_path):
    sc = write_scenario(tmp_path, ATOMIC)
    code = main(["run", "--scenario", sc, "--out", str(tmp_path / "o1")])
    assert code == EXIT_FAILED


def test_run_expect_fail_flag(tmp_path):
    sc = write_scenario(tmp_path, ATOMIC)
    code = main(["run", "--scenario", sc, "--out", str(tmp_path / "o2"),
                 "--expect-fail", "statement_IV,statement_V"])
    assert code == EXIT_OK


def test_run_declared_expect_fail_in_file(tmp_path):
    data = dict(ATOMIC, expect_fail=["statement_IV", "statement_V"])
    sc = write_scenario(tmp_path, data)
    assert main(["run", "--scenario", sc, "--out", str(tmp_path / "o3")]) == EXIT_OK


def test_run_expected_fail_that_holds_is_unexpected(tmp_path):
    data = dict(SHELL_PJ, expect_fail=["poisson_jensen"])
    sc = write_scenario(tmp_path, data)
    code = main(["run", "--scenario", sc, "--out", str(tmp_path / "o4")])
    assert code == EXIT_FAILED


def test_invalid_scenario_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    code = main(["run", "--scenario", str(bad), "--out", str(tmp_path / "o5")])
    assert code == EXIT_INVALID
    assert capsys.readouterr().err


def test_validation_error_exit_code(tmp_path):
    data = dict(ATOMIC, radii={"r": 2.0, "R": 1.0})
    sc = write_scenario(tmp_path, data)
    code = main(["run", "--scenario", sc, "--out", str(tmp_path / "o6")])
    assert code == EXIT_INVALID


def test_classify_precedence():
    def rep(name, verdict):
        return CheckReport(name=name, lhs=0.0, rhs=1.0, residual=-1.0,
                           tolerance=1e-7, verdict=verdict)

    sc = scenario_from_json(dict(SHELL_PJ))
    plain = RunOptions()
    ok = classify([(sc, [rep("poisson_jensen[u:0]", HOLDS)])], plain)
    assert ok == EXIT_OK
    und = classify([(sc, [rep("poisson_jensen[u:0]", UNDETERMINED)])], plain)
    assert und == EXIT_UNDETERMINED
    failed = classify([(sc, [rep("poisson_jensen[u:0]", FAILS),
                             rep("poisson_jensen[u:1]", UNDETERMINED)])], plain)
    assert failed == EXIT_FAILED
    expected = classify([(sc, [rep("poisson_jensen[u:0]", FAILS)])],
                        RunOptions(expect_fail=("poisson_jensen",)))
    assert expected == EXIT_OK
    # an unrelated expectation does not excuse the failure
    other = classify([(sc, [rep("poisson_jensen[u:0]", FAILS)])],
                     RunOptions(expect_fail=("lemma3",)))
    assert other == EXIT_FAILED


def test_seed_changes_default_sample_points(tmp_path, monkeypatch):
    sc = write_scenario(tmp_path, SHELL_PJ)

    def lhs_values(out_name, seed):
        if seed is None:
            monkeypatch.delenv("NEVKIT_SEED", raising=False)
        else:
            monkeypatch.setenv("NEVKIT_SEED", str(seed))
        out = tmp_path / out_name
        assert main(["run", "--scenario", sc, "--out", str(out)]) == EXIT_OK
        return [json.loads(line)["lhs"]
                for line in (out / "reports.jsonl").read_text().splitlines()]

    base = lhs_values("s0", None)
    again = lhs_values("s0b", None)
    other = lhs_values("s1", 1)
    assert base == again
    assert base != other


def test_jobs_flag_is_deterministic(tmp_path):
    src = bundled_scenario_paths()
    out1, out2 = tmp_path / "j1", tmp_path / "j2"
    args1 = ["run", "--scenario", str(src[1]), "--out", str(out1), "--jobs", "1"]
    args2 = ["run", "--scenario", str(src[1]), "--out", str(out2), "--jobs", "2"]
    assert main(args1) == main(args2)
    assert (out1 / "reports.jsonl").read_text() == (out2 / "reports.jsonl").read_text()


def test_sweep_writes_long_format(tmp_path):
    sc = write_scenario(tmp_path, SHELL_PJ)
    out = tmp_path / "sweep"
    code = main(["sweep", "--scenario", sc, "--param", "R",
                 "--values", "1.0,1.25", "--out", str(out)])
    assert code == EXIT_OK
    rows = (out / "sweep.csv").read_text().splitlines()
    assert rows[0].startswith("scenario,parameter,value,name")
    assert any(",1.25," in row or ",1.25" in row.split(",")[2] for row in rows[1:])


def test_sweep_rejects_invalid_values(tmp_path):
    sc = write_scenario(tmp_path, SHELL_PJ)
    code = main(["sweep", "--scenario", sc, "--param", "R",
                 "--values", "0.1", "--out", str(tmp_path / "s")])
    # R = 0.1 < r makes the scenario invalid
    assert code == EXIT_INVALID
