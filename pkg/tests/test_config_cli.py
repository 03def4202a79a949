import json
from fractions import Fraction

import pytest

from qspectral.cli import main
from qspectral.config import DEFAULT_CONFIG_TEXT, SUITES, ConfigError, RunConfig, parse_config
from qspectral.suites import dumps_report, run_suite


def test_default_config():
    cfg = parse_config(DEFAULT_CONFIG_TEXT)
    assert cfg == RunConfig()
    assert cfg.suites == SUITES and cfg.q == Fraction(1, 2) and cfg.c == 2


def test_config_with_section_and_partial_keys():
    cfg = parse_config("[run]\nq_num = 3\nq_den = 4\nc_num = 1\nc_den = 10\nsuites = sphere\n")
    assert cfg.q == Fraction(3, 4) and cfg.c == Fraction(1, 10) and cfg.suites == ("sphere",)


@pytest.mark.parametrize("text,msg", [
    ("q_num = 2\nq_den = 1\n", "q must lie in"),
    ("c_num = -1\n", "c must be positive"),
    ("suites = algebra, nonsense\n", "unknown suites"),
    ("windows = 2\n", "windows"),
    ("q_num = x\n", "integer"),
    ("colour = red\n", "unknown keys"),
    ("q_den = 0\n", "nonzero"),
])
def test_config_errors(text, msg):
    with pytest.raises(ConfigError, match=msg):
        parse_config(text)


def test_verify_bad_config_exits_2(tmp_path, capsys):
    path = tmp_path / "bad.cfg"
    path.write_text("q_num = 2\nq_den = 1\n")
    assert main(["verify", str(path)]) == 2
    assert "q must lie in (0,1)" in capsys.readouterr().err


def test_verify_missing_config_exits_2(tmp_path):
    assert main(["verify", str(tmp_path / "nope.cfg")]) == 2


def test_verify_single_suite_writes_one_report(tmp_path, capsys):
    cfg = tmp_path / "f.cfg"
    cfg.write_text("suites = sphere\n")
    out = tmp_path / "reports"
    assert main(["verify", str(cfg), "--out", str(out)]) == 0
    files = sorted(p.name for p in out.iterdir())
    assert files == ["sphere.json"]
    rep = json.loads((out / "sphere.json").read_text())
    assert rep["passed"] and rep["suite"] == "sphere"


def test_reports_are_deterministic():
    cfg = RunConfig(suites=("l2",))
    assert dumps_report(run_suite("l2", cfg)) == dumps_report(run_suite("l2", cfg))


@pytest.mark.parametrize("argv,want", [
    (["index", "--which", "u", "--window", "8"], 1),
    (["index", "--which", "sphere"], -1),
    (["index", "--which", "multiplicity", "-3", "--window", "8"], -3),
    (["index", "--which", "canonical", "--window", "8"], 1),
])
def test_index_command(argv, want, capsys):
    assert main(argv) == 0
    out = capsys.readouterr().out.splitlines()
    assert int(out[0]) == want
    assert "stable" in out[1]


def test_index_json(capsys):
    assert main(["index", "--which", "sphere", "--json"]) == 0
    d = json.loads(capsys.readouterr().out)
    assert d["index"] == -1 and len(d["windows"]) == 2


@pytest.mark.parametrize("argv", [
    ["index", "--which", "multiplicity"],
    ["index", "--which", "multiplicity", "0"],
    ["index", "--which", "bogus"],
    ["index", "--which", "u", "--q", "3/2"],
])
def test_index_usage_errors(argv):
    assert main(argv) == 2


def test_spectrum_csv(capsys):
    assert main(["spectrum", "--dirac", "generic", "--lambda", "10"]) == 0
    lines = capsys.readouterr().out.splitlines()
    rows = dict(l.split(",") for l in lines[1:22])
    assert [int(rows[str(n)]) for n in range(0, 11)] == list(range(1, 12))
    assert [int(rows[str(-n)]) for n in range(1, 11)] == list(range(1, 11))


def test_spectrum_convergence(capsys):
    assert main(["spectrum", "--p", "3", "--lambda", "8,16,32"]) == 0
    assert "trend,converging" in capsys.readouterr().out


def test_spectrum_empty_lambda_is_usage_error():
    assert main(["spectrum", "--lambda", ""]) == 2
    assert main(["spectrum"]) == 2


def test_spectrum_from_csv(tmp_path, capsys):
    path = tmp_path / "d.csv"
    path.write_text("i,j,value\n")
    # an all-zero spectrum is rejected
    assert main(["spectrum", "--dirac", str(path), "--lambda", "4"]) == 2


def test_suite_verbs(capsys):
    assert main(["l2"]) == 0
    assert "[PASS] suite l2" in capsys.readouterr().out
    assert main(["sphere", "--q", "3/4", "--c", "1/10", "--json"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["passed"] and rep["reports"][0]["config"]["c"] == "1/10"
