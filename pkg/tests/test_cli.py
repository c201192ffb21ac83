"""Command-line runs, exit codes and report schema."""

import io
import json
import subprocess
import sys
from importlib import resources

import jsonschema
import pytest

from dopalg import cli

SCHEMA = json.loads(resources.files("dopalg").joinpath("data", "report_schema.json").read_text())
VESSIOT = str(resources.files("dopalg").joinpath("data", "vessiot.dop"))
PENDULUM = str(resources.files("dopalg").joinpath("data", "pendulum.dop"))


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def report(*argv, code=0):
    rc, out, err = call(*argv, "--json")
    assert rc == code, err
    data = json.loads(out)
    jsonschema.validate(data, SCHEMA)
    return data


def test_resolve_killing_4():
    r = report("resolve", "--catalog", "killing", "--n", "4")
    assert r["status"] == "ok"
    assert r["results"]["ranks"] == [10, 20, 20, 6, 0]
    assert r["results"]["orders"] == [1, 2, 1, 1]


def test_param_test_einstein_4():
    code, out, _ = call("param-test", "--catalog", "einstein", "--n", "4")
    assert code == 0
    assert "not parametrizable; D₁′ has 20 generators" in out


def test_ext_vessiot_c0():
    code, out, _ = call("ext", "--file", VESSIOT, "--param", "c=0", "--i", "1")
    assert code == 0
    assert out.startswith("ext^1 ≠ 0, witness")


def test_pendulum_equal_lengths_by_param():
    r = report("param-test", "--file", PENDULUM, "--param", "l2=l1")
    assert r["results"]["verdict"] == "not_parametrizable"
    assert len(r["results"]["torsion"]) == 1


@pytest.mark.parametrize(
    "argv",
    [
        ("adjoint", "--catalog", "airy"),
        ("cc", "--catalog", "killing", "--n", "3"),
        ("resolve", "--catalog", "conformal_killing", "--n", "3"),
        ("param-test", "--catalog", "cauchy", "--n", "2"),
        ("ext", "--catalog", "killing", "--n", "2", "--i", "2"),
        ("spencer", "--catalog", "killing", "--n", "3"),
        ("euler", "--catalog", "killing", "--n", "3"),
        ("catalog", "--catalog", "killing", "--n", "2"),
    ],
)
def test_reports_are_schema_valid_and_reproducible(argv):
    a = report(*argv)
    b = report(*argv)
    assert a["results"] == b["results"]
    assert a.get("input") == b.get("input")


def test_human_output_for_every_command():
    for argv in (("adjoint", "--catalog", "airy"), ("euler", "--catalog", "killing", "--n", "3"),
                 ("spencer", "--catalog", "killing", "--n", "2"), ("catalog",)):
        code, out, _ = call(*argv)
        assert code == 0 and out.strip()
    assert call("euler", "--catalog", "killing", "--n", "3")[1].strip() == "3 - 6 + 6 - 3 = 0"


def test_degree_cap_exits_2():
    code, out, _ = call("resolve", "--catalog", "killing", "--n", "4", "--degree-cap", "1", "--json")
    assert code == 2
    data = json.loads(out)
    jsonschema.validate(data, SCHEMA)
    assert data["status"] == "budget_exceeded"


def test_degree_cap_from_environment(monkeypatch):
    monkeypatch.setenv("DOPALG_DEGREE_CAP", "1")
    assert call("resolve", "--catalog", "killing", "--n", "4")[0] == 2


@pytest.mark.parametrize(
    "argv",
    [
        ("resolve", "--catalog", "nope", "--n", "4"),
        ("resolve", "--catalog", "killing"),
        ("resolve",),
        ("resolve", "--catalog", "killing", "--n", "3", "--file", VESSIOT),
        ("ext", "--file", VESSIOT, "--param", "c"),
        ("ext", "--file", VESSIOT, "--param", "q=1", "--i", "1"),
        ("ext", "--file", "/nonexistent.dop", "--i", "1"),
        ("conformal",),
        ("resolve", "--catalog", "conformal_killing", "--n", "2"),
        ("resolve", "--catalog", "killing", "--n", "3", "--signature", "1,1"),
    ],
)
def test_input_errors_exit_1(argv):
    code, out, err = call(*argv)
    assert code == 1
    assert out == ""
    assert err.startswith("dopalg:")


def test_dsl_error_reports_position(tmp_path):
    f = tmp_path / "bad.dop"
    f.write_text("vars x;\nunknowns u;\nsystem s {\n  eq: d[y]u;\n}\n")
    code, _, err = call("cc", "--file", str(f))
    assert code == 1
    assert "4:" in err


def test_check_all_single_criterion():
    r = report("check-all", "--only", "1")
    assert [c["index"] for c in r["results"]["criteria"]] == [1]
    assert r["results"]["criteria"][0]["status"] == "PASS"


def test_console_script_runs():
    proc = subprocess.run([sys.executable, "-m", "dopalg.cli", "euler", "--catalog", "killing", "--n", "2"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout.strip() == "2 - 3 + 1 = 0"


def test_docs_schema_matches_package():
    from pathlib import Path

    docs = Path(__file__).resolve().parents[1] / "docs" / "report_schema.json"
    assert json.loads(docs.read_text()) == SCHEMA
