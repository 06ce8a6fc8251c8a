import json

import jsonschema
import pytest

from frobrecip.cli import build_document, load_schema, main
from frobrecip.suites import SuiteConfig, run_scenario


@pytest.fixture(scope="module")
def spherical_report(tmp_path_factory):
    out = tmp_path_factory.mktemp("cli") / "out.json"
    code = main(["run", "--scenario", "spherical_harmonics", "--param", "l=3", "--seed", "42",
                 "--report", str(out), "--format", "json"])
    return code, out


def test_list(capsys):
    assert main(["list"]) == 0
    text = capsys.readouterr().out
    assert "spherical_harmonics" in text and "torus_kms" in text


def test_schema_command(capsys):
    assert main(["schema"]) == 0
    assert json.loads(capsys.readouterr().out)["$schema"].startswith("https://json-schema.org")


def test_spherical_run_validates(spherical_report):
    code, out = spherical_report
    assert code == 0
    doc = json.loads(out.read_text())
    jsonschema.validate(doc, load_schema())
    assert doc["overall"] == "PASS" and doc["matched"] == doc["total"]
    assert doc["scenarios"][0]["params"] == {"l": "3"}


@pytest.mark.parametrize("argv", [
    ["run", "--scenario", "torus_kms", "--param", "alpha=1.0"],
    ["run", "--scenario", "torus_kms", "--param", "alpha=sqrt(9)"],
    ["run", "--scenario", "spherical_harmonics", "--param", "l=0"],
    ["run", "--scenario", "spherical_harmonics", "--param", "alpha=sqrt(2)"],
    ["run", "--scenario", "spherical_harmonics", "--param", "l"],
    ["run", "--scenario", "no_such_scenario"],
    ["run", "--samples", "5"],
    ["run", "--pass-tol", "1e-2", "--fail-tol", "1e-3"],
    ["run", "--format", "yaml"],
    ["frobnicate"],
])
def test_usage_errors_exit_2(argv, capsys):
    assert main(argv) == 2
    assert "error" in capsys.readouterr().err


def test_bad_env_seed(monkeypatch):
    monkeypatch.setenv("VERIFY_SEED", "abc")
    assert main(["run", "--scenario", "peter_weyl", "--samples", "10"]) == 2


def _json_run(tmp_path, name, *extra):
    out = tmp_path / name
    code = main(["run", "--scenario", "peter_weyl", "--samples", "10", "--format", "json",
                 "--report", str(out), *extra])
    return code, out.read_bytes()


def test_env_seed_honored(tmp_path, monkeypatch):
    monkeypatch.setenv("VERIFY_SEED", "77")
    code, raw = _json_run(tmp_path, "a.json")
    assert code == 0 and json.loads(raw)["config"]["seed"] == 77
    _, explicit = _json_run(tmp_path, "b.json", "--seed", "77")
    assert raw == explicit


def test_byte_identical_reports(tmp_path):
    _, a = _json_run(tmp_path, "a.json", "--seed", "3")
    _, b = _json_run(tmp_path, "b.json", "--seed", "3")
    assert a == b


def test_mismatch_exits_1(capsys):
    assert main(["run", "--scenario", "peter_weyl", "--samples", "10", "--pass-tol", "1e-30"]) == 1
    assert "XX" in capsys.readouterr().out


def test_text_output(capsys):
    assert main(["run", "--scenario", "so2_plane_counterexample", "--samples", "10"]) == 0
    out = capsys.readouterr().out
    assert "overall PASS" in out and "expected FAIL" in out


def test_document_shape():
    res = run_scenario("so2_plane_counterexample", SuiteConfig(samples=10))
    doc = build_document(SuiteConfig(samples=10), [res])
    jsonschema.validate(doc, load_schema())
    assert doc["config"]["scenarios"] == ["so2_plane_counterexample"]
