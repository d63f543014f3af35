import json
import subprocess
import sys
from importlib import resources

import jsonschema
import pytest

from mukaidual import cli, verify


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json", "--no-timestamp")
    return code, json.loads(out)


@pytest.fixture(scope="module")
def schema():
    return json.loads(resources.files("mukaidual").joinpath("data/report.schema.json").read_text())


@pytest.fixture(autouse=True)
def no_config(monkeypatch):
    monkeypatch.delenv("MDL_CONFIG", raising=False)


def test_vector_text(capsys):
    code, out, _ = run(capsys, "vector", "--g", 6, 1, 1, 0)
    assert code == 0
    assert "mu = 2" in out and "sigma(v) = (0,1,1)" in out


def test_vector_excluded_class(capsys):
    code, doc = run_json(capsys, "vector", "--g", 7, 0, 0, 1)
    assert code == 0
    assert doc["results"][0]["in_V"] is False and doc["results"][0]["mu"] is None


def test_vector_json_lagrangian_target(capsys, schema):
    code, doc = run_json(capsys, "vector", "--g", 6, 3, 1, 2)
    jsonschema.validate(doc, schema)
    res = doc["results"][0]
    assert res["dim"] == 0
    grass = [t["grassmannian"] for t in res["contraction_targets"] if t["grassmannian"]]
    assert grass == [[2, 5]]


def test_vector_malformed(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["vector", "--g", "6", "1", "x", "0"])
    assert exc.value.code == 2
    code, _, err = run(capsys, "vector", "--g", 1, 1, 1, 0)
    assert code == 2 and "genus" in err


def test_big_integers_are_strings(capsys):
    g = 10**16
    code, doc = run_json(capsys, "vector", "--g", g, 1, 1, 0)
    dim = doc["results"][0]["dim"]
    assert isinstance(dim, str) and int(dim) == 2 * g
    assert doc["results"][0]["chi"] == 1
    assert cli.jsonable(2**53 - 1) == 2**53 - 1
    assert cli.jsonable(-(2**53)) == str(-(2**53))


def test_collection_dot(capsys):
    code, out, _ = run(capsys, "collection", "--g", 6, 1, 1, 0, "--format", "dot")
    assert code == 0
    nodes = [l for l in out.splitlines() if "[label=\"M(" in l]
    assert len(nodes) == 6
    assert "label=\"G(2,5)\"" in out
    solid = [l for l in out.splitlines() if "style=solid" in l]
    dashed = [l for l in out.splitlines() if "style=dashed" in l]
    assert len(solid) == 3 and len(dashed) == 3
    assert all("label=\"G(" in l for l in dashed)
    assert "M(3,1,2)^0 dim=0 codim=0" in out


def test_collection_mu_zero_single_node(capsys):
    code, out, _ = run(capsys, "collection", "--g", 6, 3, 1, 2, "--format", "dot")
    assert code == 0
    assert sum("[label=\"M(" in l for l in out.splitlines()) == 1
    assert "->" not in out


def test_collection_json_schema(capsys, schema):
    code, doc = run_json_collection(capsys)
    assert code == 0
    jsonschema.validate(doc, schema)
    assert doc["results"][0]["mu"] == 2


def run_json_collection(capsys):
    code, out, _ = run(capsys, "collection", "--g", 6, 1, 1, 0, "--format", "json", "--no-timestamp")
    return code, json.loads(out)


def test_collection_outside_h(capsys):
    code, _, err = run(capsys, "collection", "--g", 6, 3, 1, 3)
    assert code == 2 and "not in H" in err


def test_collection_table(capsys):
    code, out, _ = run(capsys, "collection", "--g", 4, 0, 1, 0)
    assert code == 0
    assert out.count("X(") == 3


def test_group_examples(capsys):
    code, out, _ = run(capsys, "group", "--g", 7)
    assert code == 0 and "isometry=yes" in out and "criterion=fail" in out
    code, doc = run_json(capsys, "group", "--g", 2)
    assert code == 0 and doc["results"][0]["checks"]["O(2) = sigma' tau' sigma tau"]
    code, doc = run_json(capsys, "group", "--g", 6, "--bfs-depth", 0)
    assert doc["results"][0]["bfs"] is None and doc["results"][0]["example"] is None


def test_group_bfs(capsys):
    code, doc = run_json(capsys, "group", "--g", 7, "--bfs-depth", 3)
    assert code == 0
    bfs = doc["results"][0]["bfs"]
    assert bfs["reached"] == len(bfs["images"]) and bfs["criterion_failures"] == []


def test_springer_examples(capsys):
    code, out, _ = run(capsys, "springer", 4, 2, "--samples", 1000, "--seed", 42)
    assert code == 0 and "failures: 0" in out and "round trip: OK" in out
    code, _, _ = run(capsys, "springer", 3, 2)
    assert code == 2


def test_springer_json(capsys):
    code, doc = run_json(capsys, "springer", 5, 2, "--samples", 40, "--seed", 1)
    res = doc["results"][0]
    assert code == 0 and res["failures"] == [] and sum(res["histogram"].values()) == 40


def test_verify_suite_json(capsys, schema):
    code, doc = run_json(capsys, "verify", "--suite", "lattice", "--seed", 42)
    assert code == 0
    jsonschema.validate(doc, schema)
    names = [c["name"] for c in doc["results"]]
    assert names == sorted(names)
    assert all("elapsed" not in c for c in doc["results"])


def test_verify_failure_exit_code(capsys, monkeypatch):
    monkeypatch.setitem(verify.SUITES["lattice"], "lattice.zz_broken", lambda cfg: (False, None, {"why": "forced"}))
    code, doc = run_json(capsys, "verify", "--suite", "lattice")
    assert code == 1
    broken = [c for c in doc["results"] if c["name"] == "lattice.zz_broken"][0]
    assert broken["status"] == "fail" and broken["counterexample"] == {"why": "forced"}


def test_verify_crash_is_failure(capsys, monkeypatch):
    def boom(cfg):
        raise RuntimeError("boom")

    monkeypatch.setitem(verify.SUITES["lattice"], "lattice.zz_crash", boom)
    code, _, out = run(capsys, "verify", "--suite", "lattice")
    assert code == 1


def test_timestamp_present_by_default(capsys):
    code, out, _ = run(capsys, "vector", "--g", 6, 1, 1, 0, "--json")
    assert "timestamp" in json.loads(out)


def test_config_precedence(capsys, monkeypatch, tmp_path):
    cfg = tmp_path / "mdl.cfg"
    cfg.write_text("# comment\nspringer_samples = 30\nseed=5\n")
    monkeypatch.setenv("MDL_CONFIG", str(cfg))
    code, doc = run_json(capsys, "springer", 4, 1)
    assert doc["params"] == {"h": 4, "t": 1, "samples": 30, "seed": 5}
    code, doc = run_json(capsys, "springer", 4, 1, "--samples", 12)
    assert doc["params"]["samples"] == 12 and doc["params"]["seed"] == 5


def test_config_errors(capsys, monkeypatch, tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("nonsense=1\n")
    monkeypatch.setenv("MDL_CONFIG", str(cfg))
    code, _, err = run(capsys, "springer", 4, 1)
    assert code == 2 and "unknown config key" in err
    cfg.write_text("seed=abc\n")
    assert run(capsys, "springer", 4, 1)[0] == 2
    monkeypatch.setenv("MDL_CONFIG", str(tmp_path / "missing.cfg"))
    assert run(capsys, "springer", 4, 1)[0] == 2


def test_console_script_entry_point():
    out = subprocess.run([sys.executable, "-m", "mukaidual.cli", "vector", "--g", "6", "1", "1", "0"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and "mu = 2" in out.stdout
