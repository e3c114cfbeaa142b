import json
from importlib import resources
from pathlib import Path

import jsonschema
import pytest
from click.testing import CliRunner

from cosimp.cli import main

MODELS = Path(__file__).resolve().parent.parent / "models"


def schema(name):
    return json.loads(resources.files("cosimp").joinpath("schemas", name).read_text())


def run(*args):
    return CliRunner().invoke(main, [str(a) for a in args])


def test_graph_text():
    r = run("graph", "--s", 1, "--k", 2)
    assert r.exit_code == 0
    assert "24 vertices, 24 edges, 4 components" in r.output


def test_graph_json_and_dot():
    r = run("--format", "json", "graph", "--s", 2, "--k", 2)
    assert r.exit_code == 0
    assert json.loads(r.output)["vertices"] == 60
    r = run("--format", "dot", "graph", "--s", 1, "--k", 1)
    assert r.exit_code == 0 and r.output.lstrip().startswith(("graph", "digraph"))


def test_vertex_budget_is_enforced():
    assert run("graph", "--s", 3, "--k", 4, "--vertex-budget", 10).exit_code == 2


def test_perm_face_counts():
    r = run("--format", "json", "perm", "--k", 3)
    assert r.exit_code == 0
    assert json.loads(r.output)["face_counts"] == {"1": 1, "2": 14, "3": 36, "4": 24}


def test_iso_verdicts():
    assert run("iso", "--left", "gphi:1:2", "--right", "component:1:3").exit_code == 0
    assert run("iso", "--left", "graph:1:2", "--right", "cayley:3").exit_code == 1
    assert run("iso", "--left", "bogus", "--right", "cayley:3").exit_code == 2


def test_words_fuzz_is_reproducible():
    a = run("--format", "json", "--seed", 7, "words", "--fuzz", 20, "--models", 3)
    b = run("--format", "json", "--seed", 7, "words", "--fuzz", 20, "--models", 3)
    assert a.exit_code == 0 and a.output == b.output


def test_complex_json_validates():
    r = run("--format", "json", "complex", "--model", MODELS / "toy_klein_gf2.json", "--top", 4)
    assert r.exit_code == 0
    rep = json.loads(r.output)
    assert r.output == run("--format", "json", "complex", "--model", MODELS / "toy_klein_gf2.json",
                           "--top", 4).output
    assert json.dumps(rep)


def test_dual_path_complex():
    r = run("complex", "--model", MODELS / "idempotent_dual.json", "--dual-path")
    assert r.exit_code == 0


def test_deform_null_obstruct():
    r = run("--format", "json", "deform", "--model", MODELS / "toy_z2.json", "--data", MODELS / "null.json",
            "--obstruct")
    assert r.exit_code == 0
    rep = json.loads(r.output)
    jsonschema.validate(rep, schema("obstruction_report.json"))
    assert rep["extension"] == "present" and rep["class_vanishes"]


def test_deform_klein_is_obstructed():
    r = run("--format", "json", "deform", "--model", MODELS / "toy_klein_gf2.json",
            "--data", MODELS / "klein_x1y2.json", "--obstruct")
    assert r.exit_code == 0
    rep = json.loads(r.output)
    jsonschema.validate(rep, schema("obstruction_report.json"))
    assert rep["extension"] == "absent" and rep["certificate"]["inconsistent"]
    assert run("deform", "--model", MODELS / "toy_klein_gf2.json", "--data", MODELS / "klein_x1y2.json",
               "--extend").exit_code == 1


def test_deform_classify():
    r = run("--format", "json", "deform", "--model", MODELS / "toy_klein_gf2.json", "--classify")
    assert r.exit_code == 0
    assert json.loads(r.output)["dim_h2"] == 3


def test_invalid_deformation_check_exits_one(tmp_path):
    bad = {"order": 1, "fhat_k": {"1": [{"objects": ["*", "*", "*"], "arrows": [1, 1], "coords": [[0, "1/1"]]}]}}
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(bad))
    r = run("deform", "--model", MODELS / "toy_klein_gf2.json", "--data", p, "--check")
    assert r.exit_code == 1


def test_extension_output_validates():
    r = run("--format", "json", "deform", "--model", MODELS / "toy_z2.json", "--data", MODELS / "null.json",
            "--extend")
    assert r.exit_code == 0
    jsonschema.validate(json.loads(r.output)["extended"], schema("deformation.json"))


@pytest.mark.parametrize("name, kind", [("toy_z2.json", "toy_model.json"), ("toy_klein_gf2.json", "toy_model.json"),
                                        ("null.json", "deformation.json"), ("klein_x1y2.json", "deformation.json")])
def test_sample_files_validate(name, kind):
    jsonschema.validate(json.loads((MODELS / name).read_text()), schema(kind))


def test_usage_errors():
    assert run("graph", "--s", 0, "--k", 1).exit_code == 2
    assert run("deform", "--model", MODELS / "toy_z2.json").exit_code == 2
    assert run("--seed", "abc", "perm", "--k", 2).exit_code == 2


def test_output_file(tmp_path):
    out = tmp_path / "g.json"
    r = run("--format", "json", "-o", out, "perm", "--k", 2)
    assert r.exit_code == 0 and json.loads(out.read_text())["vertices"] == 6


def test_selftest_subset():
    r = run("selftest", "--only", 1, "--only", 3)
    assert r.exit_code == 0 and r.output.count("[PASS]") == 2
