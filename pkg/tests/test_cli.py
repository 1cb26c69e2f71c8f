import io
import json

import jsonschema
import pytest

from artifact.cli import SCHEMA, run
from artifact.sat24 import SAMPLE_FORMULA, serialize_formula
from conftest import unsat_fixture

VALIDATOR = jsonschema.Draft202012Validator(json.loads(SCHEMA.read_text()))


def call(*argv):
    buf = io.StringIO()
    code = run(list(argv), stdout=buf)
    return code, buf.getvalue()


def call_json(*argv):
    code, text = call(*argv, "--json")
    doc = json.loads(text)
    VALIDATOR.validate(doc)
    assert doc["exit_code"] == code
    return code, doc


@pytest.fixture
def files(tmp_path):
    (tmp_path / "tri.seg").write_text("s a -20 0 20 1\ns b -20 -20 20 20\ns c 20 -21 -20 22\n")
    (tmp_path / "sample.f24").write_text(serialize_formula(SAMPLE_FORMULA))
    (tmp_path / "unsat.f24").write_text(serialize_formula(unsat_fixture()))
    (tmp_path / "q3.graph").write_text("0-1,1-3,3-2,2-0,4-5,5-7,7-6,6-4,0-4,1-5,2-6,3-7")
    return tmp_path


def test_cover_solve_and_check(files):
    code, out = call("cover", "solve", "--g", str(files / "q3.graph"), "--h", "name:K4")
    assert code == 0 and out.startswith("m 0 ")
    (files / "f.map").write_text(out)
    code, _ = call("cover", "check", "--g", str(files / "q3.graph"), "--h", "name:K4", "--map", str(files / "f.map"))
    assert code == 0


def test_no_and_budget_are_distinct():
    assert call("cover", "solve", "--g", "name:K3,3", "--h", "name:K4")[0] == 1
    code, doc = call_json("cover", "solve", "--g", "name:icosahedron", "--h", "name:K6", "--budget-nodes", "1")
    assert code == 3 and doc["status"] == "budget"


def test_enumerate_json():
    code, doc = call_json("cover", "enumerate", "--g", "name:C6", "--h", "name:C3")
    assert code == 0 and doc["result"]["count"] == 6


def test_input_errors_exit_two(files):
    (files / "bad.graph").write_text("n 2\ne 0 0\n")
    assert call("cover", "solve", "--g", str(files / "bad.graph"), "--h", "name:K2")[0] == 2
    assert call("cover", "solve", "--g", str(files / "nope"), "--h", "name:K2")[0] == 2
    assert call("frobnicate")[0] == 2
    assert call("cover", "solve", "--g", "name:K4")[0] == 2


def test_planar_and_color():
    assert call("planar", "--g", "name:K5")[0] == 1
    assert call_json("planar", "--g", "name:Q3")[1]["result"]["planar"]
    assert call("color", "--g", "name:K4", "--k", "3")[0] == 1
    assert call("color", "--g", "name:K4", "--k", "4")[0] == 0


def test_arrangement_commands(files):
    code, out = call("arrange", "crossings", "--in", str(files / "tri.seg"))
    assert code == 0 and len(out.splitlines()) == 3
    code, doc = call_json("arrange", "igraph", "--in", str(files / "tri.seg"))
    assert doc["result"]["edges"] == [[0, 1], [0, 2], [1, 2]]
    (files / "deg.seg").write_text("s a 0 0 2 2\ns b 0 2 2 0\ns c 1 0 1 2\n")
    assert call("arrange", "validate", "--in", str(files / "deg.seg"))[0] == 1
    assert call("arrange", "crossings", "--in", str(files / "deg.seg"))[0] == 2


def test_sat_commands(files):
    assert call("sat", "solve", "--in", str(files / "sample.f24"))[0] == 0
    assert call("sat", "solve", "--in", str(files / "unsat.f24"))[0] == 1
    code, doc = call_json("sat", "gen", "--count", "4", "--seed", "2")
    assert code == 0 and len(doc["result"]["instances"]) == 4


def test_sat_pipeline(files):
    g, p = files / "g.graph", files / "g.json"
    assert call("reduce", "sat", "--in", str(files / "sample.f24"), "--out", str(g), "--provenance", str(p))[0] == 0
    code, col = call("cover", "dumbbell", "--g", str(g))
    assert code == 0
    (files / "g.col").write_text(col)
    code, doc = call_json("extract", "assignment", "--g", str(g), "--provenance", str(p),
                          "--witness", str(files / "g.col"))
    assert code == 0 and len(doc["result"]["assignment"]) == 6
    (files / "a.json").write_text("[true, true, true, false, false, false]")
    assert call("lift", "assignment", "--g", str(g), "--provenance", str(p), "--witness", str(files / "a.json"))[0] == 0


def test_segment_pipeline(files):
    g, p = files / "r.graph", files / "r.json"
    assert call("reduce", "seg", "--target", "K4plus", "--in", str(files / "tri.seg"), "--out", str(g),
                "--provenance", str(p))[0] == 0
    (files / "c.json").write_text('{"a": 1, "b": 2, "c": 3}')
    assert call("lift", "coloring", "--g", str(g), "--provenance", str(p), "--witness", str(files / "c.json"),
                "--out", str(files / "l.map"))[0] == 0
    code, doc = call_json("extract", "coloring", "--g", str(g), "--provenance", str(p),
                          "--witness", str(files / "l.map"))
    assert doc["result"]["coloring"] == {"a": 1, "b": 2, "c": 3}


def test_missing_gadget_exits_four(files, tmp_path):
    (tmp_path / "empty").mkdir()
    code, doc = call_json("reduce", "seg", "--target", "K4plus", "--in", str(files / "tri.seg"),
                          "--catalog", str(tmp_path / "empty"))
    assert code == 4 and doc["status"] == "inconsistent"


def test_gadget_commands():
    code, doc = call_json("gadget", "list")
    assert code == 0 and any(g["name"] == "k6-auxiliary" for g in doc["result"]["gadgets"])
    code, out = call("gadget", "verify", "--name", "k6-auxiliary")
    assert code == 0 and "PASS" in out
    assert call("gadget", "verify", "--name", "nope")[0] == 2
    code, doc = call_json("gadget", "synth", "--like", "dumbbell-cube-face", "--max-vertices", "4")
    assert code == 0 and doc["result"]["candidates"]


def test_export_dot(files):
    code, out = call("export", "dot", "--g", "name:K4")
    assert code == 0 and out.startswith("graph")
