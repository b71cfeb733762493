import io
import json
import sys

import pytest

from mumford.cli import run


def call(argv, stdin=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    out = io.StringIO()
    code = run(argv, out)
    return code, out.getvalue()


def test_bound_exact_output():
    code, out = call(["bound", "--p", "2", "--", "2", "2"])
    assert code == 0
    assert out.strip() == '{"threshold_val":"2","bound":"|2|^2"}'
    code, out = call(["bound", "--p", "3", "6", "2"])
    assert json.loads(out)["threshold_val"] == "1/2"


def test_classify_tate(monkeypatch):
    code, out = call(["classify"], json.dumps({"p": 2, "lambda": "9"}), monkeypatch)
    data = json.loads(out)
    assert code == 0 and data["is_mumford"] and data["tate"]["consistent"]
    code, out = call(["classify"], json.dumps({"p": 2, "lambda": "5"}), monkeypatch)
    data = json.loads(out)
    assert not data["is_mumford"] and data["failure_reason"] == "BoundaryEquality"


def test_classify_terms(monkeypatch):
    payload = {"p": 2, "degree": 2, "terms": [
        {"point": "0", "exp": 1}, {"point": "inf", "exp": 1}, {"point": "1", "exp": 1},
        {"point": "9", "exp": 1}, {"point": "1/8", "exp": 1}, {"point": "9/64", "exp": 1}]}
    code, out = call(["classify", "--mode", "many"], json.dumps(payload), monkeypatch)
    assert code == 0 and json.loads(out)["is_mumford"]


def test_synthesize_then_verify(monkeypatch, tmp_path):
    code, out = call(["synthesize", "--p", "3", "--d", "3", "--e", "3", "--lambda", "28"])
    assert code == 0
    pres = json.loads(out)
    assert len(pres["generators"]) == 2
    path = tmp_path / "pres.json"
    path.write_text(out)
    code, out = call(["verify", "--in", str(path)])
    report = json.loads(out)
    assert code == 0 and report["status"] == "certified" and report["rank"] == 2
    code, out = call(["verify"], path.read_text(), monkeypatch)
    assert json.loads(out)["status"] == "certified"
    code, out = call(["verify", "--p", "2", "--d", "2", "--e", "2", "--lambda", "5"])
    assert json.loads(out)["status"] == "refuted"


def test_tree_json_and_dot():
    code, out = call(["tree", "--p", "3", "--m", "3", "--n", "3", "--lambda-val", "2"])
    data = json.loads(out)
    assert code == 0 and data["dist_x_v"] == "1/2" and data["dist_v_w"] == "1"
    code, out = call(["tree", "--p", "3", "--m", "3", "--n", "3", "--lambda-val", "2", "--format", "dot"])
    assert code == 0 and out.startswith("graph")
    code, out = call(["tree", "--p", "2", "--m", "2", "--n", "2", "--lambda-val", "2"])
    assert code == 1 and json.loads(out)["status"] == "error"


def test_oracle():
    code, out = call(["oracle", "--orders", "2,3", "--images", "3,2", "--n", "6", "--torsion", "4"])
    data = json.loads(out)
    assert code == 0 and data["rank"] == 2 and data["torsion_free"]
    code, out = call(["oracle", "--orders", "2,2", "--images", "2,2", "--n", "4"])
    assert code == 1 and json.loads(out)["code"]


@pytest.mark.parametrize("argv,stdin", [
    (["classify"], "{not json"),
    (["bound", "--p", "4", "2", "2"], None),
    (["bound", "--p", "2", "2"], None),
    (["nonsense"], None),
    (["bound", "--p", "2", "--precision", "3", "2", "2"], None),
    (["synthesize", "--p", "3"], None),
])
def test_malformed_input(argv, stdin, monkeypatch):
    code, out = call(argv, stdin, monkeypatch)
    assert code == 2
    assert json.loads(out)["code"] == "malformed_input"
