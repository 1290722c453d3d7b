import importlib.util
import io
import json
from pathlib import Path

import pytest

from rigidtrace.cli import run

ROOT = Path(__file__).resolve().parents[1]


@pytest.fixture(scope="module")
def data(tmp_path_factory):
    spec = importlib.util.spec_from_file_location("make_examples", ROOT / "scripts" / "make_examples.py")
    mod = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(mod)
    d = tmp_path_factory.mktemp("data")
    for name, obj in mod.examples().items():
        (d / name).write_text(json.dumps(obj))
    return d


def call(*argv):
    buf = io.StringIO()
    code = run([str(a) for a in argv] + ["--format", "json"], out=buf)
    text = buf.getvalue()
    return code, json.loads(text) if text.strip() else None


def test_check_category(data):
    code, out = call("check", "--category", data / "delta2.json")
    assert code == 0 and out["result"] == "valid"


def test_check_reports_violations(data, tmp_path):
    bad = json.loads((data / "delta2.json").read_text())
    bad["compose"] = [[g, f, "01" if (g, f) == ("12", "01") else gf] for g, f, gf in bad["compose"]]
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(bad))
    code, out = call("check", "--category", path)
    assert code == 1 and out["result"] == "invalid" and out["violations"]


def test_missing_file_and_options_are_usage_errors(data, capsys):
    assert call("check", "--category", data / "nope.json")[0] == 2
    assert call("trace", "--smc", data / "mat_f2_2.json")[0] == 2
    assert call("frobnicate")[0] == 2
    assert "usage error" in capsys.readouterr().err


def test_malformed_json_names_the_position(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text('{"objects": [1, 2,]}')
    assert call("check", "--category", path)[0] == 2
    assert "line 1" in capsys.readouterr().err


def test_nerve_and_special(data):
    code, out = call("nerve", "--monoid", data / "z2.json", "--bound", 3)
    assert code == 0 and out["levels"] == [1, 2, 4, 8]
    code, out = call("special", "--monoid", data / "n2.json")
    assert code == 0 and out["special"] and out["failed_level"] is None


def test_integrate_and_sections(data):
    code, out = call("integrate", "--diagram", data / "diagram_delta1.json")
    assert code == 0 and out["fibered"] and len(out["total"]["objects"]) == 3
    code, out = call("sections", "--diagram", data / "diagram_delta1.json")
    assert code == 0 and out["roundtrip"]


def test_simplices(data):
    code, out = call("simplices", "--category", data / "delta2.json", "--bound", 2)
    assert code == 0
    assert all(f["terminal"] and f["cofibered"] for f in out["fibers"])
    assert out["factorization_failures"] == 0


def test_dual_and_trace(data):
    code, out = call("dual", "--smc", data / "mat_f2_2.json", "--object", 2)
    assert code == 0 and out["status"] == "rigid" and out["dual"] == 2
    code, out = call("dual", "--smc", data / "idempotent_smc.json", "--object", "x")
    assert code == 0 and out["status"] == "not rigid"
    code, out = call("trace", "--smc", data / "mat_f2_2.json", "--object", 2, "--endo", data / "f.json")
    assert code == 0 and out["trace"] == "0"
    code, out = call("trace", "--smc", data / "mat_q_3.json", "--object", 3, "--endo", data / "g.json")
    assert code == 0 and out["trace"] == "2"


def test_cyclic_commands(data):
    code, out = call("hochschild", "--algebra", data / "dual_numbers.json", "--degree", 2)
    assert code == 0 and out["dim"] == 1
    code, out = call("negcyclic", "--algebra", data / "qxq.json", "--degree", 0, "--uorder", 2)
    assert code == 0 and out["dim"] == 2 and out["stable"]
    code, out = call("chern", "--algebra", data / "qxq.json", "--idempotent", data / "e10.json", "--uorder", 2)
    assert code == 0 and out["c_0"] == ["1", "0"] and out["trace_matches"]
    code, out = call("chern", "--algebra", data / "dual_numbers.json", "--idempotent", data / "conj.json",
                     "--uorder", 1)
    assert code == 0 and out["trace_matches"]


def test_non_idempotent_exits_one(data, tmp_path):
    path = tmp_path / "two.json"
    path.write_text(json.dumps([[["2"]]]))
    code, out = call("chern", "--algebra", data / "q.json", "--idempotent", path, "--uorder", 1)
    assert code == 1 and "idempotent" in out["violations"][0]


def test_bord_eval(data):
    common = ("bord-eval", "--group", data / "z3_group.json", "--rep", data / "z3_rep2.json")
    code, out = call(*common, "--bordism", data / "trace_g1.json")
    assert code == 0 and out["value"] == "-1"
    code, out = call(*common, "--bordism", data / "zigzag.json")
    assert code == 0 and out["matrix"] == [["1", "0"], ["0", "1"]]


def test_text_output(data):
    buf = io.StringIO()
    assert run(["check", "--algebra", str(data / "q.json")], out=buf) == 0
    assert "result: valid" in buf.getvalue()
