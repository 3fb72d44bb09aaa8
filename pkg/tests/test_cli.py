import io
import json

import pytest

from pclab import catalog
from pclab.cli import main
from pclab.frame import dump_spec, spec_to_dict


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def frames(tmp_path):
    paths = {}
    for entry in ("heisenberg", "g2", "g3", "g5g6"):
        data = spec_to_dict(catalog.get_entry(entry).spec)
        data["constraints"] = {"nonzero": [str(q) for q in catalog.get_entry(entry).nonzero]}
        path = tmp_path / f"{entry}.json"
        path.write_text(json.dumps(data))
        paths[entry] = str(path)
    broken = {"dim": 3, "params": [], "metric": [[1, 0, 0], [0, 1, 0], [0, 0, -1]],
              "phi": [[0, 0, 0], [0, 0, -1], [0, -1, 0]],
              "brackets": [{"i": 0, "j": 1, "coeffs": {"2": "1"}}, {"i": 1, "j": 2, "coeffs": {"0": "1"}},
                           {"i": 0, "j": 2, "coeffs": {"0": "1"}}]}
    (tmp_path / "broken.json").write_text(json.dumps(broken))
    paths["broken"] = str(tmp_path / "broken.json")
    bad = dict(broken, params=["beta"], brackets=[{"i": 1, "j": 2, "coeffs": {"0": "2*beta +* 1"}}])
    (tmp_path / "bad.json").write_text(json.dumps(bad))
    paths["bad"] = str(tmp_path / "bad.json")
    return paths


def test_validate_ok(frames):
    code, out, _ = run("validate", frames["heisenberg"], "--format", "json")
    assert code == 0 and json.loads(out)["valid"]


def test_validate_broken_jacobi(frames):
    code, out, _ = run("validate", frames["broken"], "--format", "json")
    rep = json.loads(out)
    assert code == 2 and not rep["valid"]
    assert any(v["axiom"] == "jacobi" for v in rep["violations"])


def test_malformed_expression(frames):
    code, _, err = run("validate", frames["bad"])
    assert code == 1 and "position 8" in err


def test_missing_file(tmp_path):
    code, _, err = run("validate", str(tmp_path / "nope.json"))
    assert code == 1 and "cannot read" in err


def test_usage_error():
    assert run("frobnicate")[0] == 1


def test_analyze_g2(frames):
    code, out, _ = run("analyze", frames["g2"], "--format", "json")
    flags = json.loads(out)["classification"]["flags"]
    assert code == 0
    assert flags["H_paracontact"]["verdict"] == "holds"
    assert flags["iht"]["verdict"] == "fails"


def test_analyze_g5g6(frames):
    rep = json.loads(run("analyze", frames["g5g6"], "--format", "json")[1])
    assert rep["classification"]["fitted"]["a"] == "delta^2 + 2"
    assert rep["classification"]["fitted"]["b"] == "-delta^2 - 4"
    assert rep["classification"]["soliton"]["lambda"] is None


def test_analyze_subst(frames):
    code, out, _ = run("analyze", frames["g3"], "--subst", "beta=2", "--subst", "gamma=2", "--format", "json")
    sol = json.loads(out)["classification"]["soliton"]
    assert code == 0 and sol["lambda"] == "-2" and sol["trivial"] is True


def test_analyze_bad_subst(frames):
    assert run("analyze", frames["g2"], "--subst", "gamma=0")[0] == 1
    assert run("analyze", frames["g2"], "--subst", "zeta=1")[0] == 1
    assert run("analyze", frames["g2"], "--subst", "beta=x")[0] == 1


def test_analyze_text(frames):
    code, out, _ = run("analyze", frames["heisenberg"])
    assert code == 0 and "classification:" in out


def test_json_is_byte_identical(frames):
    a = run("analyze", frames["g2"], "--format", "json")[1]
    b = run("analyze", frames["g2"], "--format", "json")[1]
    assert a == b
    assert a == json.dumps(json.loads(a), indent=2, sort_keys=True) + "\n"


def test_catalog_commands():
    code, out, _ = run("catalog", "list")
    assert code == 0 and "km5d" in out
    code, out, _ = run("catalog", "show", "g7")
    assert code == 0 and "[e,phi_e] = 2*xi + delta*e + delta*phi_e" in out
    code, out, _ = run("catalog", "verify", "all")
    assert code == 0
    code, out, _ = run("catalog", "verify", "km5d", "--format", "json")
    rep = json.loads(out)
    assert code == 0 and rep["ok"]
    names = {c["name"]: c["ok"] for c in rep["entries"][0]["checks"]}
    assert names["fitted kappa"] and names["fitted mu"]
    assert run("catalog", "show", "g9")[0] == 1


def test_catalog_verify_mismatch(monkeypatch):
    entry = catalog.get_entry("g5g6")
    monkeypatch.setitem(entry.goldens, "trace_h2", "delta")
    code, out, _ = run("catalog", "verify", "g5g6", "--format", "json")
    rep = json.loads(out)
    bad = [c for c in rep["entries"][0]["checks"] if not c["ok"]]
    assert code == 3
    assert bad[0]["name"] == "tr h^2" and bad[0]["counterexample"] == {"delta": "1"}


def test_deform(frames, tmp_path):
    code, out, _ = run("deform", frames["heisenberg"], "--t", "2", "--format", "json",
                       "--out", str(tmp_path / "d.json"))
    rep = json.loads(out)
    assert code == 0 and rep["H_paracontact"]["unchanged"]
    assert json.loads((tmp_path / "d.json").read_text()) == rep["deformed_frame"]
    code, out, _ = run("deform", frames["g2"], "--t", "3", "--format", "json")
    assert code == 0 and json.loads(out)["ricci_relation"]["holds"]


def test_deform_errors(frames):
    assert run("deform", frames["heisenberg"], "--t", "0")[0] == 1
    assert run("deform", frames["heisenberg"], "--t", "2", "--eps", "3")[0] == 1
    assert run("deform", frames["heisenberg"], "--t", "2", "--eps", "-1")[0] == 2
