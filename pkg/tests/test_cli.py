"""Command-line behavior: reports, artifacts, and exit codes."""
import json
import subprocess
import sys

import pytest

from magicmodels import serialize as sz
from magicmodels.cli import dispatch
from magicmodels.cyclotomic import zeta
from magicmodels.groups import Perm, PermGroup
from magicmodels.magic import single_fiber
from magicmodels.matrices import CMatrix
from magicmodels.quasiflat import classical_model_from_family, latin_family_search


def _group_payload(degree, *cycle_sets):
    gens = [Perm.from_cycles(degree, cs) for cs in cycle_sets]
    return {"degree": degree, "generators": [list(p.images) for p in gens]}


@pytest.fixture(scope="module")
def files(tmp_path_factory):
    root = tmp_path_factory.mktemp("cli")

    def put(name, payload):
        path = root / name
        path.write_text(sz.render_json(payload))
        return str(path)

    z5m = CMatrix.exact([[zeta(5, 1), 0], [0, zeta(5, 4)]])
    z3 = PermGroup.from_generators([Perm.from_cycles(3, [(1, 2, 3)])])
    fam3 = latin_family_search(z3, 3)
    model3 = classical_model_from_family(z3, fam3)
    d4 = PermGroup.from_generators([Perm.from_cycles(4, [(1, 2, 3, 4)]),
                                    Perm.from_cycles(4, [(1, 3)])])
    famd = latin_family_search(d4, 4)
    modeld = classical_model_from_family(d4, famd)
    fiber = single_fiber(modeld, list(d4.elements).index(d4.identity))

    paths = {
        "s3": put("s3.json", _group_payload(3, [(1, 2)], [(1, 2, 3)])),
        "s3_marked": put("s3_marked.json", _group_payload(3, [(1, 2)], [(1, 3)])),
        "a3": put("a3.json", _group_payload(3, [(1, 2, 3)])),
        "z3": put("z3.json", _group_payload(3, [(1, 2, 3)])),
        "d4": put("d4.json", _group_payload(4, [(1, 2, 3, 4)], [(1, 3)])),
        "klein6": put("klein6.json",
                      _group_payload(6, [(1, 2), (3, 4)], [(1, 2), (5, 6)])),
        "s3z2": put("s3z2.json",
                    _group_payload(5, [(1, 2)], [(1, 3)], [(4, 5)])),
        "t12": put("t12.json", _group_payload(3, [(1, 2)])),
        "dual_z2": put("dual_z2.json", {
            "sizes": [2],
            "generators": [sz.matrix_to_json(CMatrix.exact([[0, 1], [1, 0]]))],
        }),
        "dual_bad": put("dual_bad.json", {
            "sizes": [2],
            "generators": [{"mode": "exact",
                            "rows": [["1", "1"], ["0", "1"]]}],
        }),
        "cyclic_d5": put("cyclic_d5.json", {
            "factors": [5],
            "rep_generators": [sz.matrix_to_json(z5m)],
            "auto_images": [[4]],
            "k": 2,
        }),
        "cyclic_d5_float": put("cyclic_d5_float.json", {
            "factors": [5],
            "rep_generators": [sz.matrix_to_json(z5m.to_float())],
            "auto_images": [[4]],
            "k": 2,
        }),
        "flat_ok": put("flat_ok.json", {
            "k": 2,
            "generators": [
                [sz.matrix_to_json(CMatrix.exact([[0, 1], [1, 0]]))],
                [sz.matrix_to_json(CMatrix.exact(
                    [[0, zeta(3, 2)], [zeta(3, 1), 0]]))],
            ],
        }),
        "flat_bad": put("flat_bad.json", {
            "k": 2,
            "generators": [
                [sz.matrix_to_json(CMatrix.exact([[0, 1], [1, 0]]))],
                [sz.matrix_to_json(CMatrix.identity(2))],
            ],
        }),
        "model_z3": put("model_z3.json", sz.model_to_json(model3)),
        "fiber_d4": put("fiber_d4.json", sz.model_to_json(fiber)),
        "broken_model": put("broken_model.json", {
            "n": 2, "dim": 1, "points": [{
                "label": "pt", "weight": "1",
                "entries": [[{"rows": [["1/2"]]}, {"rows": [["1/2"]]}],
                            [{"rows": [["1/2"]]}, {"rows": [["1/2"]]}]],
            }],
        }),
        "not_json": str(root / "not.json"),
        "root": str(root),
    }
    (root / "not.json").write_text("{this is not json")
    return paths


def run_cli(capsys, *argv):
    code = dispatch(list(argv))
    captured = capsys.readouterr()
    report = json.loads(captured.out) if captured.out else None
    return code, report, captured


def test_thoma_check_passes(files, capsys):
    code, report, cap = run_cli(capsys, "thoma-check", "--group", files["s3"],
                                "--lambda", files["a3"])
    assert code == 0
    assert report["status"] == "pass"
    assert report["routes_agree"] is True
    assert report["witnesses"] == []
    assert "thoma-check: pass" in cap.err


def test_thoma_check_rejects_non_normal_subgroup(files, capsys):
    code, report, _ = run_cli(capsys, "thoma-check", "--group", files["s3"],
                              "--lambda", files["t12"])
    assert code == 2
    assert report["status"] == "error"
    assert report["error"]["type"] == "NotNormal"


def test_dual_build_artifact_feeds_magic_verify(files, capsys, tmp_path):
    out = str(tmp_path / "model.json")
    code, report, _ = run_cli(capsys, "dual-build", "--input",
                              files["dual_z2"], "--out", out)
    assert code == 0
    assert report["n"] == 2 and report["dim"] == 2
    code2, rep2, _ = run_cli(capsys, "magic-verify", "--model", out)
    assert code2 == 0
    assert rep2["status"] == "pass"
    code3, rep3, _ = run_cli(capsys, "magic-verify", "--model", out,
                             "--float", "--tol", "1e-6")
    assert code3 == 0 and rep3["config"]["mode"] == "float"


def test_magic_verify_fails_on_broken_model(files, capsys):
    code, report, _ = run_cli(capsys, "magic-verify", "--model",
                              files["broken_model"])
    assert code == 1
    assert report["status"] == "fail"
    assert any(w["kind"] == "not_projection" for w in report["witnesses"])


def test_dual_build_rejects_non_unitary(files, capsys):
    code, report, _ = run_cli(capsys, "dual-build", "--input",
                              files["dual_bad"])
    assert code == 2
    assert report["status"] == "error"
    assert report["error"]["type"] == "NotUnitary"


def test_orbits_group_and_flag_validation(files, capsys):
    code, report, _ = run_cli(capsys, "orbits", "--group", files["klein6"])
    assert code == 0
    assert report["blocks"] == [[1, 2], [3, 4], [5, 6]]
    assert report["quasi_transitive"] is True
    code2, rep2, _ = run_cli(capsys, "orbits", "--group", files["klein6"],
                             "--model", files["model_z3"])
    assert code2 == 2 and rep2["status"] == "error"
    code3, rep3, _ = run_cli(capsys, "orbits")
    assert code3 == 2 and rep3["status"] == "error"


def test_orbits_model_source(files, capsys):
    code, report, _ = run_cli(capsys, "orbits", "--model", files["model_z3"])
    assert code == 0
    assert report["blocks"] == [[1, 2, 3]]


def test_stationarity_pass_and_fail(files, capsys):
    code, report, _ = run_cli(capsys, "stationarity", "--model",
                              files["model_z3"], "--group", files["z3"],
                              "--max-word-len", "2")
    assert code == 0 and report["status"] == "pass"
    code2, rep2, _ = run_cli(capsys, "stationarity", "--model",
                             files["fiber_d4"], "--group", files["d4"],
                             "--max-word-len", "2")
    assert code2 == 1 and rep2["status"] == "fail"
    words = [w["word"] for w in rep2["witnesses"]]
    assert "u[1,1] u[2,2]" in words


def test_cyclic_build_and_verify(files, capsys, tmp_path):
    out = str(tmp_path / "cyclic.json")
    code, report, _ = run_cli(capsys, "cyclic-build", "--input",
                              files["cyclic_d5"], "--out", out)
    assert code == 0
    assert report["k"] == 2 and report["dim"] == 2
    stored = json.loads(open(out).read())
    assert stored == report["model"]
    code2, rep2, _ = run_cli(capsys, "cyclic-verify", "--input",
                             files["cyclic_d5"])
    assert code2 == 0
    assert all(rep2["checks"].values())
    assert len(rep2["checks"]) == 3
    code3, rep3, _ = run_cli(capsys, "cyclic-verify", "--input",
                             files["cyclic_d5"], "--float", "--tol", "1e-8")
    assert code3 == 0
    assert len(rep3["checks"]) == 3
    code4, rep4, _ = run_cli(capsys, "cyclic-verify", "--input",
                             files["cyclic_d5_float"], "--tol", "1e-8")
    assert code4 == 0
    assert len(rep4["checks"]) == 2
    assert "semidirect_stationarity" not in rep4["checks"]


def test_latin_search_family_and_no_family(files, capsys, tmp_path):
    out = str(tmp_path / "family.json")
    code, report, _ = run_cli(capsys, "latin-search", "--group", files["z3"],
                              "--out", out)
    assert code == 0
    assert report["family"]["size"] == 3
    assert json.loads(open(out).read())["family"] == report["family"]
    code2, rep2, _ = run_cli(capsys, "latin-search", "--group",
                             files["klein6"])
    assert code2 == 1
    assert rep2["status"] == "no-family"
    assert rep2["explored"] == 3 and rep2["exhaustive"] is True


def test_latin_search_cap_exceeded(files, capsys):
    code, report, _ = run_cli(capsys, "latin-search", "--group", files["d4"],
                              "--cap", "1")
    assert code == 2
    assert report["error"]["type"] == "CapExceeded"


def test_uniform_check_pass_and_fail(files, capsys):
    code, report, _ = run_cli(capsys, "uniform-check", "--group",
                              files["s3_marked"])
    assert code == 0
    assert report["uniform"] is True and report["order"] == 2
    code2, rep2, _ = run_cli(capsys, "uniform-check", "--group",
                             files["s3z2"])
    assert code2 == 1
    assert rep2["first_failing"] == 4


def test_dual_flat_check_pass_and_fail(files, capsys):
    code, report, _ = run_cli(capsys, "dual-flat-check", "--input",
                              files["flat_ok"])
    assert code == 0 and report["status"] == "pass"
    code2, rep2, _ = run_cli(capsys, "dual-flat-check", "--input",
                             files["flat_bad"])
    assert code2 == 1
    assert rep2["witnesses"][0]["generator"] == 2


def test_usage_errors(files, capsys):
    assert dispatch(["no-such-command"]) == 2
    capsys.readouterr()
    assert dispatch(["orbits", "--group", files["z3"], "--exact",
                     "--float"]) == 2
    capsys.readouterr()
    assert dispatch(["latin-search", "--group", files["z3"],
                     "--tol", "-1"]) == 2
    capsys.readouterr()


def test_missing_and_malformed_files(files, capsys):
    code, report, _ = run_cli(capsys, "orbits", "--group",
                              files["root"] + "/absent.json")
    assert code == 2 and report["error"]["type"] == "BadInput"
    code2, rep2, _ = run_cli(capsys, "orbits", "--group", files["not_json"])
    assert code2 == 2 and rep2["error"]["type"] == "BadInput"


def test_reports_are_byte_identical(files, capsys):
    _, _, first = run_cli(capsys, "uniform-check", "--group", files["s3z2"])
    _, _, second = run_cli(capsys, "uniform-check", "--group", files["s3z2"])
    assert first.out == second.out
    _, _, third = run_cli(capsys, "latin-search", "--group", files["klein6"])
    _, _, fourth = run_cli(capsys, "latin-search", "--group", files["klein6"])
    assert third.out == fourth.out


def test_suite_command_passes(capsys):
    code, report, _ = run_cli(capsys, "suite")
    assert code == 0
    assert report["status"] == "pass"
    assert len(report["criteria"]) == 11
    assert all(c["passed"] for c in report["criteria"])


def test_module_entry_point(files):
    proc = subprocess.run(
        [sys.executable, "-m", "magicmodels.cli", "orbits", "--group",
         files["klein6"]],
        capture_output=True, text=True)
    assert proc.returncode == 0
    report = json.loads(proc.stdout)
    assert report["status"] == "pass"
    assert "orbits: pass" in proc.stderr
