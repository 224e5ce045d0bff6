import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from tgbredon.cli import main

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def run(capsys, *argv):
    code = main(list(argv))
    return code, json.loads(capsys.readouterr().out)


@pytest.fixture
def files(tmp_path, capsys):
    assert main(["example", "double-flip", "--out", str(tmp_path)]) == 0
    capsys.readouterr()
    return tmp_path


def test_example_writes_five_files(files):
    assert sorted(p.name for p in files.iterdir()) == [
        "A.coefficients.json", "B.coefficients.json", "double_flip.groupoid.json",
        "flip_circle.gcw.json", "skeleton0.gspace.json"]


def test_example_matches_checked_in_fixtures(files):
    for p in files.iterdir():
        assert p.read_bytes() == (FIXTURES / p.name).read_bytes()


def test_example_rerun_is_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    main(["example", "double-flip", "--out", str(a)])
    main(["example", "double-flip", "--out", str(b)])
    capsys.readouterr()
    for p in a.iterdir():
        assert p.read_bytes() == (b / p.name).read_bytes()


def test_unknown_example(capsys, tmp_path):
    code, rep = run(capsys, "example", "moebius", "--out", str(tmp_path))
    assert code == 2 and "double-flip" in rep["message"]


@pytest.mark.parametrize("name,kind", [
    ("double_flip.groupoid.json", "groupoid"), ("skeleton0.gspace.json", "gspace"),
    ("flip_circle.gcw.json", "gcw"), ("A.coefficients.json", "coefficients"),
    ("B.coefficients.json", "coefficients"),
])
def test_validate_fixtures(capsys, name, kind):
    code, rep = run(capsys, "validate", str(FIXTURES / name))
    assert code == 0 and rep["valid"] and rep["kind"] == kind


def test_validate_corrupted_groupoid(capsys, files):
    path = files / "double_flip.groupoid.json"
    doc = json.loads(path.read_text())
    for t in doc["compose"]:
        if t[:2] == ["x", "s"]:
            t[2] = "y^-1"
    path.write_text(json.dumps(doc))
    code, rep = run(capsys, "validate", str(path))
    assert code == 1 and not rep["valid"]
    assert all({"kind", "message", "witness"} <= set(v) for v in rep["violations"])


def test_validate_bundle_file(capsys, tmp_path):
    from tgbredon.bundles import unit_bundle
    from tgbredon.fixtures import double_flip_groupoid
    path = tmp_path / "unit.bundle.json"
    path.write_text(json.dumps(unit_bundle(double_flip_groupoid()).to_json()))
    code, rep = run(capsys, "validate", str(path))
    assert code == 0 and rep["summary"] == {"points": 8, "base": 2}


def test_parse_error_has_position(capsys, tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"kind": "groupoid",\n  "version": 1,\n  "objects": [}\n')
    code, rep = run(capsys, "validate", str(path))
    assert code == 2 and rep["error"] == "parse" and rep["line"] == 3


def test_missing_file(capsys, tmp_path):
    code, rep = run(capsys, "validate", str(tmp_path / "nope.json"))
    assert code == 2 and rep["error"] == "parse"


def test_unknown_kind(capsys, tmp_path):
    path = tmp_path / "x.json"
    path.write_text('{"kind": "sheaf", "version": 1}')
    code, rep = run(capsys, "validate", str(path))
    assert code == 1


def test_bredon_A_and_B(capsys):
    gcw = str(FIXTURES / "flip_circle.gcw.json")
    code, rep = run(capsys, "bredon", "--complex", gcw, "--coeffs", str(FIXTURES / "A.coefficients.json"),
                    "--mode", "cohomology")
    assert code == 0 and rep["cochain_ranks"] == [2, 0]
    assert rep["groups"] == [{"free_rank": 2, "torsion": []}, {"free_rank": 0, "torsion": []}]
    code, rep = run(capsys, "bredon", "--complex", gcw, "--coeffs", str(FIXTURES / "B.coefficients.json"),
                    "--mode", "cohomology")
    assert rep["cochain_ranks"] == [2, 1] and rep["delta_surjective"] == [True]
    assert rep["groups"] == [{"free_rank": 1, "torsion": []}, {"free_rank": 0, "torsion": []}]


def test_bredon_homology_constant(capsys, tmp_path):
    doc = json.loads((FIXTURES / "B.coefficients.json").read_text())
    doc["variance"] = "covariant"
    path = tmp_path / "Z.coefficients.json"
    path.write_text(json.dumps(doc))
    code, rep = run(capsys, "bredon", "--complex", str(FIXTURES / "flip_circle.gcw.json"),
                    "--coeffs", str(path), "--mode", "homology")
    assert code == 0 and rep["chain_ranks"] == [2, 1]
    assert [g["free_rank"] for g in rep["groups"]] == [1, 0]


def test_bredon_variance_mismatch(capsys):
    code, rep = run(capsys, "bredon", "--complex", str(FIXTURES / "flip_circle.gcw.json"),
                    "--coeffs", str(FIXTURES / "A.coefficients.json"), "--mode", "homology")
    assert code == 1 and rep["violations"][0]["kind"] == "variance"


def test_bredon_out_file(capsys, tmp_path):
    out = tmp_path / "r.json"
    code = main(["bredon", "--complex", str(FIXTURES / "flip_circle.gcw.json"),
                 "--coeffs", str(FIXTURES / "A.coefficients.json"), "--mode", "cohomology", "--out", str(out)])
    assert code == 0 and capsys.readouterr().out == ""
    assert json.loads(out.read_text())["cochain_ranks"] == [2, 0]


def test_orbitcat(capsys):
    code, rep = run(capsys, "orbitcat", str(FIXTURES / "double_flip.groupoid.json"), "--base", "b", "--verify")
    assert code == 0 and rep["verify"]["ok"]
    assert rep["hom_sizes"] == {"e->e": 2, "e->G": 1, "G->e": 0, "G->G": 1}
    assert rep["isotropy"] == ["v", "t"]


def test_orbitcat_trivial_groupoid(capsys, tmp_path):
    path = tmp_path / "pt.json"
    path.write_text(json.dumps({"kind": "groupoid", "version": 1, "objects": ["*"],
                                "arrows": [["e", "*", "*"]], "identity": {"*": "e"},
                                "compose": [["e", "e", "e"]]}))
    code, rep = run(capsys, "orbitcat", str(path), "--base", "*")
    assert code == 0 and len(rep["objects"]) == 1 and len(rep["morphisms"]) == 1


def test_orbitcat_unknown_base(capsys):
    code, rep = run(capsys, "orbitcat", str(FIXTURES / "double_flip.groupoid.json"), "--base", "c")
    assert code == 1 and rep["violations"][0]["kind"] == "unknown_object"


def test_verify_is_deterministic(capsys):
    args = ["verify", "--prop", "rest", "--seed", "7", "--trials", "10"]
    code, first = run(capsys, *args)
    _, second = run(capsys, *args)
    assert code == 0 and first == second and first["passed"] == 10
    assert all("global_maps" in t["data"] for t in first["per_trial"])


def test_verify_bundle(capsys):
    code, rep = run(capsys, "verify", "--prop", "bundle", "--seed", "3", "--trials", "10")
    assert code == 0 and rep["ok"]


def test_timing_flag(capsys):
    code, rep = run(capsys, "--timing", "validate", str(FIXTURES / "flip_circle.gcw.json"))
    assert code == 0 and rep["seconds"] >= 0


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--prop", "nonsense"])
    assert exc.value.code == 2


def test_console_script_subprocess(tmp_path):
    env = dict(os.environ, TGBREDON_LOG="info")
    proc = subprocess.run([sys.executable, "-m", "tgbredon.cli", "validate",
                           str(FIXTURES / "double_flip.groupoid.json")],
                          capture_output=True, text=True, env=env)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["summary"] == {"objects": 2, "arrows": 8}
    assert "finished with exit code 0" in proc.stderr
