import json
import subprocess
import sys

import pytest

from schwarzlift.cli import main, parse_complex, UsageError


def run(capsys, *argv):
    try:
        code = main(list(argv))
    except SystemExit as exc:
        code = exc.code
    out, err = capsys.readouterr()
    return code, out, err


def test_parse_complex():
    assert parse_complex("0.5,-1") == 0.5 - 1j
    with pytest.raises(UsageError):
        parse_complex("0.5")


def test_phi_point_examples(capsys):
    code, out, _ = run(capsys, "phi", "--h", "pow((1+z)/(1-z),1)", "--q", "0", "--z", "0,0")
    assert code == 0 and out.strip() == "phi 0"
    code, out, _ = run(capsys, "phi", "--h", "pow((1+z)/(1-z),0.5)", "--q", "sqrt(0.25)*z",
                       "--z", "0,0", "--json")
    assert code == 0
    assert json.loads(out)["phi"] == pytest.approx(2.5, abs=1e-12)


def test_phi_negative_point(capsys):
    code, out, _ = run(capsys, "phi", "--h", "z", "--q", "z", "--z", "-0.5,0", "--json")
    assert code == 0
    assert json.loads(out)["z"] == [-0.5, 0.0]


def test_phi_syntax_error(capsys):
    code, _, err = run(capsys, "phi", "--h", "2*", "--q", "0", "--z", "0,0")
    assert code == 2
    assert "offset 2" in err and "^" in err


def test_phi_outside_disk(capsys):
    code, _, _ = run(capsys, "phi", "--h", "z", "--q", "0", "--z", "1,0")
    assert code == 2


def test_phi_grid_with_target(capsys):
    args = ("phi", "--h", "z", "--q", "0.2*z", "--grid", "20x16", "--rmax", "0.9", "--json")
    code, out, _ = run(capsys, *args, "--t", "1")
    assert code == 0 and json.loads(out)["pass"]
    code, _, _ = run(capsys, *args, "--t", "0.01")
    assert code == 1


def test_critical_point_exit_code(capsys):
    code, _, err = run(capsys, "phi", "--h", "z^2", "--q", "0", "--z", "0,0")
    assert code == 3 and "error" in err


def test_criterion(capsys):
    code, out, _ = run(capsys, "criterion", "--h", "z", "--q", "0", "--grid", "10x16")
    assert code == 0
    rep = json.loads(out)
    assert rep["pass"] and rep["sup"] == 0 and rep["grid"]["nr"] == 10
    code, _, _ = run(capsys, "criterion", "--h", "pow((1+z)/(1-z),1)", "--q", "sqrt(0.6)*z",
                     "--grid", "10x16")
    assert code == 1


def test_criterion_bad_grid(capsys):
    code, _, _ = run(capsys, "criterion", "--h", "z", "--q", "0", "--grid", "ten")
    assert code == 2


def test_thresholds(capsys):
    code, out, _ = run(capsys, "thresholds", "--s", "0", "--t", "1", "--R", "1", "--json")
    data = json.loads(out)
    assert code == 0
    assert data["eta"] == pytest.approx(1 / 11) and data["c"] == pytest.approx(3 / 28)
    assert data["rho"] == pytest.approx(0.6)
    code, out, _ = run(capsys, "thresholds", "--s", "0", "--t", "0", "--json")
    data = json.loads(out)
    assert data["eta"] == data["c"] == data["c_star"] == data["r0"] == 0
    assert data["psi_qc"] == 1


def test_thresholds_domain_error(capsys):
    code, _, _ = run(capsys, "thresholds", "--s", "0.8", "--t", "0.2")
    assert code == 2


def test_shear(capsys):
    code, out, _ = run(capsys, "shear", "--phi", "z", "--omega", "0", "--order", "8")
    data = json.loads(out)
    assert code == 0 and data["order"] == 9
    assert data["h"][1] == [1.0, 0.0] and data["g"] == [[0.0, 0.0]] * 10
    code, _, _ = run(capsys, "shear", "--phi", "z", "--omega", "1")
    assert code == 3
    code, _, _ = run(capsys, "shear", "--phi", "z", "--omega", "0", "--lambda", "2,0")
    assert code == 2
    code, out, _ = run(capsys, "shear", "--phi", "z", "--omega", "0.1", "--lambda", "-1,0",
                       "--order", "4")
    assert code == 0 and json.loads(out)["lambda"] == [-1.0, 0.0]


def test_lift_outputs(capsys, tmp_path):
    for fmt in ("obj", "ply"):
        path = tmp_path / f"m.{fmt}"
        code, out, _ = run(capsys, "lift", "--h", "z", "--q", "z", "--grid", "5x8", "--rmax", "0.9",
                           "--format", fmt, "--out", str(path))
        assert code == 0 and "41 vertices" in out
        text = path.read_text()
        if fmt == "ply":
            assert text.startswith("ply\nformat ascii 1.0\n")
        else:
            assert text.startswith("v 0 0 0\n")
    assert sorted(p.name for p in tmp_path.iterdir()) == ["m.obj", "m.ply"]


def test_lift_unwritable(capsys, tmp_path):
    code, _, _ = run(capsys, "lift", "--h", "z", "--q", "z", "--grid", "3x4",
                     "--out", str(tmp_path / "no" / "m.obj"))
    assert code == 3


def test_report_flag_is_atomic(capsys, tmp_path):
    path = tmp_path / "t.json"
    code, out, _ = run(capsys, "thresholds", "--s", "0", "--t", "1", "--json", "--report", str(path))
    assert code == 0 and out == ""
    assert json.loads(path.read_text())["eta"] == pytest.approx(1 / 11)
    assert [p.name for p in tmp_path.iterdir()] == ["t.json"]


def test_chordarc(capsys, tmp_path):
    poly = tmp_path / "l.json"
    poly.write_text(json.dumps([[0, 0], [2, 0], [2, 1], [1, 1], [1, 2], [0, 2]]))
    code, out, _ = run(capsys, "chordarc", "--polygon", str(poly), "--samples", "200")
    data = json.loads(out)
    assert code == 0 and data["M_estimate"] == pytest.approx(2 ** 0.5, abs=1e-6)
    code, out, _ = run(capsys, "chordarc", "--polygon", str(poly), "--samples", "200",
                       "--lambda", "-0.7071067811865476,0.7071067811865476")
    assert code == 0 and json.loads(out)["lambda"][0] < 0
    code, _, _ = run(capsys, "chordarc", "--polygon", str(tmp_path / "missing.json"))
    assert code == 2


def test_usage_errors(capsys):
    assert run(capsys)[0] == 2
    assert run(capsys, "phi", "--h", "z")[0] == 2
    assert run(capsys, "shear", "--phi", "z", "--omega", "0", "--order", "0")[0] == 2


def test_verify_command(capsys):
    code, out, _ = run(capsys, "paper-verify")
    lines = out.strip().splitlines()
    assert len(lines) == 14 and lines[-1].endswith("checks passed")
    assert all(l.startswith(("[PASS]", "[FAIL]")) for l in lines[:-1])
    # nonzero exactly when some check fails
    assert (code == 0) == all(l.startswith("[PASS]") for l in lines[:-1])


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "schwarzlift", "thresholds", "--s", "0", "--t", "1"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "eta" in proc.stdout
