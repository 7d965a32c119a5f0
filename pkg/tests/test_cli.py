import json
import subprocess
import sys

import pytest

from voa_deq.cli import main

from conftest import validate

FOCK = ["fock:lambda=3", "fock:lambda=1", "fock:lambda=1", "fock:lambda=1"]
ISING = ["virasoro-minimal:c=1/2,h=1/16"] * 4


@pytest.fixture(scope="module")
def fock_ode(tmp_path_factory):
    path = tmp_path_factory.mktemp("fock") / "fock.json"
    assert main(["-q", "derive", "--modules", *FOCK, "--locus", "z1=z2", "-o", str(path)]) == 0
    return path


def test_models_list(capsys):
    assert main(["models", "list"]) == 0
    assert capsys.readouterr().out.split() == ["heisenberg", "fock", "virasoro-verma", "virasoro-minimal"]


def test_models_build(tmp_path, capsys):
    out = tmp_path / "sigma.json"
    assert main(["models", "build", "virasoro", "--simple", "--c", "1/2", "--h", "1/16", "--cutoff", "4",
                 "-o", str(out)]) == 0
    assert "lowest weight 1/16" in capsys.readouterr().out
    doc = json.loads(out.read_text())
    validate(doc, "module")
    assert doc["family"] == "virasoro-minimal"
    fock = tmp_path / "fock.json"
    assert main(["-q", "models", "build", "fock", "--lambda", "1", "--cutoff", "5/2", "-o", str(fock)]) == 0
    assert json.loads(fock.read_text())["lowest_weight"] == ["1", "2"]


def test_models_build_missing_parameter(capsys):
    assert main(["models", "build", "fock", "--cutoff", "3"]) == 2
    assert "needs --lambda" in capsys.readouterr().err


def test_derive_vacuum_text(tmp_path, capsys):
    text = tmp_path / "eq.txt"
    assert main(["derive", "--modules", *["heisenberg"] * 4, "--cutoff", "3", "--text", str(text)]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0] == "dphi/dz1 = 0" and out == text.read_text()


def test_derive_from_module_files(tmp_path, capsys):
    paths = []
    for i, lam in enumerate((3, 1, 1, 1)):
        p = tmp_path / f"m{i}.json"
        main(["-q", "models", "build", "fock", "--lambda", str(lam), "--cutoff", str(lam * lam / 2 + 6), "-o", str(p)])
        paths.append(str(p))
    assert main(["-q", "derive", "--modules", *paths, "--slot", "2", "-o", str(tmp_path / "s.json")]) == 0
    assert [e["variable"] for e in json.loads((tmp_path / "s.json").read_text())["parts"]] == [2]


def test_derive_and_verify(fock_ode, tmp_path, capsys):
    validate(json.loads(fock_ode.read_text()), "ode-system")
    rep = tmp_path / "rep.json"
    assert main(["verify", str(fock_ode), "--order", "6", "-o", str(rep)]) == 0
    assert capsys.readouterr().out.startswith("oracle fock, order 6: PASS")
    validate(json.loads(rep.read_text()), "verify-report")


def test_verify_detects_corruption(fock_ode, tmp_path, capsys):
    doc = json.loads(fock_ode.read_text())
    coeff = doc["parts"][0]["coefficients"][0]
    coeff["num"][0][1] = ["17", "5"]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    assert main(["verify", str(bad), "--order", "6"]) == 1
    assert "FAIL" in capsys.readouterr().out


def test_solve_writes_all_outputs(fock_ode, tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["solve", str(fock_ode), "--order", "8", "--eval", "1/3", "-o", str(out)]) == 0
    doc = json.loads(out.read_text())
    validate(doc, "extension-report")
    assert doc["oracle"]["matched"] is True
    assert (tmp_path / "r.csv").read_text().startswith("solution,")
    assert (tmp_path / "r.png").read_bytes()[:4] == b"\x89PNG"


def test_solve_default_paths(fock_ode):
    assert main(["-q", "solve", str(fock_ode), "--order", "6", "--oracle", "none"]) == 0
    assert all(fock_ode.with_name("fock.report" + s).exists() for s in (".json", ".csv", ".png"))


def test_fusion(tmp_path, capsys):
    out = tmp_path / "f.json"
    assert main(["fusion", "fock:lambda=1", "fock:lambda=1", "fock:lambda=2", "--cutoff", "3", "--points", "2",
                 "-o", str(out)]) == 0
    assert ": 1\n" in capsys.readouterr().out
    validate(json.loads(out.read_text()), "fusion-bound")
    assert main(["fusion", "fock:lambda=1", "fock:lambda=1", "fock:lambda=2", "--point", "1,1"]) == 2


@pytest.mark.parametrize("argv,code", [
    (["derive", "--modules", *FOCK[:3]], 2),
    (["derive", "--modules", *["heisenberg"] * 6], 3),
    (["derive", "--modules", *FOCK, "--p", "3"], 2),
    (["derive", "--modules", *FOCK, "--vectors", "0,0,99,0"], 2),
    (["derive", "--modules", "fock:lambda=1", "virasoro-minimal:c=1/2,h=0", *FOCK[:2]], 2),
    (["derive", "--modules", "nonsense", *FOCK[:3]], 2),
    (["verify", "/nonexistent.json"], 2),
])
def test_exit_codes(argv, code, capsys):
    assert main(argv) == code
    assert capsys.readouterr().err


def test_console_script_version():
    res = subprocess.run([sys.executable, "-m", "voa_deq.cli", "--version"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.startswith("voa-deq ")
