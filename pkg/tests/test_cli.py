import json
import subprocess
import sys

import pytest

from gkzlog.cli import JobConfig, main, run


def test_run_returns_code_and_text():
    code, text = run(JobConfig("kernel", matrix=[[1, 1, 1], [0, 1, 2]]))
    assert code == 0 and json.loads(text)["basis"] == [[1, -2, 1]]


def cli(argv, capsys):
    code = main(argv)
    out = capsys.readouterr().out
    return code, json.loads(out), out


def test_kernel_identity(capsys):
    code, doc, _ = cli(["kernel", "--matrix", "[[1,0,0],[0,1,0],[0,0,1]]"], capsys)
    assert code == 0 and doc["basis"] == [] and doc["schema"] == "gkz-logseries/1"


def test_groebner_fixture(capsys):
    code, doc, _ = cli(["groebner", "--fixture", "sst352"], capsys)
    assert code == 0 and doc["generic"] is True
    assert sorted(b["g"] for b in doc["basis"]) == [[0, 1, 0, 1, -2], [1, 0, 1, 0, -2]]
    assert all(set(b) == {"g", "lead"} for b in doc["basis"])


def test_exponents_noncm_flags_uncertified(capsys):
    code, doc, _ = cli(["exponents", "--fixture", "noncm"], capsys)
    assert code == 0
    by_v = {tuple(e["v"]): e for e in doc["exponents"]}
    e = by_v[("0", "-2", "-1", "1")]
    assert e["certificate"]["status"] == "not certified"
    assert "pairs" in e


def test_perturb_flags(capsys):
    code, doc, _ = cli(["perturb", "--fixture", "sst352"], capsys)
    (rec,) = doc["perturbations"]
    assert code == 0
    assert set(rec["flags"]) >= {"assumption_holds", "stabilized", "m_in_PN", "PN_equals_m_PB"}
    assert rec["supports"]["N"] == [[], [5]]


def test_solve_round_trip_and_determinism(tmp_path, capsys):
    code, doc, text = cli(["solve", "--fixture", "sst352"], capsys)
    assert code == 0 and doc["n_solutions"] == 4 and doc["verify"]["pass"] is True
    block = doc["exponents"][0]
    assert set(block) >= {"exponent", "solutions", "verify"}
    assert set(block["solutions"][0]) >= {"q", "terms"}
    assert set(block["solutions"][0]["terms"][0]) == {"u", "coef_log_poly"}
    _, _, again = cli(["solve", "--fixture", "sst352"], capsys)
    assert again == text
    path = tmp_path / "solve.json"
    path.write_text(text)
    code, ver, _ = cli(["verify", str(path)], capsys)
    assert code == 0 and ver["matches_embedded"] and ver["verify"] == doc["verify"]


def test_verify_detects_tampering(tmp_path, capsys):
    _, doc, _ = cli(["solve", "--fixture", "sst352", "--truncation", "6"], capsys)
    sol = doc["exponents"][0]["solutions"][-1]
    sol["terms"][1]["coef_log_poly"][0]["coef"] = "12345"
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    code, ver, _ = cli(["verify", str(path)], capsys)
    assert code == 0 and ver["verify"]["pass"] is False and not ver["matches_embedded"]


def test_family_bundle(capsys):
    code, doc, _ = cli(["family", "--name", "aomoto", "--m", "2", "--l", "4"], capsys)
    assert code == 0 and doc["expected"]["dim"] == 4 and len(doc["matrix"][0]) == 8


def test_non_generic_weight_exit_2(capsys):
    code, doc, _ = cli(["solve", "--matrix", "[[1,1,1,1],[0,1,1,2]]", "--beta", "[0,0]",
                        "--weight", "[1,0,0,1]"], capsys)
    assert code == 2 and doc["error"] == "NonGenericWeight" and doc["precondition"]


def test_assumption_violation_exit_2(capsys):
    code, doc, _ = cli(["perturb", "--fixture", "sst352", "--B",
                        "[[1,0,1,0,-2],[1,0,1,0,-2]]"], capsys)
    assert code == 2 and doc["error"] == "AssumptionViolated"


def test_io_errors_exit_1(tmp_path, capsys):
    code, doc, _ = cli(["verify", str(tmp_path / "missing.json")], capsys)
    assert code == 1
    code, doc, _ = cli(["solve", "--fixture", "nope"], capsys)
    assert code == 1 and doc["error"] == "UnknownFixture"
    code, doc, _ = cli(["kernel"], capsys)
    assert code == 1


def test_bad_radius_rejected(capsys):
    code, doc, _ = cli(["solve", "--fixture", "sst352", "--radius", "0"], capsys)
    assert code == 1


def test_out_file(tmp_path, capsys):
    out = tmp_path / "k.json"
    assert main(["kernel", "--fixture", "sst352", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["rank"] == 2


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "gkzlog.cli", "family", "--name", "fc", "--m", "3"],
                         capture_output=True, text=True, check=True)
    assert json.loads(res.stdout)["expected"]["dim"] == 4
