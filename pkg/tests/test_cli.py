import json
import subprocess
import sys

import pytest

from quadric_density.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_count_b1(capsys, tmp_path):
    csv_path = tmp_path / "c.csv"
    code, out, _ = run(capsys, "count", "--height-bound", "1", "--csv", str(csv_path))
    assert code == 0
    assert json.loads(out)["n_loc"] == 15
    assert csv_path.read_text().splitlines()[1] == "1,16,15,12,3,0,4"


def test_count_json_and_solver(capsys, tmp_path):
    path = tmp_path / "c.json"
    code, out, _ = run(capsys, "count", "--height-bound", "100", "--solver", "symbol",
                       "--workers", "2", "--json", str(path))
    assert code == 0
    assert json.loads(path.read_text())[0]["n_loc"] == 899


def test_count_time_budget(capsys, tmp_path):
    code, out, err = run(capsys, "count", "--height-bound", "10000", "--max-seconds", "0",
                         "--checkpoint", str(tmp_path / "k.json"))
    assert code == 3
    assert "checkpoint" in err and "partial" in json.loads(out)


def test_count_bad_bound(capsys):
    assert run(capsys, "count", "--height-bound", "0")[0] == 2


def test_solubility(capsys):
    code, out, _ = run(capsys, "solubility", "--coeffs", "1,1,1,-7")
    rep = json.loads(out)
    assert code == 0 and rep["everywhere_soluble"] is False
    assert rep["prime_verdicts"] == {"2": False, "7": True}
    code, out, _ = run(capsys, "solubility", "--coeffs", "-1,2,1,-2")
    assert json.loads(out)["everywhere_soluble"] is True
    assert run(capsys, "solubility", "--coeffs", "1,0,1,1")[0] == 2
    assert run(capsys, "solubility", "--coeffs", "1,x")[0] == 2


def test_sieve(capsys):
    code, out, _ = run(capsys, "sieve", "omega-size", "--prime", "5", "--brute-force")
    assert code == 0 and json.loads(out) == {"p": 5, "formula": 128, "brute_force": 128}
    code, out, _ = run(capsys, "sieve", "omega-size", "--prime", "2", "--brute-force")
    assert json.loads(out) == {"p": 2, "brute_force": 0}
    code, out, _ = run(capsys, "sieve", "f", "--limit", "3", "--exact")
    assert json.loads(out)["exact"] == "81/65"
    code, out, _ = run(capsys, "sieve", "bound", "--u", "4,4,4,4", "--limit", "2")
    assert json.loads(out)["bound"] == 4096
    assert run(capsys, "sieve", "bound", "--u", "4,4,4", "--limit", "2")[0] == 2
    assert run(capsys, "sieve", "omega-size", "--prime", "4")[0] == 2


@pytest.mark.parametrize("name, total", [("pi", "2"), ("pi-tilde", "2"),
                                         ("anti-diagonal-line", "0")])
def test_delta_presets(capsys, name, total):
    code, out, _ = run(capsys, "delta", "--preset", name)
    assert code == 0 and json.loads(out)["Delta"] == total


def test_delta_file(capsys, tmp_path):
    path = tmp_path / "f.json"
    path.write_text(json.dumps({"name": "x", "fibers": [
        {"label": "D", "degree": 2, "elements": [[0, 1], [1, 0]]}]}))
    code, out, _ = run(capsys, "delta", "--fibers", str(path))
    assert code == 0 and json.loads(out)["Delta"] == "1/2"
    assert run(capsys, "delta", "--preset", "nope")[0] == 2
    assert run(capsys, "delta", "--fibers", str(tmp_path / "missing.json"))[0] == 2


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", "omega", "--prime", "3", "--bound", "10")
    assert code == 0 and json.loads(out)["violations"] == 0
    code, out, _ = run(capsys, "verify", "oracle", "--samples", "50", "--coeff-bound", "9",
                       "--primes", "2,3", "--product-samples", "200")
    rep = json.loads(out)
    assert code == 0 and rep["disagreements"] == 0 and rep["unknowns"] == 0
    assert rep["product_formula"]["failures"] == 0
    assert run(capsys, "verify", "omega", "--prime", "2", "--bound", "10")[0] == 2


def test_report_ratios(capsys, tmp_path):
    ratios, ledger = tmp_path / "r.csv", tmp_path / "l.csv"
    code, out, _ = run(capsys, "report", "ratios", "--height-bounds", "1,100",
                       "--csv", str(ratios), "--ledger-csv", str(ledger))
    assert code == 0
    assert len(json.loads(out)) == 2
    assert ratios.read_text().startswith("B,n_loc_over_B")
    assert ledger.read_text().splitlines()[1] == "1,16,15,12,3,0,4"


def test_usage_errors(capsys):
    assert run(capsys)[0] == 2
    assert run(capsys, "bogus")[0] == 2
    assert run(capsys, "--help")[0] == 0


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "quadric_density", "delta", "--preset", "pi"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["Delta"] == "2"
