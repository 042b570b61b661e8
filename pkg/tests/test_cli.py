import subprocess
import sys

from pinchsem.cli import main
from pinchsem.harness import CSV_HEADER


def test_sweep_to_file(tmp_path):
    out = tmp_path / "s.csv"
    assert main(["sweep-power", "--trials", "3", "--grid", "0,10", "--seed", "2", "-o", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == ",".join(CSV_HEADER) and len(lines) == 7


def test_sweep_stdout(capsys):
    assert main(["sweep-qos", "--trials", "2", "--grid", "0.5,1", "--schemes", "cas"]) == 0
    assert capsys.readouterr().out.count("\ncas,R_B_min,") == 2


def test_phase_pairs(capsys):
    assert main(["phase-precision", "--trials", "1", "--grid", "0.02/0.02,100/100"]) == 0
    assert "100.0/100.0" in capsys.readouterr().out


def test_solve_one(capsys):
    assert main(["solve-one", "--user-s", "5,2", "--user-b", "12,-3", "--schemes", "equal,cas"]) == 0
    out = capsys.readouterr().out
    assert "scheme: equal" in out and "scheme: cas" in out


def test_config_errors(tmp_path, capsys):
    assert main(["sweep-power", "--trials", "0"]) == 2
    assert main(["outage", "--set", "bogus=1"]) == 2
    assert main(["solve-one", "--user-s", "5", "--user-b", "1,1"]) == 2
    bad = tmp_path / "c.yaml"
    bad.write_text("- not a mapping\n")
    assert main(["distance-ratio", "--config", str(bad)]) == 2
    assert "configuration error" in capsys.readouterr().err


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "pinchsem", "sweep-power", "--trials", "1", "--grid", "10",
                        "--schemes", "cas"], capture_output=True, text=True, check=True)
    assert r.stdout.startswith("scheme,")
