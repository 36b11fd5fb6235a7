import csv
import io
import json
import subprocess
import sys

import pytest

from gbss.cli import dumps, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_discord_example(capsys):
    code, out, _ = run(capsys, "discord", "--n", "1", "--m", "1", "--t", "0.6,0.2,0.1", "--entropy", "vn", "--oracle-budget", "200")
    assert code == 0
    data = json.loads(out)
    assert data["schema"] == 1
    assert data["mu_max"] == pytest.approx(0.6)
    assert abs(data["gap"]) < 1e-6


def test_state_bell(capsys):
    code, out, _ = run(capsys, "state", "--n", "1", "--m", "1", "--t", "1,-1,1")
    data = json.loads(out)
    assert code == 0
    assert data["spectrum_closed"] == pytest.approx([0, 0, 0, 1])
    assert data["region"]["ppt"] is False
    assert data["spectrum_deviation"] < 1e-12


def test_levels_origin(capsys):
    code, out, _ = run(capsys, "levels", "--n", "1", "--m", "1", "--D", "0", "--count", "3")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0
    assert rows[0] == ["t1", "t2", "t3", "D", "physical", "ppt", "separable"]
    for row in rows[1:]:
        assert sum(float(v) != 0 for v in row[:3]) <= 1
        assert float(row[3]) == 0


def test_gmqd_and_region(capsys):
    code, out, _ = run(capsys, "gmqd", "--n", "1", "--t", "0.5,0.3,0.1", "--oracle-budget", "200")
    data = json.loads(out)
    assert code == 0 and data["D_closed"] == pytest.approx(0.025)
    for key in ("trCC", "maxTerm_closed", "D_closed", "D_oracle", "eta_max", "gap"):
        assert key in data
    code, out, _ = run(capsys, "region", "--n", "1")
    assert json.loads(out)["D_max_region"] == pytest.approx(0.5)


def test_gamma(capsys):
    code, out, _ = run(capsys, "gamma", "--d", "4")
    data = json.loads(out)
    assert code == 0 and data["identities_hold"] and len(data["gammas"]) == 5
    code, out, _ = run(capsys, "gamma", "--n", "2", "--convention", "weyl")
    assert json.loads(out)["convention"] == "weyl"


def test_state_file(capsys, tmp_path):
    path = tmp_path / "s.json"
    path.write_text('{"n": 1, "m": 2, "t": [0.2, 0.1, 0.0]}')
    code, out, _ = run(capsys, "state", "--state", str(path), "--output", str(tmp_path / "o.json"))
    assert code == 0 and out == ""
    assert json.loads((tmp_path / "o.json").read_text(encoding="utf-8"))["multiplicity"] == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["discord", "--n", "1", "--t", "0.1,0.2"],
        ["discord", "--state", "{bad json"],
        ["discord", "--n", "1", "--t", "a,b,c"],
        ["discord", "--n", "1", "--t", "0.1,0.1,0.1", "--entropy", "renyi:3"],
        ["gamma", "--d", "3"],
        ["levels", "--n", "2", "--m", "1", "--D", "0.1"],
        ["verify", "--only", "9"],
    ],
)
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert "error" in err


def test_argparse_usage_error(capsys):
    with pytest.raises(SystemExit) as info:
        main(["nonsense"])
    assert info.value.code == 2


def test_nonphysical_exit(capsys):
    code, out, err = run(capsys, "discord", "--n", "1", "--t", "1,1,1")
    assert code == 3 and out == ""
    assert "margins" in err
    code, _, _ = run(capsys, "gmqd", "--n", "1", "--t", "1,1,1")
    assert code == 3


def test_deterministic_output(capsys):
    argv = ["discord", "--n", "2", "--t", "0.3,0.2,0.1,0,0.1", "--oracle-budget", "100", "--seed", "5"]
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second


def test_seed_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("GBSS_SEED", "123")
    _, out, _ = run(capsys, "discord", "--n", "1", "--t", "0.3,0.2,0.1", "--oracle-budget", "10")
    assert json.loads(out)["seed"] == 123


def test_float_format():
    text = dumps({"a": 0.1, "b": 1.0, "c": [1e-20, 2]})
    assert '"a": 0.10000000000000001' in text
    assert '"b": 1.0' in text
    assert text.startswith('{\n  "schema": 1')
    assert json.loads(text)["c"] == [1e-20, 2]


def test_verify_subset(capsys):
    code, out, err = run(capsys, "verify", "--quick", "--only", "1,7")
    assert code == 0
    assert json.loads(out)["passed"] is True
    assert err.count("[PASS]") == 2


def test_verify_reports_failure(capsys):
    code, out, err = run(capsys, "verify", "--only", "6")
    assert code == 1
    assert "[FAIL] criterion 6" in err


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "gbss", "region", "--n", "1"], capture_output=True, text=True)
    assert res.returncode == 0
    assert json.loads(res.stdout)["n"] == 1
