import json
import subprocess
import sys
from fractions import Fraction

import numpy as np
import pytest

from eprgame import cli
from eprgame import closedform as cf
from eprgame.closedform import OutcomeDistribution
from eprgame.equilibrium import PhaseDiagram


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def csv_rows(text):
    return [line.split(",") for line in text.strip().splitlines()]


def test_dist_examples(capsys):
    code, out, _ = run(capsys, "dist", "--family", "ghz", "--n", "2", "--gamma", "1.5708", "--kappa", "0,0")
    assert code == 0
    rows = dict(csv_rows(out)[1:])
    assert float(rows["00"]) == pytest.approx(0.5, abs=1e-5)
    assert float(rows["11"]) == pytest.approx(0.5, abs=1e-5)
    assert float(rows["01"]) == 0
    assert float(rows["total"]) == pytest.approx(1, abs=1e-12)

    code, out, _ = run(capsys, "dist", "--family", "w", "--n", "3", "--kappa", "0,0,0")
    rows = dict(csv_rows(out)[1:])
    for bits in ("100", "010", "001"):
        assert float(rows[bits]) == pytest.approx(1 / 3, abs=1e-15)
    assert float(rows["111"]) == 0

    code, out, _ = run(capsys, "dist", "--family", "ghz", "--n", "3", "--gamma", "0", "--kappa", "0,0,0")
    assert dict(csv_rows(out)[1:])["000"] == "1"


def test_dist_json_roundtrip(capsys):
    _, out, _ = run(capsys, "dist", "--n", "3", "--gamma", "0.7", "--kappa", "0.1,0.5,2", "--alpha", "0.3,0.2,0.1",
                    "--format", "json")
    body = json.loads(out)
    probs = np.array([body["probabilities"][format(i, "03b")] for i in range(8)])
    d = OutcomeDistribution(body["n_players"], probs)
    frame = cf.MeasurementFrame(3, "ghz", 0.7, [(0.3, 0.2, 0.1)] * 3, (0.1, 0.5, 2.0))
    np.testing.assert_array_equal(d.probabilities, cf.full_distribution(frame).probabilities)


def test_dist_single_outcome_large_n(capsys):
    code, out, _ = run(capsys, "dist", "--n", "300", "--gamma", "0.3", "--kappa", "0.4", "--outcome", "0" * 300)
    assert code == 0
    assert 0 <= float(csv_rows(out)[1][1]) <= 1
    code, _, err = run(capsys, "dist", "--n", "21")
    assert code == cli.EXIT_INVALID and "--outcome" in err


def test_dist_per_player_alpha(capsys):
    code, out, _ = run(capsys, "dist", "--n", "2", "--alpha", "0,0,0;3.141592653589793,0,0", "--kappa", "0")
    assert code == 0
    assert float(dict(csv_rows(out)[1:])["01"]) == pytest.approx(1, abs=1e-15)


@pytest.mark.parametrize("argv", [
    ["dist", "--n", "1"],
    ["dist", "--n", "2", "--gamma", "3"],
    ["dist", "--n", "2", "--kappa", "0,0,0"],
    ["dist", "--n", "2", "--gamma", "0.1", "--cos-gamma", "0.5"],
    ["dist", "--n", "2", "--alpha", "1,2"],
    ["dist", "--n", "two"],
    ["equilibria", "--n", "2", "--payoff", "1,2,3"],
    ["equilibria", "--n", "2", "--payoff", "nonsense"],
    ["equilibria", "--n", "2", "--cos-gamma", "1.5"],
    ["equilibria", "--n", "3", "--payoff=-1,2,0,0", "--require-class"],
    ["phase-diagram", "--n", "3", "--payoff", "chicken"],
    ["phase-diagram", "--n", "3", "--payoff", "1,0,1,2"],
    ["verify", "--n", "15", "--samples", "1"],
    ["verify", "--n", "3", "--samples", "0"],
])
def test_invalid_config_exit_code(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == cli.EXIT_INVALID
    assert err


def test_argparse_errors_exit_two():
    proc = subprocess.run([sys.executable, "-m", "eprgame", "dist"], capture_output=True)
    assert proc.returncode == 2


def test_range_violation_exit_code(capsys, monkeypatch):
    monkeypatch.setattr(cf.kernels, "ghz_dense", lambda k, c, o: np.full(len(k) and 1 << len(k), -0.5))
    code, _, err = run(capsys, "dist", "--n", "2")
    assert code == cli.EXIT_RANGE
    assert "outside" in err


@pytest.mark.parametrize("family", ["ghz", "w"])
def test_verify_passes(capsys, family):
    code, out, _ = run(capsys, "verify", "--family", family, "--n", "2..6", "--samples", "100", "--seed", "7")
    assert code == 0
    rows = csv_rows(out)
    assert rows[0] == ["family", "n", "samples", "max_dev"]
    assert [r[1] for r in rows[1:6]] == ["2", "3", "4", "5", "6"]
    assert all(float(r[3]) <= 1e-9 for r in rows[1:6])
    assert out.strip().endswith("PASS")


def test_verify_negative_control(capsys, monkeypatch):
    monkeypatch.setitem(cf.OMEGA_SIGN_BY_N_MOD_4, 3, 1)
    code, out, _ = run(capsys, "verify", "--family", "ghz", "--n", "2..4", "--samples", "20", "--seed", "7")
    assert code == cli.EXIT_VERIFY
    assert "FAIL" in out


def test_verify_json(capsys):
    code, out, _ = run(capsys, "verify", "--n", "3", "--samples", "5", "--format", "json", "--timing")
    body = json.loads(out)
    assert code == 0 and body["passed"]
    assert body["results"][0]["speedup"] > 0


def test_equilibria_examples(capsys):
    _, out, _ = run(capsys, "equilibria", "--n", "2", "--payoff", "3,-3,4,1", "--gamma", "0")
    assert csv_rows(out)[1][:3] == ["0", "", "1"]
    _, out, _ = run(capsys, "equilibria", "--n", "5", "--payoff", "3,-3,4,1", "--cos-gamma", "0.01")
    assert [r[0] for r in csv_rows(out)[1:]] == ["2"]
    _, out, _ = run(capsys, "equilibria", "--n", "2", "--cos-gamma", "1/3")
    assert csv_rows(out)[1:] == [["0", "", "1.6666666666666667", "true", "false"],
                                 ["1", "1.6666666666666667", "3.3333333333333335", "false", "true"]]


def test_equilibria_minority_gamma_independent(capsys):
    outs = {run(capsys, "equilibria", "--n", "4", "--payoff", "minority", "--gamma", str(g))[1]
            for g in (-1.5, -0.2, 0.0, 0.9, 1.5707963267948966)}
    assert len(outs) == 1


def test_equilibria_piecewise_payoff(capsys):
    code, out, _ = run(capsys, "equilibria", "--n", "4", "--payoff", "appendix-b", "--gamma", "0")
    assert code == 0
    assert csv_rows(out)[1][:3] == ["0", "", "1"]


def test_equilibria_json_roundtrip(capsys):
    _, out, _ = run(capsys, "equilibria", "--n", "3", "--cos-gamma", "0.2", "--format", "json")
    body = json.loads(out)
    assert body["n_players"] == 3
    assert [e["n"] for e in body["equilibria"]] == [1]
    pc, pd = cli.eq.ne_payoffs(cli.game.STANDARD_PD, 3, 1, cos_gamma=Fraction(1, 5))
    assert body["equilibria"][0]["payoff_cooperate"] == float(pc)
    assert body["equilibria"][0]["payoff_defect"] == float(pd)


def test_phase_diagram_examples(capsys):
    _, out, _ = run(capsys, "phase-diagram", "--n", "2", "--payoff", "3,-3,4,1")
    rows = csv_rows(out)
    assert rows[0] == list(cli.eq.CSV_COLUMNS)
    assert [(r[0], float(r[1]), float(r[2])) for r in rows[1:]] == [("0", 1 / 3, 1.0), ("1", 0.0, 1 / 3)]
    _, out, _ = run(capsys, "phase-diagram", "--n", "9", "--payoff", "3,-3,4,1")
    assert len(csv_rows(out)) == 1 + 5


def test_phase_diagram_curve(capsys):
    _, out, _ = run(capsys, "phase-diagram", "--n", "2", "--curve")
    zones, curve = out.strip().split("\n\n")
    rows = csv_rows(curve)
    assert rows[0] == ["cos_gamma", "payoff_defect", "kind"]
    edges = [r for r in rows[1:] if r[2] == "edge"]
    assert float(edges[0][0]) == pytest.approx(1 / 3, abs=1e-16)
    assert float(edges[0][1]) == pytest.approx(5 / 3, abs=1e-15)


def test_phase_diagram_json_roundtrip(capsys):
    _, out, _ = run(capsys, "phase-diagram", "--n", "6", "--payoff", "pd-standard", "--format", "json")
    d = PhaseDiagram.from_json(out)
    assert d == cli.eq.pd_phase_boundaries(cli.parse_payoff("pd-standard", 6), 6)


def test_payoff_command(capsys):
    code, out, _ = run(capsys, "payoff", "--n", "3", "--x", "0.2,0.5,0.9", "--gamma", "0.7")
    assert code == 0
    for r in csv_rows(out)[1:]:
        assert float(r[2]) == pytest.approx(float(r[3]), abs=1e-12)
    code, out, _ = run(capsys, "payoff", "--n", "3", "--x", "0.5", "--payoff", "appendix-b", "--cos-gamma", "0.5")
    for r in csv_rows(out)[1:]:
        assert float(r[2]) == pytest.approx(float(r[3]), abs=1e-12)
    _, out, _ = run(capsys, "payoff", "--n", "2", "--x", "0.5", "--format", "json")
    assert json.loads(out)["players"][0]["payoff"] == pytest.approx(9 / 4)


def test_output_file_and_env_dir(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv(cli.OUTPUT_DIR_ENV, str(tmp_path))
    code, out, _ = run(capsys, "phase-diagram", "--n", "3", "--out", "sub/pd.csv")
    assert code == 0 and out == ""
    assert (tmp_path / "sub" / "pd.csv").read_text().startswith("n,cos_gamma_lo")
    target = tmp_path / "abs.json"
    run(capsys, "dist", "--n", "2", "--format", "json", "--out", str(target))
    assert json.loads(target.read_text())["n_players"] == 2


@pytest.mark.parametrize("argv", [
    ["verify", "--n", "2..4", "--samples", "10", "--seed", "3"],
    ["dist", "--n", "4", "--gamma", "0.3", "--kappa", "0.1,0.2,0.3,0.4", "--format", "json"],
    ["phase-diagram", "--n", "5", "--curve"],
])
def test_determinism(capsys, argv):
    first = run(capsys, *argv)[1]
    second = run(capsys, *argv)[1]
    assert first == second


def test_seed_changes_frames(capsys):
    a = run(capsys, "verify", "--n", "3", "--samples", "3", "--seed", "1")[1]
    b = run(capsys, "verify", "--n", "3", "--samples", "3", "--seed", "2")[1]
    assert a != b


def test_number_format():
    assert cli.fmt(0.1) == "0.10000000000000001"
    assert float(cli.fmt(1 / 3)) == 1 / 3
    assert cli.fmt(Fraction(5, 3)) == "1.6666666666666667"
    assert cli.fmt(None) == "" and cli.fmt(True) == "true" and cli.fmt(7) == "7"


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "eprgame", "equilibria", "--n", "2"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[1].startswith("0,")
