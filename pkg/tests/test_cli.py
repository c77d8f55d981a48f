import csv

import numpy as np
import pytest

from softsafe import actuator, cli, limb
from softsafe.actuator import ActuatorParams
from softsafe.config import load_config


def write(path, text):
    path.write_text(text)
    return path


def test_run_step_config(config_dir, tmp_path, capsys):
    out = tmp_path / "tel.csv"
    assert cli.main(["run", "--config", str(config_dir / "step_pi_aw.ini"), "--out", str(out)]) == 0
    recs = limb.read_telemetry_csv(out)
    assert max(limb.max_temperatures(recs)) <= 65.0 + 1e-6
    line = capsys.readouterr().out
    assert "max_T0=" in line and "activation_time=" in line and "final_error=" in line


def test_run_bad_gamma_names_field(tmp_path, capsys):
    cfg = write(tmp_path / "bad.ini", "[supervisor]\ngamma = 1.3\n")
    assert cli.main(["run", "--config", str(cfg), "--out", str(tmp_path / "t.csv")]) != 0
    assert "gamma" in capsys.readouterr().err
    assert not (tmp_path / "t.csv").exists()


def test_run_missing_trajectory_names_path(tmp_path, capsys):
    cfg = write(tmp_path / "traj.ini", "[scenario]\nkind = trajectory\ntrajectory = nowhere.csv\n")
    assert cli.main(["run", "--config", str(cfg)]) != 0
    assert "nowhere.csv" in capsys.readouterr().err


def test_run_unknown_key(tmp_path, capsys):
    cfg = write(tmp_path / "k.ini", "[supervisor]\ngama = 0.2\n")
    assert cli.main(["run", "--config", str(cfg)]) != 0
    assert "gama" in capsys.readouterr().err


def test_run_overrides(config_dir, tmp_path):
    out = tmp_path / "tel.csv"
    code = cli.main(["run", "--config", str(config_dir / "step_pi_aw.ini"), "--out", str(out), "--dt", "0.05"])
    # actuator dt stays at 0.1, so a different run dt is a config error
    assert code != 0
    assert cli.main(["run", "--config", str(config_dir / "step_pi_aw.ini"), "--out", str(out),
                     "--mismatch", "1.2"]) == 0


def test_verify_default(capsys):
    assert cli.main(["verify"]) == 0
    out = capsys.readouterr().out
    assert "iterations=1 verdict=SAFE" in out
    assert "2 4" in out.splitlines()


def test_verify_gamma_batch(tmp_path, capsys):
    out = tmp_path / "o.txt"
    assert cli.main(["verify", "--gammas", "0.05,0.1,0.2,0.3,0.5,0.7,0.9", "--out", str(out)]) == 0
    assert capsys.readouterr().out.count("verdict=SAFE") == 7
    assert out.read_text().count("2 4\n") == 7


def test_verify_rejects_unit_pole(tmp_path, capsys):
    cfg = write(tmp_path / "a.ini", "[actuator]\na1 = 1.0\n")
    assert cli.main(["verify", "--config", str(cfg)]) != 0
    assert "a1" in capsys.readouterr().err


def test_sweep_csv(config_dir, tmp_path):
    out = tmp_path / "sweep.csv"
    assert cli.main(["sweep", "--config", str(config_dir / "sweep.ini"), "--out", str(out),
                     "--gammas", "0.05,0.5,0.9"]) == 0
    with out.open() as fh:
        rows = list(csv.DictReader(fh))
    assert list(rows[0])[:5] == ["gamma", "activation_time", "max_T0", "max_T1", "final_error"]
    times = [float(r["activation_time"]) for r in rows]
    assert times == sorted(times)


def test_sweep_empty_gammas(tmp_path, capsys):
    assert cli.main(["sweep", "--gammas", "", "--out", str(tmp_path / "s.csv")]) != 0
    assert "empty" in capsys.readouterr().err


def calibration_log(path, n=200, seed=0):
    rng = np.random.default_rng(seed)
    data = actuator.generate_samples(ActuatorParams(), rng.uniform(0, 1, n))
    actuator.write_calibration_csv(path, data)
    return path


def test_calibrate_round_trip(tmp_path, capsys):
    log = calibration_log(tmp_path / "log.csv")
    out = tmp_path / "fit.ini"
    assert cli.main(["calibrate", str(log), "--dt", "0.1", "--out", str(out)]) == 0
    printed = capsys.readouterr().out
    rms = float(printed.split("residual_rms=")[1].split()[0])
    assert rms < 1e-10
    assert cli.main(["run", "--config", str(out), "--out", str(tmp_path / "t.csv")]) == 0
    fit = load_config(out).actuators[0]
    for key in ("a1", "a2", "a3"):
        assert getattr(fit, key) == pytest.approx(getattr(ActuatorParams(), key), abs=1e-8)


def test_calibrate_too_few_rows(tmp_path, capsys):
    log = write(tmp_path / "log.csv", "k,w,u,w_next\n0,25,0.5,30\n1,30,0.1,30.75\n")
    assert cli.main(["calibrate", str(log)]) != 0
    assert "error:" in capsys.readouterr().err


def test_calibrate_bad_input_names_row(tmp_path, capsys):
    log = write(tmp_path / "log.csv", "k,w,u,w_next\n0,25,0.5,30\n1,30,1.5,45\n2,45,0.0,44\n")
    assert cli.main(["calibrate", str(log)]) != 0
    assert "row 3" in capsys.readouterr().err


def test_calibrate_missing_file(tmp_path, capsys):
    assert cli.main(["calibrate", str(tmp_path / "nope.csv")]) != 0
    assert "nope.csv" in capsys.readouterr().err
