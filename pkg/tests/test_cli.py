import subprocess
import sys

import numpy as np
import pytest

import lmgtunnel.lmg as lmg_mod
from lmgtunnel.cli import main
from lmgtunnel.commands import cmd_evolve, cmd_gap, cmd_potential, cmd_spectrum
from lmgtunnel.config import RunConfig, load_config_file, parse_config_text
from lmgtunnel.datasets import FigureDataset, strip_timestamp, write_dataset
from lmgtunnel.selftest import run_selftest, selftest_report

FAST = RunConfig(chi_step=0.05, steps=40, chi_list=(0.0, 1.2))


# ---------------------------------------------------------------- config


def test_config_roundtrip():
    cfg = RunConfig(n_particles=8, chi_step=0.01, chi_list=(0.5, 2.5),
                    dt=0.2, steps=77, sign="a", out_dir="somewhere")
    assert parse_config_text(cfg.serialize()) == cfg


def test_config_file_and_overrides(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("n_particles = 6\ndt = 0.25  # comment\n\n# full line comment\n")
    cfg = load_config_file(path)
    assert cfg.n_particles == 6 and cfg.dt == 0.25
    assert cfg.steps == 1200  # untouched default


def test_config_unknown_key():
    with pytest.raises(ValueError, match="unknown key"):
        parse_config_text("bogus = 3\n")


def test_config_bad_line():
    with pytest.raises(ValueError, match="expected"):
        parse_config_text("just some words\n")


@pytest.mark.parametrize("kwargs", [
    {"n_particles": 7}, {"chi_step": -0.1}, {"chi_stop": -1.0}, {"dt": 0.0},
    {"steps": 0}, {"sign": "x"}, {"mean_phase": "avg"},
    {"level_i": 3, "level_j": 3}, {"level_j": 99}, {"chi_list": ()},
])
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        RunConfig(**kwargs).validate()


def test_chi_grid_deterministic():
    cfg = RunConfig()
    grid = cfg.chi_grid()
    assert len(grid) == 601
    assert grid[0] == 0.0
    assert grid[-1] == pytest.approx(3.0, abs=1e-12)


# ---------------------------------------------------------------- datasets


def test_dataset_write_and_strip(tmp_path):
    ds = FigureDataset(figure_id=2, columns=("chi", "gap"),
                       rows=[(0.0, 1.0), (0.5, 0.25)],
                       records=[("boundaries", {"chi1": 1.2, "chi2": 1.8})],
                       config_echo="np=10")
    path = write_dataset(ds, tmp_path)
    text = path.read_text()
    assert path.name == "fig2.csv"
    assert "# record: boundaries chi1=1.2" in text
    assert "# generated: " in text
    assert "# generated" not in strip_timestamp(text)
    assert text.strip().endswith("0.5,0.25")


# ---------------------------------------------------------------- spectrum


def test_cmd_spectrum_rows():
    (ds,) = cmd_spectrum(FAST)
    grid = FAST.chi_grid()
    assert len(ds.rows) == len(grid) * 11
    chi0 = np.array([r[2] for r in ds.rows if r[0] == 0.0])
    assert np.abs(np.sort(chi0) - np.arange(-5, 6)).max() < 1e-12
    # every block symmetric about zero
    for chi in (grid[0], grid[len(grid) // 2], grid[-1]):
        block = np.sort([r[2] for r in ds.rows if r[0] == chi])
        assert np.abs(block + block[::-1]).max() < 1e-10


# ---------------------------------------------------------------- gap


def test_cmd_gap_datasets():
    fig2, fig3 = cmd_gap(RunConfig())
    gaps = {r[0]: r[1] for r in fig2.rows}
    assert gaps[0.0] == pytest.approx(1.0, abs=1e-12)
    rec = dict(fig2.records)["boundaries"]
    assert rec["chi1"] == pytest.approx(1.2, abs=0.15)
    assert rec["chi2"] == pytest.approx(1.8, abs=0.15)
    assert fig3.columns == ("chi", "d1", "d2", "d3")
    d1 = np.array([r[1] for r in fig3.rows])
    assert np.all(d1 <= 1e-6)
    assert dict(fig3.records)["boundaries"] == rec


def test_cmd_gap_too_coarse():
    with pytest.raises(ValueError):
        cmd_gap(RunConfig(chi_stop=0.02, chi_step=0.005))  # 5 points < 7


# ---------------------------------------------------------------- potential


def test_cmd_potential_dataset():
    (ds,) = cmd_potential(RunConfig(), chi_list=(0.0, 2.5))
    rows = np.array(ds.rows)
    for chi in (0.0, 2.5):
        sel = rows[rows[:, 0] == chi]
        phis, vals = sel[:, 1], sel[:, 2]
        assert np.abs(vals - vals[::-1]).max() < 1e-8  # even in phi
        if chi == 0.0:
            assert phis[np.argmin(vals)] == pytest.approx(0.0, abs=1e-12)
    recs = {payload["chi"]: payload for name, payload in ds.records}
    v0 = rows[(rows[:, 0] == 2.5) & (rows[:, 1] == 0.0)][0, 2]
    assert v0 > recs[2.5]["E1"] > recs[2.5]["E0"]


# ---------------------------------------------------------------- evolve


def test_cmd_evolve_datasets():
    cfg = RunConfig(steps=700)
    fig5, fig6 = cmd_evolve(cfg, chi_list=(0.0, 1.2))
    rows5 = np.array(fig5.rows)
    assert len(rows5) == 2 * (cfg.steps + 1)
    p0 = rows5[(rows5[:, 0] == 0.0) & (rows5[:, 1] == 0.0)][0, 2]
    assert p0 == pytest.approx(1.0, abs=1e-10)
    assert rows5[:, 2].min() >= 0.0 and rows5[:, 2].max() <= 1.0 + 1e-8
    recs = {payload["chi"]: payload for name, payload in fig5.records}
    for chi in (0.0, 1.2):
        rec = recs[chi]
        assert abs(rec["omega"] - rec["delta_half"]) / rec["delta_half"] < 0.01
    rows6 = np.array(fig6.rows)
    assert np.abs(rows6[:, 2]).max() <= np.pi


def test_cmd_evolve_extends_window_for_slow_oscillation():
    # chi = 2.5 needs ~850 steps for two periods; a short window still
    # yields a frequency record while emitting only the configured rows
    cfg = RunConfig(steps=100)
    fig5, _ = cmd_evolve(cfg, chi_list=(2.5,))
    assert len(fig5.rows) == 101
    rec = dict(fig5.records)["frequency"]
    assert abs(rec["omega"] - rec["delta_half"]) / rec["delta_half"] < 0.01


# ---------------------------------------------------------------- CLI surface


def test_cli_gap_roundtrip(tmp_path):
    out = tmp_path / "o"
    code = main(["gap", "--chi-step", "0.05", "--out", str(out)])
    assert code == 0
    assert (out / "fig2.csv").exists() and (out / "fig3.csv").exists()


def test_cli_determinism(tmp_path):
    argsets = [["spectrum", "--chi-step", "0.1"],
               ["evolve", "--steps", "50", "--chi-list", "0,1.2"]]
    for args in argsets:
        out1, out2 = tmp_path / "a", tmp_path / "b"
        assert main(args + ["--out", str(out1)]) == 0
        assert main(args + ["--out", str(out2)]) == 0
        for f1 in sorted(out1.glob("*.csv")):
            t1 = strip_timestamp(f1.read_text())
            t2 = strip_timestamp((out2 / f1.name).read_text())
            assert t1 == t2, f"{f1.name} not deterministic"


def test_cli_config_precedence(tmp_path):
    cfg_file = tmp_path / "c.cfg"
    cfg_file.write_text("chi_step = 0.5\nn_particles = 6\n")
    out = tmp_path / "out"
    code = main(["spectrum", "--config", str(cfg_file), "--chi-step", "1.5",
                 "--out", str(out)])
    assert code == 0
    text = (out / "fig1.csv").read_text()
    # flag beats file; file beats default
    assert "chi=0:3:1.5" in text
    assert "np=6" in text


def test_cli_usage_errors(tmp_path):
    assert main(["gap", "--np", "7", "--out", str(tmp_path)]) == 1
    assert main(["gap", "--chi-step", "-1", "--out", str(tmp_path)]) == 1
    assert main(["nonsense"]) == 1
    assert main([]) == 1
    assert main(["spectrum", "--config", str(tmp_path / "missing.cfg")]) == 1
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("bogus = 1\n")
    assert main(["spectrum", "--config", str(cfg)]) == 1


def test_cli_numerical_failure_exit(tmp_path):
    # boundary features live past chi = 1; a clipped sweep cannot find them
    assert main(["gap", "--chi-stop", "1.0", "--out", str(tmp_path)]) == 2


def test_cli_help_exits_zero():
    assert main(["--help"]) == 0


def test_cli_version_subprocess():
    res = subprocess.run([sys.executable, "-m", "lmgtunnel.cli", "--version"],
                         capture_output=True, text=True)
    assert res.returncode == 0
    assert "lmg-tunnel" in res.stdout


def test_workers_env_matches_serial(tmp_path, monkeypatch):
    cfg = RunConfig(chi_step=0.25)
    (serial,) = cmd_spectrum(cfg)
    monkeypatch.setenv("LMGTUNNEL_WORKERS", "2")
    (parallel,) = cmd_spectrum(cfg)
    assert serial.rows == parallel.rows


# ---------------------------------------------------------------- selftest


def test_selftest_passes_and_deterministic():
    ok1, res1 = run_selftest()
    ok2, res2 = run_selftest()
    assert ok1 and ok2
    assert selftest_report(res1) == selftest_report(res2)


def test_selftest_cli_exit_code():
    assert main(["selftest"]) == 0


def test_selftest_catches_injected_sign_error(monkeypatch):
    # flipping the pairing ladder element leaves the spectrum invariant but
    # must trip the element-value and phase-space symbol oracles
    original = lmg_mod.ladder_squared_element
    monkeypatch.setattr(lmg_mod, "ladder_squared_element",
                        lambda j, m: -original(j, m))
    ok, results = run_selftest()
    assert not ok
    failed = {name for name, _, _, passed, _ in results if not passed}
    assert "hamiltonian_elements" in failed
    assert "weyl_symbol_closed_form" in failed
