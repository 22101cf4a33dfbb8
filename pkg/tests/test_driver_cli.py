import math
import os

import numpy as np
import pytest

from rsav import driver, io
from rsav.cli import main
from rsav.config import parse_config
from rsav.errors import DivergenceError

AC = "model = allen-cahn\nNx = 32\nNy = 32\n"


def cfg_of(text, tmp_path):
    return parse_config(text + f"out_dir = {tmp_path}\n")


def test_series_row_count(tmp_path):
    cfg = cfg_of(AC + "dt = 0.01\nT = 0.1\n", tmp_path)
    driver.run(cfg)
    rows = io.read_series(tmp_path / "series.csv")
    assert len(rows) == 11
    assert [r["step"] for r in rows] == list(range(11))


def test_series_every_keeps_final_step(tmp_path):
    cfg = cfg_of(AC + "dt = 0.01\nT = 0.1\nseries_every = 4\n", tmp_path)
    res = driver.run(cfg, write=False)
    assert [r.step for r in res.records] == [0, 4, 8, 10]


def test_ac_star_energy_non_increasing(tmp_path):
    cfg = cfg_of("model = allen-cahn\nic = star\ndt = 0.01\nT = 1\n", tmp_path)
    res = driver.run(cfg, write=False)
    E = np.array([r.E_orig for r in res.records])
    assert np.all(np.diff(E) <= 1e-12 * abs(E[0]))
    E_mod = np.array([r.E_mod for r in res.records])
    assert np.all(np.diff(E_mod) <= 1e-12 * abs(E_mod[0]))


def test_zero_field_snapshots(tmp_path):
    cfg = cfg_of(AC + "ic = zero\ndt = 0.1\nT = 1\nsnapshot_every = 5\n", tmp_path)
    res = driver.run(cfg)
    assert len(res.snapshots) == 3
    files = sorted(os.listdir(tmp_path / "snapshots"))
    assert files == ["snap_0000000.txt", "snap_0000005.txt", "snap_0000010.txt"]
    for f in files:
        phi, *_ = io.read_snapshot_text(tmp_path / "snapshots" / f)
        assert np.all(phi == 0)


def test_refine_zero_field_gives_na(tmp_path):
    cfg = cfg_of(AC + "ic = zero\ndt = 0.1\nT = 0.2\n", tmp_path)
    table = driver.refine(cfg, 3)
    assert table.err_phi == [0.0, 0.0]
    assert all(math.isnan(o) for o in table.order_phi)
    text = (tmp_path / "refine.csv").read_text().splitlines()
    assert text[0] == "level,dt,err_phi,err_q,order_phi,order_q"
    assert text[1].endswith("n/a,n/a")


def test_refine_needs_three_levels(tmp_path):
    with pytest.raises(ValueError):
        driver.refine(cfg_of(AC + "dt = 0.1\nT = 0.2\n", tmp_path), 2, write=False)


@pytest.mark.parametrize("scheme", ["sav-cn", "sav-bdf2"])
def test_heat_refinement_order(tmp_path, scheme):
    cfg = cfg_of(f"model = heat\nNx = 16\nNy = 16\ndt = 0.01\nT = 1\nscheme = {scheme}\n", tmp_path)
    table = driver.refine(cfg, 5, write=False)
    assert all(abs(o - 2.0) <= 0.05 for o in table.order_phi)


def test_bdf2_bootstrap_keeps_second_order(tmp_path):
    cfg = cfg_of(AC + "scheme = rsav-bdf2\ndt = 0.05\nT = 0.5\n", tmp_path)
    table = driver.refine(cfg, 5, write=False)
    assert all(abs(o - 2.0) <= 0.2 for o in table.order_phi[1:])


def test_compare_with_zero_eta(tmp_path):
    cfg = cfg_of(AC + "ic = star\ndt = 0.01\nT = 0.1\neta = 0\n", tmp_path)
    comp = driver.compare(cfg)
    assert comp.max_gap("relaxed") <= comp.max_gap("baseline")
    assert (tmp_path / "compare.csv").exists()


def test_forced_baseline_runs_are_identical(tmp_path):
    cfg = cfg_of(AC + "scheme = sav-cn\nic = star\ndt = 0.01\nT = 0.1\n", tmp_path)
    driver.run(cfg, out_dir=tmp_path / "a")
    driver.run(cfg, out_dir=tmp_path / "b")
    assert (tmp_path / "a" / "series.csv").read_bytes() == (tmp_path / "b" / "series.csv").read_bytes()


def write_cfg(tmp_path, text):
    p = tmp_path / "run.cfg"
    p.write_text(text)
    return str(p)


def test_cli_run_and_refine(tmp_path, capsys):
    path = write_cfg(tmp_path, AC + "dt = 0.05\nT = 0.1\n")
    assert main(["run", path, "--out", str(tmp_path / "o")]) == 0
    assert (tmp_path / "o" / "series.csv").exists()
    assert main(["refine", path, "--levels", "3", "--out", str(tmp_path / "r")]) == 0
    assert "order_phi" in capsys.readouterr().out
    assert main(["compare", path, "--out", str(tmp_path / "c")]) == 0


def test_cli_seed_override(tmp_path):
    path = write_cfg(tmp_path, AC + "ic = random\nseed = 1\ndt = 0.05\nT = 0.05\n")
    main(["run", path, "--out", str(tmp_path / "a"), "--seed", "2"])
    main(["run", path, "--out", str(tmp_path / "b"), "--seed", "2"])
    main(["run", path, "--out", str(tmp_path / "c")])
    a = (tmp_path / "a" / "series.csv").read_bytes()
    assert a == (tmp_path / "b" / "series.csv").read_bytes()
    assert a != (tmp_path / "c" / "series.csv").read_bytes()


def test_cli_config_error(tmp_path, capsys):
    path = write_cfg(tmp_path, "model = allen-cahn\ndt = -1\nT = 1\n")
    assert main(["run", path]) == 2
    assert "dt" in capsys.readouterr().err


def test_cli_missing_file(tmp_path):
    assert main(["run", str(tmp_path / "nope.cfg")]) == 4


def test_cli_unwritable_output(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    path = write_cfg(tmp_path, AC + "dt = 0.05\nT = 0.1\n")
    assert main(["run", path, "--out", str(blocker / "sub")]) == 4


def test_cli_divergence_exit_code(tmp_path, monkeypatch):
    def boom(*args, **kwargs):
        raise DivergenceError(7)

    monkeypatch.setattr(driver, "simulate", boom)
    path = write_cfg(tmp_path, AC + "dt = 0.05\nT = 0.1\n")
    assert main(["run", path, "--out", str(tmp_path / "o")]) == 3
