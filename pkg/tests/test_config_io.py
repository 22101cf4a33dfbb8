import numpy as np
import pytest

from rsav import io
from rsav import spectral as sp
from rsav.config import load_config, parse_config
from rsav.errors import ConfigError
from rsav.initial import cosine, make_initial, random_field, splitmix64, star, uniform_pm1


def test_parse_defaults():
    cfg = parse_config("model = allen-cahn\ndt = 0.01\nT = 1\n")
    m = cfg.model_spec()
    assert m.gammas == (1.0,) and m.Cs == (1.0,)
    assert cfg.eta == 0.95 and cfg.scheme == "rsav-cn" and cfg.nsteps == 100


def test_parse_full():
    text = """
    # comment line
    model = cahn-hilliard   # trailing comment
    scheme = sav-bdf2
    dt = 1e-3
    T = 0.01
    Nx = 32
    Ny = 16
    Lx = 2pi
    Ly = 0.5*pi
    epsilon = 0.02
    lambda = 0.01
    gamma0 = 2
    C0 = 3
    ic = random
    seed = 0xFF
    phi0_hat = 0.25
    snapshot_format = binary
    dealias = yes
    """
    cfg = parse_config(text)
    m = cfg.model_spec()
    assert (cfg.Nx, cfg.Ny, cfg.seed, cfg.family, cfg.relaxed) == (32, 16, 255, "bdf2", False)
    assert cfg.Lx == pytest.approx(2 * np.pi) and cfg.Ly == pytest.approx(0.5 * np.pi)
    assert (m.epsilon, m.lam, m.gammas, m.Cs) == (0.02, 0.01, (2.0,), (3.0,))
    assert cfg.dealias is True


def test_parse_split_indexed():
    cfg = parse_config(
        "model = split-double-well\ndt = 0.1\nT = 1\n"
        "gamma_1 = 0.3\ngamma_2 = 0.7\nC_1 = 1\nC_2 = 1\nw_1 = 0.25\nw_2 = 0.75\n"
    )
    m = cfg.model_spec()
    assert m.gammas == (0.3, 0.7) and m.weights == (0.25, 0.75)


@pytest.mark.parametrize(
    "text, key",
    [
        ("model = allen-cahn\ndt = -1\nT = 1\n", "dt"),
        ("modle = ac\nmodel = allen-cahn\ndt = 0.1\nT = 1\n", "modle"),
        ("model = allen-cahn\ndt = 0.1\n", "T"),
        ("model = foo\ndt = 0.1\nT = 1\n", "model"),
        ("model = allen-cahn\ndt = 0.1\nT = 1\nD = 2\n", "D"),
        ("model = allen-cahn\ndt = 0.1\ndt = 0.2\nT = 1\n", "dt"),
        ("model = allen-cahn\ndt = abc\nT = 1\n", "dt"),
        ("model = allen-cahn\ndt = 0.1\nT = 1\nNx = 7\n", "Nx"),
        ("model = allen-cahn\ndt = 0.1\nT = 1\neta = 2\n", "eta"),
        ("model = allen-cahn\ndt = 0.1\nT = 1\nic = random\n", "seed"),
        ("model = allen-cahn\ndt = 0.3\nT = 1\n", "T"),
        ("model = allen-cahn\ndt = 0.1\nT = 1\ngamma_1 = 1\n", "gamma_1"),
        ("model = split-double-well\ndt = 0.1\nT = 1\ngamma_1 = 1\n", "C_1"),
    ],
)
def test_parse_errors_name_the_key(text, key):
    with pytest.raises(ConfigError) as err:
        parse_config(text)
    assert err.value.key == key
    assert f"'{key}'" in str(err.value)


def test_error_reports_line():
    with pytest.raises(ConfigError) as err:
        parse_config("model = allen-cahn\ndt = 0.1\nT = 1\nbogus = 3\n")
    assert err.value.line == 4


def test_load_config(tmp_path):
    p = tmp_path / "c.cfg"
    p.write_text("model = heat\ndt = 0.1\nT = 1\nD = 0.5\n")
    assert load_config(p).model_spec().D == 0.5


def test_splitmix64_reference_values():
    # Published reference outputs of SplitMix64 seeded with 1234567
    out = splitmix64(1234567, 5)
    assert [int(v) for v in out] == [
        6457827717110365317,
        3203168211198807973,
        9817491932198370423,
        4593380528125082431,
        16408922859458223821,
    ]


def test_uniform_range_and_determinism():
    u = uniform_pm1(42, (64, 64))
    assert u.min() >= -1.0 and u.max() < 1.0
    assert np.array_equal(u, uniform_pm1(42, (64, 64)))
    assert not np.array_equal(u, uniform_pm1(43, (64, 64)))


def test_initial_conditions():
    g = sp.make_grid(32, 32, 1.0, 1.0)
    assert cosine(g)[0, 0] == pytest.approx(0.01)
    s = star(g, 0.01)
    assert np.all(np.abs(s) <= 1.0)
    assert s[16, 16] == pytest.approx(1.0)
    r = random_field(g, 0.4, 0.05, seed=7)
    assert r.mean() == pytest.approx(0.4, abs=1e-15)
    assert np.max(np.abs(r - 0.4)) <= 0.05 + 1e-15
    cfg = parse_config("model = allen-cahn\ndt = 0.1\nT = 1\nic = zero\nNx = 32\nNy = 32\n")
    assert np.all(make_initial(cfg, g) == 0)


def make_record(step, t):
    from rsav.diagnostics import EnergyRecord

    return EnergyRecord(step, t, 1.0 / 3, 0.1, (0.5, 0.25), (0.5, 0.2), float("nan"), (0.0, 0.05), 2.0, 0.0, -1e-17)


def test_series_roundtrip(tmp_path):
    recs = [make_record(0, 0.0), make_record(1, 0.1)]
    p = tmp_path / "series.csv"
    io.write_series(p, recs)
    lines = p.read_text().splitlines()
    assert lines[0] == "step,t,E_orig,E_mod,q_1,q_2,Q_1,Q_2,xi0,mass,diss,law_residual"
    rows = io.read_series(p)
    assert rows[1]["E_orig"] == 1.0 / 3 and rows[1]["t"] == 0.1
    assert np.isnan(rows[0]["xi0"])
    io.write_series(tmp_path / "again.csv", recs)
    assert (tmp_path / "again.csv").read_bytes() == p.read_bytes()


@pytest.mark.parametrize("binary", [False, True])
def test_snapshot_roundtrip(tmp_path, binary):
    rng = np.random.default_rng(0)
    phi = rng.normal(size=(6, 4))
    path = io.write_snapshot(tmp_path, 12, phi, 0.37, 2.0, 3.0, binary)
    assert path.endswith("snap_0000012." + ("fld" if binary else "txt"))
    reader = io.read_snapshot_binary if binary else io.read_snapshot_text
    back, t, Lx, Ly = reader(path)
    assert np.array_equal(back, phi)
    assert (t, Lx, Ly) == (0.37, 2.0, 3.0)


def test_binary_layout(tmp_path):
    phi = np.arange(6.0).reshape(3, 2)
    path = io.write_snapshot(tmp_path, 0, phi, 1.5, 1.0, 2.0, binary=True)
    raw = open(path, "rb").read()
    assert raw[:4] == b"FLD1"
    head = np.frombuffer(raw[4:44], "<f8")
    assert list(head) == [1.5, 3.0, 2.0, 1.0, 2.0]
    assert list(np.frombuffer(raw[44:], "<f8")) == [0, 1, 2, 3, 4, 5]


def test_text_layout(tmp_path):
    phi = np.array([[1.0, 2.0], [3.0, 4.0], [5.0, 6.0]])  # Nx=3, Ny=2
    path = io.write_snapshot(tmp_path, 0, phi, 0.0, 1.0, 1.0)
    lines = open(path).read().splitlines()
    assert lines[1] == "# Nx=3 Ny=2 Lx=1 Ly=1"
    assert lines[2:] == ["1 3 5", "2 4 6"]
