import json

import pytest

from sqzspec.cli import EXIT_CONFIG, EXIT_IO, EXIT_NUMERIC, main, run_spectrum, run_sweep
from sqzspec.config import KEYS, RunConfig, parse_config
from sqzspec.errors import ConfigError

CURRENT_DOC = """# photocurrent run
mode = current
gamma1 = 1
gamma2 = 0.5
rabi_sq = 1/12
gamma_c = 0.1
gamma_s = 10
dt_window = 0.05
horizon = 100
grid_min = -2
grid_max = 2
grid_points = 5
format = csv
"""


def test_defaults():
    cfg = parse_config("mode=ideal\ngamma2=0.5\nrabi_sq=0.0833333")
    assert cfg.mode == "ideal" and cfg.gamma1 == 1.0 and cfg.rabi_sq == 0.0833333
    assert RunConfig().gamma2_eff == 0.5


@pytest.mark.parametrize("doc,key,line", [
    ("rabi_sq=-1", "rabi_sq", 1),
    ("mode=ideal\nbogus=3", "bogus", 2),
    ("mode=laser", "mode", 1),
    ("gamma2=0.1", "gamma2", 1),
    ("grid_points=1", "grid_points", 1),
    ("grid_points=2.5", "grid_points", 1),
    ("grid_min=1\ngrid_max=0", "grid_max", 2),
    ("mode=ideal\ngamma_f=0.1", "gamma_f", 2),
    ("mode=current\ngamma_c=0", "gamma_c", 2),
    ("gamma1=abc", "gamma1", 1),
    ("format=xml", "format", 1),
])
def test_invalid_keys(doc, key, line):
    with pytest.raises(ConfigError) as exc:
        parse_config(doc)
    assert exc.value.key == key and exc.value.line == line
    assert key in str(exc.value)


def test_syntax_errors():
    with pytest.raises(ConfigError) as exc:
        parse_config("mode=ideal\n\njust text")
    assert exc.value.line == 3
    with pytest.raises(ConfigError):
        parse_config("rabi_sq=1\nrabi_sq=2")


def test_roundtrip_echo(tmp_path):
    cfg = parse_config(CURRENT_DOC + f"out={tmp_path / 'cur'}\n")
    run_spectrum(cfg, CURRENT_DOC)
    meta = json.loads((tmp_path / "cur.json").read_text())
    assert meta["config_text"] == CURRENT_DOC
    assert RunConfig(**meta["config"]) == cfg
    assert meta["assumptions"]["shot_noise_mode"] == "normally-ordered-zero"
    assert set(meta["config"]) == set(KEYS)


def test_csv_format_and_determinism(tmp_path):
    cfg = parse_config(f"mode=ideal\nrabi_sq=1/12\ngrid_points=11\nout={tmp_path / 'a'}")
    run_spectrum(cfg)
    first = (tmp_path / "a.csv").read_bytes()
    run_spectrum(cfg)
    assert (tmp_path / "a.csv").read_bytes() == first
    lines = first.decode().splitlines()
    assert lines[0] == "delta_omega,s_value" and len(lines) == 12
    assert lines[6] == "0,-0.0445448237225"


def test_json_format(tmp_path):
    cfg = parse_config(f"mode=optical\ngamma_f=0.1\ngrid_points=3\nformat=json\nout={tmp_path / 'o'}")
    run_spectrum(cfg)
    data = json.loads((tmp_path / "o.json").read_text())["data"]
    assert len(data["s_value"]) == 3


def test_sweep_files(tmp_path):
    cfg = parse_config(f"mode=optical\naxis=rabi_sq\ngrid_min=0.05\ngrid_max=0.5\n"
                       f"grid_points=10\nout={tmp_path / 's'}")
    results, sidecar = run_sweep(cfg, "gamma_f", [0.0, 0.1, 1 / 3])
    names = sorted(p.name for p in tmp_path.iterdir())
    assert names == ["s.gamma_f=0.1.csv", "s.gamma_f=0.333333333333.csv",
                     "s.gamma_f=0.csv", "s.sweep.json"]
    assert min(results[0][2]) < 0
    assert all(min(r[2]) > 0 for r in results[1:])
    with pytest.raises(ConfigError):
        run_sweep(cfg, "gamma_f", [])
    with pytest.raises(ConfigError):
        run_sweep(cfg, "gamma2", [0.5])


def test_main_exit_codes(tmp_path, capsys):
    good = tmp_path / "g.cfg"
    good.write_text(f"mode=current\nrabi_sq=0\ngrid_points=3\nout={tmp_path / 'c'}\n")
    assert main(["spectrum", "--config", str(good)]) == 0
    assert (tmp_path / "c.csv").read_text().splitlines()[1:] == ["-5,0", "0,0", "5,0"]
    bad = tmp_path / "b.cfg"
    bad.write_text("rabi_sq=-1\n")
    assert main(["spectrum", "--config", str(bad)]) == EXIT_CONFIG
    assert "rabi_sq" in capsys.readouterr().err
    assert main(["spectrum", "--config", str(tmp_path / "missing.cfg")]) == EXIT_IO
    assert main(["sweep", "--config", str(good), "--key", "rabi_sq", "--values", ""]) == EXIT_CONFIG
    # flags override the file
    assert main(["spectrum", "--config", str(bad), "--rabi-sq", "0.1", "--grid-points", "2",
                 "--out", str(tmp_path / "f")]) == 0
    blocked = tmp_path / "file"
    blocked.write_text("")
    assert main(["spectrum", "--grid-points", "2", "--out", str(blocked / "x")]) == EXIT_IO


def test_numerical_failure_exit(tmp_path, monkeypatch):
    import sqzspec.spectra_current as sc
    monkeypatch.setattr(sc, "_MAX_NODES", 24)
    monkeypatch.setattr(sc, "REL_TOL", 1e-15)
    rc = main(["spectrum", "--mode", "current", "--grid-points", "2", "--dt-window", "20",
               "--out", str(tmp_path / "n")])
    assert rc == EXIT_NUMERIC
    assert (tmp_path / "n.csv").read_text().splitlines()[1].endswith(",nan")
