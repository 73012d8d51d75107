import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mnls_asym.cli import EXIT_CHECK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_OK, main
from mnls_asym.config import ExperimentConfig, config_from_dict, load_config
from mnls_asym.errors import ConfigError
from mnls_asym.experiment import ComparisonRow, fit_decay, run_compare
from mnls_asym.params import stationary_point
from mnls_asym.selftest import selftest

SMALL = {
    "schedule": {"t_min": 10.0, "t_max": 40.0, "n": 5},
    "pde": {"grid_size": 8192, "half_length": 300.0, "dt": 0.02},
}


def small(**over):
    d = json.loads(json.dumps(SMALL))
    d.update(over)
    return config_from_dict(d)


def test_defaults_validate():
    cfg = config_from_dict({})
    assert cfg.rays == [-0.1, 0.75]
    assert cfg.to_dict()["pde"]["grid_size"] == 131072


@pytest.mark.parametrize(
    "data",
    [
        {"bogus": 1},
        {"pde": {"grid": 4}},
        {"schedule": {"t_min": 5.0}},
        {"rays": [-0.5]},
        {"rays": []},
        {"a": -1.0},
        {"pde": {"grid_size": 1000}},
        {"initial": {"family": "file"}},
        {"initial": {"family": "square"}},
        {"variant": "other"},
        {"pde": 3},
        {"rays": ["x"]},
    ],
)
def test_invalid_configs(data):
    with pytest.raises(ConfigError):
        config_from_dict(data)


def test_load_config(tmp_path):
    p = tmp_path / "c.json"
    p.write_text(json.dumps({"b": 0.4, "rays": [0.2]}))
    assert load_config(p).b == 0.4
    p.write_text("{not json")
    with pytest.raises(ConfigError):
        load_config(p)


def test_schedule_on_step_grid():
    cfg = ExperimentConfig()
    ts = cfg.schedule.times(0.02)
    assert len(ts) == 13 and ts[0] == pytest.approx(20) and ts[-1] == pytest.approx(200)
    assert all(abs(t / 0.02 - round(t / 0.02)) < 1e-9 for t in ts)


@given(t=st.floats(1, 1e3), z0=st.floats(-0.2, 2), re=st.floats(-1, 1), im=st.floats(-1, 1))
def test_comparison_row(t, z0, re, im):
    row = ComparisonRow.make(t, z0, complex(re, im), 0.1 + 0.2j)
    assert abs(row.abs_err - abs(row.q_num - row.q_asym)) <= 1e-14
    assert stationary_point(row.x, row.t) == pytest.approx(z0, abs=1e-15)
    assert row.scaled_err_half == pytest.approx(row.abs_err * math.sqrt(t))


def test_fit_decay_recovers_power():
    ts = np.geomspace(20, 200, 13)
    fit = fit_decay(ts, 3.0 * ts**-0.75, 0.2)
    assert fit["slope"] == pytest.approx(-0.75, abs=1e-12)
    assert fit["n_points"] == 11 and fit["t_first"] > 20
    assert fit_decay(ts, np.zeros_like(ts)) is None


def test_zero_data_pipeline(tmp_path):
    cfg = small(initial={"family": "zero"})
    s = run_compare(cfg, out_dir=tmp_path)
    assert s["all_pass"]
    for e in s["rays"]:
        assert e["fit"] is None and e["nu0"] == 0 and e["absalpha"] == 0
        assert all(r.q_num == 0 and r.q_asym == 0 for r in s["_rows"][e["z0"]])
    assert {p.name for p in tmp_path.iterdir()} >= {"summary.json", "scattering.csv", "delta_diag.csv"}


def test_small_sech_pipeline_is_deterministic(tmp_path):
    cfg = small()
    s = run_compare(cfg, out_dir=tmp_path / "a")
    run_compare(cfg, out_dir=tmp_path / "b")
    for name in ("summary.json", "scattering.csv", "compare_-0.1000.csv", "compare_+0.7500.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    assert s["mass_pass"] and s["unitarity_pass"]
    for e in s["rays"]:
        assert e["fit"]["slope"] < -0.6
        assert e["modulus_deviation"] < 0.05


def test_file_family_matches_builtin(tmp_path):
    x = np.linspace(-40, 40, 16001)
    q = 0.8 / np.cosh(x)
    path = tmp_path / "q0.csv"
    np.savetxt(path, np.column_stack([x, q.real, q.imag]), delimiter=",", header="x,re_q,im_q")
    a = run_compare(small(rays=[0.75]), out_dir=None)
    b = run_compare(small(rays=[0.75], initial={"family": "file", "path": str(path)}), out_dir=None)
    assert b["rays"][0]["absalpha"] == pytest.approx(a["rays"][0]["absalpha"], rel=1e-5)


def test_selftest_report():
    rep = selftest(seed=3)
    assert rep["all_pass"], [c for c in rep["checks"] if not c["pass"]]
    bad = selftest(seed=3, fault="beta21")
    failed = [c["name"] for c in bad["checks"] if not c["pass"]]
    assert failed == ["beta_identity"]
    with pytest.raises(ValueError):
        selftest(fault="nope")


def test_cli_exit_codes(tmp_path, capsys):
    assert main(["scatter", "--output-dir", str(tmp_path), "--lambda-spacing", "0.05"]) == EXIT_OK
    assert (tmp_path / "scattering.csv").exists()
    assert main(["scatter", "--rays", "-3"]) == EXIT_CONFIG
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"unknown": 1}))
    assert main(["compare", "--config", str(bad)]) == EXIT_CONFIG
    assert main(["scatter", "--dx", "0.2", "--output-dir", str(tmp_path)]) == EXIT_NUMERIC
    assert main(["asymptotic", "--output-dir", str(tmp_path), "--times", "50", "100"]) == EXIT_OK
    out = json.loads((tmp_path / "asymptotic.json").read_text())
    assert out["rays"][0]["absalpha"] == pytest.approx(0.64073, abs=2e-5)
    assert main(["selftest", "--fault", "beta21", "--output-dir", str(tmp_path)]) == EXIT_CHECK
    assert "FAIL  beta_identity" in capsys.readouterr().out


def test_cli_flags_override_config(tmp_path):
    cfg_path = tmp_path / "c.json"
    cfg_path.write_text(json.dumps({"b": 0.4, "pde": {"grid_size": 1024, "half_length": 100.0}}))
    assert main(["evolve", "--config", str(cfg_path), "--b", "0.5", "--time", "1", "--output-dir", str(tmp_path)]) == 0
    rows = (tmp_path / "field_t1.csv").read_text().splitlines()
    assert len(rows) == 1025
