import math

import numpy as np
import pytest

from tailsitter import (
    ConfigurationError,
    DivergenceError,
    OuterGains,
    ScenarioConfig,
    TrajectoryLog,
    TransitionMode,
    run_transition,
)
from tailsitter.sim import LOG_COLUMNS

HEADER = "t,u,w,theta,q,T,tau,eps,u_d,w_d,theta_d,e_u,e_w,e_theta,h1_hat,h2_hat,eps_sat,T_sat"


@pytest.fixture(scope="module")
def oracle_logs():
    return {mode: run_transition(ScenarioConfig(mode=mode)) for mode in ("hc", "ch")}


def test_header_is_exact():
    assert ",".join(LOG_COLUMNS) == HEADER


def test_zero_length_horizon():
    cfg = ScenarioConfig(mode="hc", t_end=1e-3, dt=1e-3)
    log = run_transition(cfg)
    assert len(log) == 2
    assert (log["u"][0], log["w"][0], log["theta"][0], log["q"][0]) == cfg.initial


@pytest.mark.parametrize("mode", ["hc", "ch"])
def test_log_invariants(oracle_logs, mode):
    log = oracle_logs[mode]
    cfg = ScenarioConfig(mode=mode)
    assert len(log) == math.ceil(cfg.t_end / cfg.dt) + 1
    assert np.all(np.diff(log["t"]) > 0)
    assert np.all(np.abs(log["eps"]) <= 1)
    assert np.all((log["theta_d"] >= 0) & (log["theta_d"] <= math.pi))
    assert np.allclose(log["e_u"], log["u"] - log["u_d"])


def test_oracle_estimates_are_true_h(oracle_logs):
    from tailsitter import h1, h2

    log = oracle_logs["hc"]
    for i in (0, 500, 7000):
        s = (log["u"][i], log["w"][i])
        assert log["h1_hat"][i] == h1(s, log["q"][i])
        assert log["h2_hat"][i] == h2(s, log["q"][i])


def test_csv_round_trip_and_determinism(tmp_path):
    cfg = ScenarioConfig(mode="ch", t_end=0.5)
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    run_transition(cfg).to_csv(a)
    run_transition(cfg).to_csv(b)
    assert a.read_bytes() == b.read_bytes()
    assert a.read_text().splitlines()[0] == HEADER
    back = TrajectoryLog.from_csv(a)
    orig = run_transition(cfg)
    for name in LOG_COLUMNS:
        assert np.array_equal(back[name], orig[name])


@pytest.mark.parametrize("mode", ["hc", "ch"])
def test_step_size_robustness(oracle_logs, mode):
    fine = run_transition(ScenarioConfig(mode=mode, dt=5e-4))
    coarse = oracle_logs[mode]
    for name in ("u", "w", "theta"):
        assert abs(fine[name][-1] - coarse[name][-1]) < 1e-4


def test_rnn_mode_close_to_oracle(oracle_logs, trained_networks):
    rnn = run_transition(ScenarioConfig(mode="hc"), networks=trained_networks)
    i = int(round(15.0 / 1e-3))
    oracle = oracle_logs["hc"]
    err = lambda log: math.hypot(log["e_u"][i], log["e_w"][i])
    assert err(rnn) <= err(oracle) + 0.05


def test_weight_files_are_used(tmp_path, trained_networks):
    from tailsitter import save_weights

    paths = tmp_path / "u.csv", tmp_path / "w.csv"
    for net, path in zip(trained_networks, paths):
        save_weights(net, path)
    cfg = ScenarioConfig(mode="hc", t_end=0.2, rnn_weights=tuple(map(str, paths)))
    from_files = run_transition(cfg)
    in_memory = run_transition(ScenarioConfig(mode="hc", t_end=0.2), networks=trained_networks)
    assert np.array_equal(from_files["h1_hat"], in_memory["h1_hat"])


def test_missing_weight_file(tmp_path):
    cfg = ScenarioConfig(rnn_weights=(str(tmp_path / "a.csv"), str(tmp_path / "b.csv")))
    with pytest.raises(FileNotFoundError):
        run_transition(cfg)


def test_divergence_has_time_stamp():
    cfg = ScenarioConfig(mode="hc", t_end=1.0, outer=OuterGains(1e308, 1e308))
    with pytest.raises(DivergenceError) as info:
        run_transition(cfg)
    assert info.value.time is not None and 0 < info.value.time <= 1.0


def test_config_validation(monkeypatch):
    with pytest.raises(ConfigurationError):
        ScenarioConfig(dt=0)
    with pytest.raises(ConfigurationError):
        ScenarioConfig(t_end=1e-4, dt=1e-3)
    with pytest.raises(ConfigurationError):
        ScenarioConfig(initial=(0, 0, math.nan, 0))
    cfg = ScenarioConfig(mode="ch")
    assert cfg.mode is TransitionMode.CruiseToHover
    assert cfg.initial == (1.1, 0.16, 0.15, 0.0) and cfg.t_end == 30.0
    monkeypatch.setenv("TTL_SEED", "42")
    assert ScenarioConfig(seed=1).seed == 42
