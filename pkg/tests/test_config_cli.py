"""JSON configuration and the command-line front end."""

import csv
import io
import json
import math

import pytest

from rydberg_dress import cli
from rydberg_dress.config import from_dict, load_config, sweep_from_dict
from rydberg_dress.errors import ConfigError

TWO_PI = 2 * math.pi


def test_scenario_with_overrides():
    rc = from_dict({
        "scenario": "t1-with-c",
        "protocol": {"gamma_a_mhz": 0.5},
        "pulses": {"dressing_ratio": 0.5},
        "integrator": {"samples_per_period": 40},
        "sweep": {"axis": "temperature", "grid": [0, 0.001], "samples": 5, "seed": 7},
    })
    assert rc.protocol.gamma_a == pytest.approx(TWO_PI * 0.5)
    d = rc.protocol.pulses.dressing
    assert d.delta_d == pytest.approx(2 * d.omega_d)
    assert rc.integrator.samples_per_dressing_period == 40
    assert rc.sweep.grid == (0.0, 0.001) and rc.sweep.master_seed == 7


def test_standalone_config():
    rc = from_dict({
        "protocol": {"kind": "none"},
        "pulses": {"t_gate_us": 1.0, "omega_max_mhz": 10, "width_us": 0.2,
                   "omega_max_p_mhz": 10, "width_p_us": 0.2, "delta0_mhz": 4.9,
                   "phase_kind": "linear"},
    })
    assert rc.protocol.gamma_r == pytest.approx(2.6e-3)
    assert rc.protocol.pulses.phase.delta0 == pytest.approx(TWO_PI * 4.9)
    assert rc.sweep is None


@pytest.mark.parametrize("doc", [
    {"bogus": 1},
    {"scenario": "t1-no-c", "protocol": {"gamma_q_mhz": 1}},
    {"scenario": "t1-no-c", "protocol": {"gamma_r_mhz": 1, "gamma_r_rate_per_us": 1}},
    {"scenario": "t1-no-c", "pulses": {"width_us": "wide"}},
    {"scenario": "t1-no-c", "integrator": {"samples_per_period": 1.5}},
    {"scenario": "t4-chi-1"},
    {"scenario": "nope"},
    {"protocol": {"kind": "none"}},
    {"pulses": {"t_gate_us": 1.0}},
    {"scenario": "t1-with-c", "pulses": {"delta_d_mhz": 1, "dressing_ratio": 1}},
])
def test_bad_documents(doc):
    with pytest.raises(ConfigError):
        from_dict(doc)


def test_sweep_units():
    sw = sweep_from_dict({"axis": "delta", "grid": [-1, 0, 1]})
    assert sw.grid == (-TWO_PI, 0.0, TWO_PI)
    with pytest.raises(ConfigError):
        sweep_from_dict({"grid": [0]})
    with pytest.raises(ConfigError):
        sweep_from_dict({"axis": "delta", "grid": []})
    with pytest.raises(ConfigError):
        sweep_from_dict({"axis": "delta", "grid": [0], "seed": "x"})


def test_load_config_errors(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ConfigError):
        load_config(bad)


def test_cli_chi(capsys):
    assert cli.run(["chi", "--lambda-up", "480", "--lambda-lower", "780", "--lambda-a", "475"]) == 0
    assert capsys.readouterr().out.strip() == "k_r=5.035 k_a=-13.228 chi=1.627"


def test_cli_exit_codes(capsys, tmp_path):
    assert cli.run(["scenario", "run", "t0"]) == 2
    assert "unknown scenario" in capsys.readouterr().err
    assert cli.run(["chi", "--lambda-up", "0", "--lambda-lower", "780", "--lambda-a", "475"]) == 2
    assert cli.run(["simulate"]) == 2
    assert cli.run(["nonsense"]) == 2
    assert cli.run(["sweep", "--scenario", "t1-no-c"]) == 2
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"scenario": "t1-no-c", "integrator": {"dt_us": 0.1}}))
    assert cli.run(["simulate", "--config", str(cfg)]) == 2


def test_cli_numerical_exit(monkeypatch, capsys):
    from rydberg_dress.errors import NoRoot

    def boom(args):
        raise NoRoot("no root")

    monkeypatch.setattr(cli, "cmd_chi", boom)
    parser_args = ["chi", "--lambda-up", "480", "--lambda-lower", "780", "--lambda-a", "475"]
    assert cli.run(parser_args) == 3
    assert "numerical error" in capsys.readouterr().err


def test_cli_sweep_csv_is_deterministic(tmp_path):
    outs = []
    for threads in ("1", "2"):
        out = tmp_path / f"s{threads}.csv"
        code = cli.run(["sweep", "--scenario", "t1-no-c", "--axis", "temperature",
                        "--grid", "0,1e-4", "--samples", "3", "--seed", "5",
                        "--threads", threads, "--out", str(out)])
        assert code == 0
        outs.append(out.read_text())
    assert outs[0] == outs[1]
    rows = list(csv.reader(io.StringIO(outs[0])))
    assert rows[0] == ["T_K", "F_mean", "F_stderr", "P_r_us", "P_a_us"]
    assert len(rows) == 3


def test_cli_simulate_and_scenario_json(capsys):
    assert cli.run(["simulate", "--scenario", "t1-no-c", "--ideal"]) == 0
    body = json.loads(capsys.readouterr().out)
    assert body["fidelity"] == pytest.approx(0.99957, abs=1e-4)
    assert cli.run(["scenario", "run", "t4-nodress"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["pass"] is True
    assert cli.run(["scenario", "list"]) == 0
    assert "t1-with-c" in capsys.readouterr().out


def test_cli_transfer_and_optimize(capsys):
    assert cli.run(["transfer", "--omega-r-mhz", "1", "--deltas-mhz", "0,1"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "delta_MHz,infidelity" and len(lines) == 3
    assert cli.run(["optimize", "--scenario", "t1-no-c", "--degenerate",
                    "--population", "4", "--generations", "1"]) == 0
    body = json.loads(capsys.readouterr().out)
    assert body["pulses"]["t_gate_us"] == pytest.approx(0.62)
    assert cli.run(["transfer", "--scenario", "t1-no-c"]) == 2


def test_cli_output_byte_identical(tmp_path):
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for p in paths:
        assert cli.run(["transfer", "--scenario", "t4-chi-1", "--deltas-mhz=-1:1:0.5",
                        "--out", str(p)]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()
    header, *rows = paths[0].read_text().splitlines()
    assert header == "delta_MHz,infidelity"
    assert all("," in r and ";" not in r for r in rows)
    assert rows[0].startswith("-1.0,")
