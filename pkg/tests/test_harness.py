import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from relaylife.channel import InvalidTopologyError
from relaylife.harness.cli import main
from relaylife.harness.config import (
    FIGURES,
    ExperimentSpec,
    db_to_linear,
    dbm_to_watts,
    default_seed,
    figure_spec,
    format_config,
    parse_overrides,
    read_config,
)
from relaylife.harness.experiment import (
    CSV_FIELDS,
    ResultRow,
    aggregate,
    collect_runs,
    format_csv,
    parse_csv,
    run_experiment,
)
from relaylife.harness.oracle import cross_check, oracle_assign
from relaylife.harness.topology import (
    PRNG_NAME,
    format_topology,
    generate_topology,
    parse_topology,
    read_topology,
    write_topology,
)
from relaylife.channel import SystemParams
from relaylife.lifetime import run_lifetime


def tiny_spec(**kw):
    base = dict(n_sources=2, n_relays=3, n_topologies=2, seed=7, initial_energy=0.05,
                strategies=("GLM-MBM", "MWTP-MWM"))
    return ExperimentSpec(**{**base, **kw})


# topology generation

def test_topology_is_deterministic_per_seed_and_index():
    a, b = generate_topology(42, 3, 6, 20), generate_topology(42, 3, 6, 20)
    assert np.array_equal(a.source_positions, b.source_positions)
    assert np.array_equal(a.relay_positions, b.relay_positions)
    c = generate_topology(42, 4, 6, 20)
    assert not np.array_equal(a.source_positions, c.source_positions)


def test_sources_do_not_depend_on_relay_count():
    a, b = generate_topology(1, 0, 6, 10), generate_topology(1, 0, 6, 30)
    assert np.array_equal(a.source_positions, b.source_positions)


def test_empirical_mean_position():
    pts = np.array([generate_topology(2024, i, 1, 1).source_positions[0] for i in range(10_000)])
    # Three standard errors of a 100 m uniform coordinate over 1e4 draws is about 0.87 m.
    assert np.all(np.abs(pts.mean(axis=0) - 50.0) < 1.0)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(0, 1000))
def test_generated_distances_respect_minimum(seed, index):
    topo = generate_topology(seed, index, 6, 30, area_side=20.0, bs_position=(10.0, 10.0))
    pts = np.vstack([topo.source_positions, topo.relay_positions, [topo.bs_position]])
    gaps = np.hypot(*(pts[:, None, :] - pts[None, :, :]).transpose(2, 0, 1))
    assert gaps[~np.eye(len(pts), dtype=bool)].min() >= 1.0


def test_generation_gives_up_when_area_is_too_small():
    with pytest.raises(RuntimeError):
        generate_topology(0, 0, 3, 3, area_side=1.0, bs_position=(0.5, 0.5))


def test_topology_file_round_trip(tmp_path):
    topo = generate_topology(5, 0, 3, 4).with_energies([1.5, 2.5, 3.5], [0.1, 0.2, 0.3, 0.4])
    path = tmp_path / "net.txt"
    write_topology(topo, path)
    back = read_topology(path)
    for attr in ("source_positions", "source_energies", "relay_positions", "relay_energies", "bs_position"):
        assert np.array_equal(getattr(topo, attr), getattr(back, attr))


def test_topology_parser_accepts_comments_and_rejects_junk():
    topo = parse_topology(["# net", "x 0 0 10  # src", "r 10 0 10", "", "bs 50 50"])
    assert topo.n_sources == 1 and topo.n_relays == 1
    for bad in (["x 0 0 10", "r 10 0 10"], ["x 0 0", "r 10 0 10", "bs 50 50"],
                ["q 0 0 1", "bs 5 5"], ["x 0 0 ten", "r 10 0 10", "bs 50 50"],
                ["r 10 0 10", "bs 50 50"]):
        with pytest.raises(InvalidTopologyError):
            parse_topology(bad)


# config

def test_db_conversions():
    assert db_to_linear(-70) == pytest.approx(1e-7, rel=1e-12)
    assert dbm_to_watts(-134) == pytest.approx(10 ** (-16.4), rel=1e-12)
    assert dbm_to_watts(30) == pytest.approx(1.0)


def test_default_spec_matches_evaluation_setup():
    spec = figure_spec(1)
    assert spec.sweep_values == (10, 15, 20, 25, 30)
    assert (spec.n_sources, spec.n_topologies, spec.update_interval) == (6, 300, 60)
    p = spec.params
    assert p.power_gain == pytest.approx(1e-7) and p.noise_power == pytest.approx(10 ** -16.4)
    assert (p.alpha, p.eta, p.mod_index, spec.ser_target, spec.data_rate) == (3.5, 1.0, 2.0, 1e-4, 1e4)
    assert figure_spec(2).sweep_values[-1] == 30000
    assert set(FIGURES) == {"1", "2", "3", "4"}


def test_seed_comes_from_environment(monkeypatch):
    monkeypatch.setenv("RELAYLIFE_SEED", "99")
    assert default_seed() == 99 and ExperimentSpec().seed == 99
    monkeypatch.delenv("RELAYLIFE_SEED")
    assert default_seed() == 0


def test_overrides_and_config_round_trip(tmp_path):
    o = parse_overrides(["M=3", "tu=inf", "bs_x=10", "strategies=GLM-BM,MWTP-SRS", "# c", "p_th=1e-3"])
    assert o == {"n_sources": 3, "update_interval": None, "bs_position": (10.0, 50.0),
                 "strategies": ("GLM-BM", "MWTP-SRS"), "ser_target": 1e-3}
    spec = figure_spec(2, seed=3, n_topologies=4)
    path = tmp_path / "spec.cfg"
    path.write_text(format_config(spec))
    assert ExperimentSpec(**read_config(path)) == spec
    with pytest.raises(ValueError):
        parse_overrides(["nonsense=1"])
    with pytest.raises(ValueError):
        parse_overrides(["no equals sign"])


def test_update_interval_sweep_accepts_infinity():
    spec = ExperimentSpec(sweep="update_interval", sweep_values=(60, "inf", math.inf))
    assert spec.sweep_values == (60, None, None)
    with pytest.raises(ValueError):
        ExperimentSpec(sweep="relay_count", sweep_values=(3,), n_sources=6)
    with pytest.raises(ValueError):
        ExperimentSpec(n_topologies=0)


# experiments and CSV

def test_single_topology_row_equals_the_run():
    spec = tiny_spec(n_topologies=1, strategies=("GLM-SRS",))
    (row,) = run_experiment(spec)
    topo = generate_topology(7, 0, 2, 3, energy=0.05)
    r = run_lifetime(topo, spec.sim_config("GLM-SRS", 60))
    assert row.mean_lifetime_packets == r.lifetime_packets
    assert row.mean_wasted_energy_j == r.wasted_energy
    assert row.mean_energy_per_packet_j == r.avg_energy_per_packet
    assert row.n_topologies == 1 and row.seed == 7


def test_paired_design_uses_identical_topologies():
    spec = tiny_spec(n_topologies=3)
    recs = collect_runs(spec)
    initial = {}
    for r in recs:
        initial.setdefault(r.topology_index, set()).add(r.initial_energy)
    assert all(len(v) == 1 for v in initial.values())


def test_rows_sorted_canonically():
    spec = tiny_spec(sweep="update_interval", sweep_values=(None, 5, 60))
    rows = run_experiment(spec)
    keys = [(r.strategy, math.inf if r.sweep_value is None else r.sweep_value) for r in rows]
    assert keys == sorted(keys)
    recs = collect_runs(spec)
    assert aggregate(reversed(recs), spec) == rows


def test_csv_is_byte_identical_across_runs():
    spec = tiny_spec()
    a = format_csv(run_experiment(spec), {"figure": "custom"})
    b = format_csv(run_experiment(spec), {"figure": "custom"})
    assert a == b
    assert f"# prng={PRNG_NAME}" in a
    header = [ln for ln in a.splitlines() if not ln.startswith("#")][0]
    assert tuple(header.split(",")) == CSV_FIELDS


finite = st.floats(allow_nan=False, allow_infinity=False)
rows_strategy = st.lists(st.builds(
    ResultRow,
    strategy=st.sampled_from(["GLM-BM", "GLM-MBM", "MWTP-SRS"]),
    sweep_name=st.sampled_from(["relay_count", "update_interval"]),
    sweep_value=st.one_of(st.none(), st.integers(1, 10**6)),
    mean_lifetime_packets=finite,
    mean_energy_per_packet_j=finite,
    mean_wasted_energy_j=finite,
    n_topologies=st.integers(1, 10**4),
    seed=st.integers(0, 2**63),
), max_size=8)


@given(rows_strategy)
def test_csv_round_trip(rows):
    assert parse_csv(format_csv(rows)) == rows


def test_csv_rejects_wrong_header():
    with pytest.raises(ValueError):
        parse_csv("a,b\n1,2\n")


# oracle

def test_oracle_agrees_with_solvers_on_random_instances():
    params = SystemParams()
    rng = np.random.default_rng(0)
    checked = 0
    for i in range(100):
        m = int(rng.integers(1, 5))
        n = int(rng.integers(m, 7))
        topo = generate_topology(11, i, m, n)
        topo = topo.with_energies(rng.uniform(1, 10, m), rng.uniform(1, 10, n))
        result = cross_check(topo, params)
        assert all(result.values()), (i, result)
        checked += len(result)
    assert checked >= 250


def test_oracle_refuses_large_instances():
    with pytest.raises(ValueError):
        oracle_assign(generate_topology(0, 0, 3, 9), SystemParams(), "GLM", "sum")
    with pytest.raises(ValueError):
        oracle_assign(generate_topology(0, 0, 2, 3), SystemParams(), "GLM", "median")


# CLI

def test_cli_assign(tmp_path, capsys):
    path = tmp_path / "net.txt"
    write_topology(generate_topology(1, 0, 3, 5), path)
    assert main(["assign", str(path), "--strategy", "GLM-MBM"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0].startswith("# strategy=GLM-MBM") and out[1] == "# certified=1"
    body = [ln.split() for ln in out[3:]]
    assert [int(r[0]) for r in body] == [0, 1, 2] and len({r[1] for r in body}) == 3


def test_cli_simulate_writes_parseable_csv(tmp_path):
    out = tmp_path / "o.csv"
    argv = ["simulate", "--set", "n_sources=2", "--set", "n_relays=3", "--set", "energy=0.05",
            "--topologies", "2", "--seed", "5", "-o", str(out)]
    assert main(argv) == 0
    rows = parse_csv(out.read_text())
    assert len(rows) == 5 and all(r.n_topologies == 2 and r.seed == 5 for r in rows)


def test_cli_sweep_single_figure(tmp_path):
    argv = ["sweep", "--fig", "3", "--out-dir", str(tmp_path), "--topologies", "1",
            "--set", "energy=0.02", "--set", "strategies=GLM-BM"]
    assert main(argv) == 0
    rows = parse_csv((tmp_path / "fig3.csv").read_text())
    assert [r.sweep_value for r in rows] == [60, 30000]


def test_cli_oracle(capsys):
    assert main(["oracle", "--trials", "5", "--random-energy"]) == 0
    assert "5 topologies, 0 mismatches" in capsys.readouterr().out


def test_cli_reports_bad_input(tmp_path):
    missing = tmp_path / "nope.txt"
    assert main(["assign", str(missing)]) == 2
    assert main(["simulate", "--set", "bogus=1"]) == 2
