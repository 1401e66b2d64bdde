import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from relaylife import LifetimeSimulator, RelayAssigner
from relaylife.assignment import assign
from relaylife.channel import SystemParams
from relaylife.harness.topology import generate_topology, write_topology
from relaylife.lifetime import SimConfig, run_lifetime
from relaylife.validation import check_ser_targets, check_topology, check_weight_matrix


@pytest.fixture
def topo():
    return generate_topology(8, 0, 3, 6)


def test_params_round_trip_and_clone():
    est = RelayAssigner(strategy="MWTP-SRS", ser_target=1e-3, srs_order="min")
    assert est.get_params() == {"strategy": "MWTP-SRS", "ser_target": 1e-3, "params": None, "srs_order": "min"}
    twin = clone(est.set_params(strategy="GLM-BM"))
    assert twin.get_params()["strategy"] == "GLM-BM"
    sim = LifetimeSimulator(update_interval=None)
    assert clone(sim).get_params()["update_interval"] is None


def test_unfitted_raises(topo):
    with pytest.raises(NotFittedError):
        RelayAssigner().predict(topo)


def test_relay_assigner_matches_assign(topo):
    est = RelayAssigner("GLM-MBM").fit(topo)
    ref = assign(topo, SystemParams(), "GLM-MBM")
    assert list(est.relays_) == list(ref.relays)
    assert est.powers_.shape == (3, 2) and est.certified_ is True
    assert est.weights_.n == 6 and est.n_sources_in_ == 3 and est.n_relays_in_ == 6
    assert list(est.predict(topo)) == list(ref.relays)
    np.testing.assert_array_equal(est.transform(topo), est.powers_)
    assert list(RelayAssigner("GLM-MBM").fit_predict(topo)) == list(ref.relays)


def test_accepts_paths_and_mappings(tmp_path, topo):
    path = tmp_path / "t.txt"
    write_topology(topo, path)
    by_path = RelayAssigner().fit(str(path)).relays_
    mapping = {"source_positions": topo.source_positions, "relay_positions": topo.relay_positions,
               "bs_position": topo.bs_position}
    by_map = RelayAssigner().fit(mapping).relays_
    assert list(by_path) == list(by_map) == list(RelayAssigner().fit(topo).relays_)
    with pytest.raises(TypeError):
        check_topology(42)


def test_lifetime_simulator(topo):
    sim = LifetimeSimulator("GLM-BM", update_interval=60).fit(topo)
    ref = run_lifetime(topo, SimConfig("GLM-BM", SystemParams(), update_interval_packets=60))
    assert sim.lifetime_ == ref.lifetime_packets
    assert sim.wasted_energy_ == pytest.approx(ref.wasted_energy)
    assert sim.energy_per_packet_ == pytest.approx(ref.avg_energy_per_packet)
    assert sim.score(topo) == float(ref.lifetime_packets)


def test_validation_helpers():
    np.testing.assert_array_equal(check_ser_targets(1e-4, 3), [1e-4] * 3)
    for bad in (1.0, [1e-4, 1e-4], -1e-4):
        with pytest.raises(ValueError):
            check_ser_targets(bad, 3)
    w = check_weight_matrix([[0.1, 0.2, 0.3]])
    assert w.n == 3 and w.m_real == 1
    assert check_weight_matrix(w) is w
    assert check_weight_matrix(np.zeros((2, 2)), 2).m_real == 2
