"""scikit-learn style wrappers around assignment and lifetime simulation.

A network state (a :class:`~relaylife.channel.Topology`) plays the role
of ``X``. ``RelayAssigner.fit`` plans relays and powers for that state;
``LifetimeSimulator.fit`` runs the network until its first node dies.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .assignment import Strategy, assign, build_weight_matrix
from .channel import SystemParams
from .lifetime import SimConfig, energy_metrics, run_lifetime
from .validation import check_ser_targets, check_topology


class RelayAssigner(BaseEstimator):
    """Relay selection and power allocation for one network state.

    Parameters
    ----------
    strategy : str
        One of ``GLM-BM``, ``GLM-MBM``, ``GLM-SRS``, ``MWTP-MWM``, ``MWTP-SRS``.
    ser_target : float or array-like of shape (n_sources,)
        End-to-end SER each source must meet.
    params : SystemParams, optional
        Channel constants; defaults to the evaluation setup.
    srs_order : {"max", "min"}
        Which end of the priority metric picks first in SRS.

    Attributes
    ----------
    assignment_ : Assignment
    weights_ : WeightMatrix
        Padded pair-weight matrix the matching ran on.
    relays_ : ndarray of shape (n_sources,)
    powers_ : ndarray of shape (n_sources, 2)
        Source and relay transmit power of each pair, in watts.
    certified_ : bool or None
    """

    def __init__(self, strategy="GLM-MBM", ser_target=1e-4, params=None, srs_order="max"):
        self.strategy = strategy
        self.ser_target = ser_target
        self.params = params
        self.srs_order = srs_order

    def _params(self):
        return self.params if self.params is not None else SystemParams()

    def _plan(self, X):
        topology = check_topology(X)
        strategy = Strategy.parse(self.strategy)
        targets = check_ser_targets(self.ser_target, topology.n_sources)
        return topology, strategy, targets, assign(topology, self._params(), strategy, targets, self.srs_order)

    def fit(self, X, y=None):
        topology, strategy, targets, result = self._plan(X)
        self.assignment_ = result
        self.weights_ = build_weight_matrix(topology, self._params(), strategy.policy, targets)
        self.relays_ = result.relays
        self.powers_ = np.array([[p.ps, p.pr] for p in result.pairs])
        self.certified_ = result.certified
        self.n_sources_in_ = topology.n_sources
        self.n_relays_in_ = topology.n_relays
        return self

    def predict(self, X):
        """Relay index chosen for each source of the network state ``X``."""
        check_is_fitted(self, "assignment_")
        return self._plan(X)[3].relays

    def transform(self, X):
        """``(n_sources, 2)`` array of source and relay powers for ``X``."""
        check_is_fitted(self, "assignment_")
        return np.array([[p.ps, p.pr] for p in self._plan(X)[3].pairs])

    def fit_predict(self, X, y=None):
        return self.fit(X).relays_


class LifetimeSimulator(BaseEstimator):
    """Packet-level lifetime of a network under a relay strategy.

    ``score`` returns the lifetime in delivered packets, so a larger score is
    better, as scikit-learn expects.
    """

    def __init__(self, strategy="GLM-MBM", ser_target=1e-4, update_interval=60, packet_bits=1000.0,
                 data_rate=1e4, params=None, max_packets=10**8, srs_order="max",
                 record_timeline=False):
        self.strategy = strategy
        self.ser_target = ser_target
        self.update_interval = update_interval
        self.packet_bits = packet_bits
        self.data_rate = data_rate
        self.params = params
        self.max_packets = max_packets
        self.srs_order = srs_order
        self.record_timeline = record_timeline

    def _config(self) -> SimConfig:
        return SimConfig(
            strategy=self.strategy,
            params=self.params if self.params is not None else SystemParams(),
            ser_target=self.ser_target,
            update_interval_packets=self.update_interval,
            packet_bits=self.packet_bits,
            data_rate=self.data_rate,
            max_packets=self.max_packets,
            srs_order=self.srs_order,
            record_timeline=self.record_timeline,
        )

    def fit(self, X, y=None):
        topology = check_topology(X)
        result = run_lifetime(topology, self._config())
        self.result_ = result
        self.lifetime_ = result.lifetime_packets
        self.energy_per_packet_, self.wasted_energy_ = energy_metrics(result, topology)
        return self

    def score(self, X, y=None) -> float:
        return float(run_lifetime(check_topology(X), self._config()).lifetime_packets)
