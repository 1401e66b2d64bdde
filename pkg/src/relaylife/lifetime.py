"""Packet-granular network lifetime simulation.

Sources transmit in round-robin order, one packet at a time. Every
``update_interval_packets`` delivered packets, relays and powers are
re-planned from the residual energies. A packet costs ``ps * T_pkt`` at
its source and ``pr * T_pkt`` at its relay; the network expires at the
first packet whose source or relay cannot pay for it.

Powers are constant inside an update interval, so each interval is
advanced in closed form rather than packet by packet.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .assignment import Algorithm, Strategy, _select_raw
from .channel import SystemParams, Topology, coefficient_matrices
from .power import policy_powers

# Relative slack when deciding whether a node can afford a packet, so that
# a node holding exactly k packets' worth of energy is not cut short by rounding.
AFFORD_RTOL = 1e-9
# Stand-in weight for pairs touching an exhausted node.
DEAD_WEIGHT = 1e300


@dataclass(frozen=True)
class SimConfig:
    strategy: Strategy = field(default_factory=lambda: Strategy.parse("GLM-MBM"))
    params: SystemParams = field(default_factory=SystemParams)
    ser_target: float = 1e-4
    # None means the initial assignment is never revisited.
    update_interval_packets: Optional[int] = 60
    packet_bits: float = 1000.0
    data_rate: float = 1e4
    max_packets: int = 10**8
    srs_order: str = "max"
    record_timeline: bool = False

    def __post_init__(self):
        object.__setattr__(self, "strategy", Strategy.parse(self.strategy))
        tu = self.update_interval_packets
        if tu is not None and (isinstance(tu, float) and math.isinf(tu)):
            object.__setattr__(self, "update_interval_packets", None)
        elif tu is not None:
            if int(tu) != tu or tu < 1:
                raise ValueError(f"update_interval_packets must be a positive integer, got {tu!r}")
            object.__setattr__(self, "update_interval_packets", int(tu))
        if not 0 < self.ser_target < 1:
            raise ValueError("ser_target must lie in (0, 1)")
        if not (self.packet_bits > 0 and self.data_rate > 0):
            raise ValueError("packet_bits and data_rate must be positive")
        if self.max_packets < 1:
            raise ValueError("max_packets must be positive")

    @property
    def packet_time(self) -> float:
        return self.packet_bits / self.data_rate


@dataclass
class LifetimeResult:
    lifetime_packets: int
    dying_node: Optional[str]
    consumed_energy: float
    initial_energy: float
    residual_source_energies: np.ndarray
    residual_relay_energies: np.ndarray
    truncated: bool = False
    n_updates: int = 0
    uncertified_updates: int = 0
    timeline: list = field(default_factory=list)

    @property
    def wasted_energy(self) -> float:
        return float(self.residual_source_energies.sum() + self.residual_relay_energies.sum())

    @property
    def avg_energy_per_packet(self) -> Optional[float]:
        if self.lifetime_packets == 0:
            return None
        return self.consumed_energy / self.lifetime_packets


def energy_metrics(result: LifetimeResult, topology: Topology):
    """Return ``(avg_energy_per_packet or None, wasted_energy)`` in joules."""
    initial = float(topology.source_energies.sum() + topology.relay_energies.sum())
    wasted = result.wasted_energy
    if result.lifetime_packets == 0:
        return None, wasted
    return (initial - wasted) / result.lifetime_packets, wasted


def _round_robin_counts(start: int, stop: int, m: int) -> np.ndarray:
    """Packets sent by each source for global packet indices in ``[start, stop)``."""
    i = np.arange(m)
    first = start + (i - start) % m
    return np.maximum(0, (stop - first + m - 1) // m)


def _plan(a, b, sigma_sd2, es, er, strategy: Strategy, ser_target, srs_order):
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        ps, pr, w = policy_powers(strategy.policy, a, b, es[:, None], er[None, :], ser_target)
        w = np.where(np.isfinite(w), w, DEAD_WEIGHT)
        priorities = None
        if strategy.algorithm is Algorithm.SRS:
            priorities = 1.0 / (es * sigma_sd2)
            priorities = np.where(np.isfinite(priorities), priorities, DEAD_WEIGHT)
    relays, certified = _select_raw(w, strategy.algorithm, priorities, srs_order)
    src = np.arange(len(es))
    return relays, certified, ps[src, relays], pr[src, relays]


def run_lifetime(topology: Topology, config: SimConfig) -> LifetimeResult:
    strategy = config.strategy
    a, b, sigma_sd2 = coefficient_matrices(topology, config.params)
    es = topology.source_energies.astype(float)
    er = topology.relay_energies.astype(float)
    m = topology.n_sources
    initial = float(es.sum() + er.sum())
    t_pkt = config.packet_time
    interval = config.update_interval_packets
    cap = config.max_packets

    k = 0
    consumed = 0.0
    n_updates = uncertified = 0
    timeline = []
    while k < cap:
        relays, certified, ps, pr = _plan(a, b, sigma_sd2, es, er, strategy, config.ser_target,
                                          config.srs_order)
        n_updates += 1
        uncertified += certified is False
        if config.record_timeline:
            timeline.append({
                "packet": k,
                "relays": relays.tolist(),
                "ps": ps.tolist(),
                "pr": pr.tolist(),
                "certified": certified,
                "residual_energy": float(es.sum() + er.sum()),
            })
        with np.errstate(invalid="ignore", over="ignore"):
            cost_s = np.where(np.isfinite(ps), ps * t_pkt, np.inf)
            cost_r = np.where(np.isfinite(pr), pr * t_pkt, np.inf)
            afford_s = np.floor(es / cost_s * (1 + AFFORD_RTOL))
            afford_r = np.floor(er[relays] / cost_r * (1 + AFFORD_RTOL))
        afford = np.minimum(afford_s, afford_r)

        stop = cap if interval is None else min(k + interval, cap)
        counts = _round_robin_counts(k, stop, m)
        short = afford < counts
        dying = None
        if short.any():
            first = k + (np.arange(m) - k) % m
            fail_at = np.where(short, first + np.minimum(afford, counts) * m, np.inf)
            i = int(np.argmin(fail_at))
            stop = int(fail_at[i])
            counts = _round_robin_counts(k, stop, m)
            dying = f"s{i}" if afford_s[i] <= afford_r[i] else f"r{int(relays[i])}"

        with np.errstate(invalid="ignore"):
            drain_s = np.where(counts > 0, np.minimum(counts * cost_s, es), 0.0)
            drain_r = np.where(counts > 0, np.minimum(counts * cost_r, er[relays]), 0.0)
        es -= drain_s
        er[relays] -= drain_r
        consumed += float(drain_s.sum() + drain_r.sum())
        k = stop
        if dying is not None:
            return LifetimeResult(k, dying, consumed, initial, es, er, False, n_updates, uncertified, timeline)

    return LifetimeResult(k, None, consumed, initial, es, er, True, n_updates, uncertified, timeline)
