"""Relay assignment strategies: policy weights plus a matching rule."""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .channel import SystemParams, Topology, coefficient_matrices
from .matching import Matching, WeightMatrix, _bottleneck_search, _mbm_kernel
from .power import Policy, policy_powers


class Algorithm(str, enum.Enum):
    BM = "BM"
    MBM = "MBM"
    MWM = "MWM"
    SRS = "SRS"


_VALID = {
    (Policy.GLM, Algorithm.BM),
    (Policy.GLM, Algorithm.MBM),
    (Policy.GLM, Algorithm.SRS),
    (Policy.MWTP, Algorithm.MWM),
    (Policy.MWTP, Algorithm.SRS),
}


@dataclass(frozen=True)
class Strategy:
    policy: Policy
    algorithm: Algorithm

    def __post_init__(self):
        object.__setattr__(self, "policy", Policy(self.policy))
        object.__setattr__(self, "algorithm", Algorithm(self.algorithm))
        if (self.policy, self.algorithm) not in _VALID:
            raise ValueError(f"unsupported strategy {self.policy.value}-{self.algorithm.value}")

    @classmethod
    def parse(cls, name: "str | Strategy") -> "Strategy":
        if isinstance(name, Strategy):
            return name
        policy, sep, algorithm = str(name).strip().upper().replace("_", "-").partition("-")
        if not sep:
            raise ValueError(f"strategy must look like 'GLM-MBM', got {name!r}")
        return cls(policy, algorithm)

    def __str__(self) -> str:
        return f"{self.policy.value}-{self.algorithm.value}"


STRATEGIES = tuple(Strategy.parse(s) for s in ("GLM-BM", "GLM-MBM", "GLM-SRS", "MWTP-MWM", "MWTP-SRS"))


@dataclass(frozen=True)
class AssignedPair:
    source: int
    relay: int
    ps: float
    pr: float
    weight: float


@dataclass(frozen=True)
class Assignment:
    # None for assignments not produced by one of the named strategies.
    strategy: Optional[Strategy]
    pairs: tuple[AssignedPair, ...]
    # Only meaningful for MBM: whether the lexicographic optimum was certified.
    certified: Optional[bool] = None

    @property
    def relays(self) -> np.ndarray:
        return np.array([p.relay for p in self.pairs], dtype=np.int64)

    @property
    def max_weight(self) -> float:
        return max(p.weight for p in self.pairs)

    @property
    def total_weight(self) -> float:
        return float(sum(p.weight for p in self.pairs))


def _ser_vector(ser_targets, m: int) -> np.ndarray:
    t = np.broadcast_to(np.asarray(ser_targets, dtype=float), (m,)).copy()
    if not np.all(np.isfinite(t)) or np.any(t <= 0):
        raise ValueError("SER targets must be positive")
    return t


def priority_metric(es, sigma_sd2):
    """Source priority ``1 / (E_s * sigma_sd^2)``: energy-poor, far sources rank high."""
    es = np.asarray(es, dtype=float)
    sigma_sd2 = np.asarray(sigma_sd2, dtype=float)
    if np.any(es <= 0) or np.any(sigma_sd2 <= 0):
        raise ValueError("energy and variance must be positive")
    out = 1.0 / (es * sigma_sd2)
    return float(out) if out.ndim == 0 else out


def build_weight_matrix(topology: Topology, params: SystemParams, policy, ser_targets) -> WeightMatrix:
    """Dummy-padded N x N matrix of pair weights under ``policy``."""
    a, b, _ = coefficient_matrices(topology, params)
    pth = _ser_vector(ser_targets, topology.n_sources)
    _, _, w = policy_powers(
        policy, a, b, topology.source_energies[:, None], topology.relay_energies[None, :], pth[:, None]
    )
    return WeightMatrix.pad(w)


def _srs_order(priorities: np.ndarray, order: str) -> np.ndarray:
    idx = np.arange(len(priorities))
    if order == "max":
        return np.lexsort((idx, -priorities))
    if order == "min":
        return np.lexsort((idx, priorities))
    raise ValueError(f"SRS order must be 'max' or 'min', got {order!r}")


def _srs_pairing(real: np.ndarray, priorities, order: str = "max") -> np.ndarray:
    m, n = real.shape
    taken = np.zeros(n, dtype=bool)
    pairing = np.empty(n, dtype=np.int64)
    for s in _srs_order(np.asarray(priorities, dtype=float), order):
        row = np.where(taken, np.inf, real[s])
        j = int(np.argmin(row))
        pairing[s] = j
        taken[j] = True
    pairing[m:] = np.flatnonzero(~taken)
    return pairing


def srs_select(w: WeightMatrix, priorities: Sequence[float], order: str = "max") -> Matching:
    """Greedy relay selection in source-priority order.

    With ``order="max"`` the highest-priority source picks first (ties go to
    the lower index). ``order="min"`` picks the lowest priority first instead.
    Each source takes its cheapest unpaired relay, ties to the lower index.
    """
    priorities = np.asarray(priorities, dtype=float)
    if priorities.shape != (w.m_real,):
        raise ValueError(f"expected {w.m_real} priorities, got shape {priorities.shape}")
    return Matching(_srs_pairing(w.real, priorities, order), w.m_real)


def _select_raw(real: np.ndarray, algorithm: Algorithm, priorities=None, srs_order: str = "max"):
    """Relay per source for an unvalidated ``M x N`` weight array."""
    m, n = real.shape
    if algorithm is Algorithm.SRS:
        if priorities is None:
            raise ValueError("SRS needs source priorities")
        return _srs_pairing(real, priorities, srs_order)[:m], None
    full = np.zeros((n, n))
    full[:m] = real
    if algorithm is Algorithm.BM:
        pairing, _, _ = _bottleneck_search(full, m)
        return pairing[:m], None
    if algorithm is Algorithm.MBM:
        pairing, certified, _ = _mbm_kernel(full, m)
        return pairing[:m], bool(certified)
    rows, cols = linear_sum_assignment(full)
    return cols[np.argsort(rows)][:m], None


def select_relays(w: WeightMatrix, algorithm, priorities=None, srs_order: str = "max"):
    """Run one matching rule; returns ``(relay per source, certified flag or None)``."""
    algorithm = Algorithm(algorithm)
    if algorithm is Algorithm.SRS and priorities is not None:
        priorities = np.asarray(priorities, dtype=float)
        if priorities.shape != (w.m_real,):
            raise ValueError(f"expected {w.m_real} priorities, got shape {priorities.shape}")
    return _select_raw(np.asarray(w.real), algorithm, priorities, srs_order)


def assign(topology: Topology, params: SystemParams, strategy, ser_targets=1e-4,
           srs_order: str = "max") -> Assignment:
    """Select a relay for every source and allocate both transmit powers."""
    strategy = Strategy.parse(strategy)
    a, b, sigma_sd2 = coefficient_matrices(topology, params)
    pth = _ser_vector(ser_targets, topology.n_sources)
    es, er = topology.source_energies, topology.relay_energies
    _, _, w = policy_powers(strategy.policy, a, b, es[:, None], er[None, :], pth[:, None])
    wm = WeightMatrix.pad(w)
    priorities = priority_metric(es, sigma_sd2) if strategy.algorithm is Algorithm.SRS else None
    relays, certified = select_relays(wm, strategy.algorithm, priorities, srs_order)

    src = np.arange(topology.n_sources)
    ps, pr, weight = policy_powers(strategy.policy, a[src, relays], b[src, relays], es, er[relays], pth)
    pairs = tuple(
        AssignedPair(int(i), int(j), float(p), float(q), float(x))
        for i, j, p, q, x in zip(src, relays, ps, pr, weight)
    )
    return Assignment(strategy, pairs, certified)
