"""Exhaustive relay assignment for small networks, used to cross-check solvers."""
from __future__ import annotations

from itertools import permutations

import numpy as np

from ..assignment import AssignedPair, Assignment, Strategy, _ser_vector, assign
from ..channel import SystemParams, Topology, coefficient_matrices
from ..power import Policy, policy_powers

MAX_SOURCES = 7
MAX_RELAYS = 8
OBJECTIVES = ("sum", "bottleneck", "lex")
# Strategy whose matching must agree with the oracle under each objective.
CHECKED = {"sum": "MWTP-MWM", "bottleneck": "GLM-BM", "lex": "GLM-MBM"}


def _key(values: np.ndarray, objective: str):
    if objective == "sum":
        return float(values.sum())
    if objective == "bottleneck":
        return float(values.max())
    if objective == "lex":
        return tuple(sorted(values.tolist(), reverse=True))
    raise ValueError(f"objective must be one of {OBJECTIVES}, got {objective!r}")


def oracle_assign(topology: Topology, params: SystemParams, policy, objective: str,
                  ser_targets=1e-4) -> Assignment:
    """Best injective source-to-relay map by enumeration.

    Ties keep the first map in ``itertools.permutations`` order.
    """
    m, n = topology.n_sources, topology.n_relays
    if m > MAX_SOURCES or n > MAX_RELAYS:
        raise ValueError(f"oracle limited to M <= {MAX_SOURCES}, N <= {MAX_RELAYS}; got M={m}, N={n}")
    policy = Policy(policy)
    a, b, _ = coefficient_matrices(topology, params)
    pth = _ser_vector(ser_targets, m)
    es, er = topology.source_energies, topology.relay_energies
    ps, pr, w = policy_powers(policy, a, b, es[:, None], er[None, :], pth[:, None])
    rows = np.arange(m)
    best_key, best = None, None
    for perm in permutations(range(n), m):
        cols = np.asarray(perm)
        key = _key(w[rows, cols], objective)
        if best_key is None or key < best_key:
            best_key, best = key, cols
    pairs = tuple(
        AssignedPair(int(i), int(j), float(ps[i, j]), float(pr[i, j]), float(w[i, j]))
        for i, j in zip(rows, best)
    )
    return Assignment(None, pairs)


def cross_check(topology: Topology, params: SystemParams, ser_targets=1e-4) -> dict[str, bool]:
    """Compare each optimal strategy's objective value with the oracle's.

    The lexicographic check only applies when MBM certifies its result.
    """
    out = {}
    for objective, name in CHECKED.items():
        strategy = Strategy.parse(name)
        got = assign(topology, params, strategy, ser_targets)
        if objective == "lex" and not got.certified:
            continue
        want = oracle_assign(topology, params, strategy.policy, objective, ser_targets)
        weights = np.array([p.weight for p in got.pairs])
        expected = np.array([p.weight for p in want.pairs])
        out[name] = _key(weights, objective) == _key(expected, objective)
    return out
