"""Bipartite matching on square, dummy-padded weight matrices.

Rows ``0..m_real-1`` are real sources; the remaining rows are zero-weight
dummies that make the graph balanced when there are more relays than
sources. Objectives (sums, bottlenecks, sorted weight vectors) only ever
look at the real rows.

Searches scan rows and columns in ascending index order, so equal-weight
alternatives always resolve the same way.
"""
from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np
from scipy.optimize import linear_sum_assignment


@dataclass(frozen=True, eq=False)
class WeightMatrix:
    weights: np.ndarray
    m_real: int

    def __post_init__(self):
        w = np.array(self.weights, dtype=float)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise ValueError(f"weight matrix must be square, got shape {w.shape}")
        if not 1 <= self.m_real <= w.shape[0]:
            raise ValueError(f"m_real must lie in [1, {w.shape[0]}], got {self.m_real}")
        if not np.all(np.isfinite(w)) or np.any(w < 0):
            raise ValueError("weights must be finite and non-negative")
        if np.any(w[self.m_real:] != 0):
            raise ValueError("dummy rows must be all zero")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @classmethod
    def pad(cls, real_weights) -> "WeightMatrix":
        """Square up an ``M x N`` (M <= N) matrix with zero dummy rows."""
        real = np.asarray(real_weights, dtype=float)
        if real.ndim != 2 or real.shape[0] > real.shape[1]:
            raise ValueError(f"expected an M x N matrix with M <= N, got {real.shape}")
        m, n = real.shape
        full = np.zeros((n, n))
        full[:m] = real
        return cls(full, m)

    @property
    def n(self) -> int:
        return self.weights.shape[0]

    @property
    def real(self) -> np.ndarray:
        return self.weights[: self.m_real]


@dataclass(frozen=True, eq=False)
class Matching:
    """A perfect matching, ``pairing[row] = col``."""

    pairing: np.ndarray
    m_real: int

    def __post_init__(self):
        p = np.array(self.pairing, dtype=np.int64)
        if sorted(p.tolist()) != list(range(len(p))):
            raise ValueError("pairing must be a permutation")
        p.setflags(write=False)
        object.__setattr__(self, "pairing", p)

    @property
    def pairs(self) -> list[tuple[int, int]]:
        return [(i, int(self.pairing[i])) for i in range(self.m_real)]

    def real_weights(self, w: WeightMatrix) -> np.ndarray:
        rows = np.arange(self.m_real)
        return w.weights[rows, self.pairing[: self.m_real]]

    def sorted_weights(self, w: WeightMatrix) -> tuple[float, ...]:
        """Real-row weights in descending order (the lexicographic key)."""
        return tuple(sorted(self.real_weights(w).tolist(), reverse=True))


@dataclass(frozen=True, eq=False)
class BottleneckResult:
    matching: Matching
    bottleneck_value: float
    bottleneck_edge: tuple[int, int]


@dataclass(frozen=True, eq=False)
class MbmResult:
    matching: Matching
    certified: bool
    # Unique bottleneck edges in the order they were fixed (empty if uncertified
    # in the first iteration).
    edges: tuple[tuple[int, int], ...] = ()


@numba.njit(cache=True)
def _kuhn(adj):
    n_rows, n_cols = adj.shape
    match_row = np.full(n_rows, -1, np.int64)
    match_col = np.full(n_cols, -1, np.int64)
    for r in range(n_rows):
        for c in range(n_cols):
            if adj[r, c] and match_col[c] < 0:
                match_row[r] = c
                match_col[c] = r
                break

    visited = np.zeros(n_cols, np.bool_)
    stack_row = np.empty(n_rows + 1, np.int64)
    stack_next = np.empty(n_rows + 1, np.int64)
    stack_col = np.empty(n_rows + 1, np.int64)
    for r0 in range(n_rows):
        if match_row[r0] >= 0:
            continue
        visited[:] = False
        depth = 0
        stack_row[0] = r0
        stack_next[0] = 0
        found = False
        while depth >= 0:
            r = stack_row[depth]
            c = stack_next[depth]
            descended = False
            while c < n_cols:
                if adj[r, c] and not visited[c]:
                    visited[c] = True
                    stack_next[depth] = c + 1
                    stack_col[depth] = c
                    if match_col[c] < 0:
                        found = True
                    else:
                        stack_row[depth + 1] = match_col[c]
                        stack_next[depth + 1] = 0
                        descended = True
                    break
                c += 1
            if found:
                break
            if descended:
                depth += 1
            else:
                depth -= 1
        if found:
            for d in range(depth + 1):
                rr = stack_row[d]
                cc = stack_col[d]
                match_row[rr] = cc
                match_col[cc] = rr

    size = 0
    for r in range(n_rows):
        if match_row[r] >= 0:
            size += 1
    return size, match_row


def maximum_matching(adjacency) -> tuple[int, np.ndarray]:
    """Maximum-cardinality matching by augmenting paths.

    Returns the matching size and ``pairing`` with ``pairing[row] = col``,
    or -1 for unmatched rows.
    """
    adj = np.ascontiguousarray(adjacency, dtype=np.bool_)
    if adj.ndim != 2:
        raise ValueError("adjacency must be a 2-D boolean matrix")
    size, pairing = _kuhn(adj)
    return int(size), pairing


@numba.njit(cache=True)
def _bottleneck_search(w, m_real):
    n = w.shape[0]
    real = w[:m_real]
    # Every real row must use at least its cheapest edge.
    floor = 0.0
    for i in range(m_real):
        floor = max(floor, real[i].min())
    cands = np.unique(real)
    lo = np.searchsorted(cands, floor)
    hi = len(cands) - 1
    best = np.full(n, -1, np.int64)
    adj = np.ones((n, n), np.bool_)
    while lo <= hi:
        mid = (lo + hi) // 2
        adj[:m_real] = real <= cands[mid]
        size, pairing = _kuhn(adj)
        if size == n:
            best = pairing
            hi = mid - 1
        else:
            lo = mid + 1
    value = cands[lo]
    edge_row = -1
    for i in range(m_real):
        if real[i, best[i]] == value:
            edge_row = i
            break
    return best, value, edge_row


@numba.njit(cache=True)
def _has_alternative(w, m_real, value, edge_row, edge_col):
    n = w.shape[0]
    adj = np.ones((n, n), np.bool_)
    adj[:m_real] = w[:m_real] <= value
    adj[edge_row, edge_col] = False
    size, _ = _kuhn(adj)
    return size == n


@numba.njit(cache=True)
def _mbm_kernel(w, m_real):
    n = w.shape[0]
    first, _, _ = _bottleneck_search(w, m_real)
    rows = np.arange(n)
    cols = np.arange(n)
    fixed = np.empty((m_real, 2), np.int64)
    for it in range(m_real):
        k = n - it
        m_left = m_real - it
        sub = np.empty((k, k))
        for i in range(k):
            for j in range(k):
                sub[i, j] = w[rows[i], cols[j]]
        pairing, value, er = _bottleneck_search(sub, m_left)
        ec = pairing[er]
        if _has_alternative(sub, m_left, value, er, ec):
            return first, False, fixed[:it]
        fixed[it, 0] = rows[er]
        fixed[it, 1] = cols[ec]
        # Rows stay sorted, so the remaining real rows still come first.
        rows = np.concatenate((rows[:er], rows[er + 1:]))
        cols = np.concatenate((cols[:ec], cols[ec + 1:]))

    out = np.empty(n, np.int64)
    for it in range(m_real):
        out[fixed[it, 0]] = fixed[it, 1]
    # Dummy rows take the leftover relays.
    for i in range(len(rows)):
        out[rows[i]] = cols[i]
    return out, True, fixed


def _bottleneck(w: np.ndarray, m_real: int):
    """Bottleneck search on a raw square array. Returns ``(pairing, value, edge)``."""
    best, value, row = _bottleneck_search(np.ascontiguousarray(w, dtype=float), m_real)
    return best, float(value), (int(row), int(best[row]))


def hungarian_min_weight(w: WeightMatrix) -> tuple[Matching, float]:
    """Minimum-weight perfect matching of the padded matrix."""
    rows, cols = linear_sum_assignment(w.weights)
    pairing = np.empty(w.n, dtype=np.int64)
    pairing[rows] = cols
    total = float(w.weights[np.arange(w.m_real), pairing[: w.m_real]].sum())
    return Matching(pairing, w.m_real), total


def bottleneck_matching(w: WeightMatrix) -> BottleneckResult:
    """Perfect matching minimising the largest real-row weight.

    Binary search over the distinct real weights, testing each threshold for
    a perfect matching on the admitted edges.
    """
    pairing, value, edge = _bottleneck(w.weights, w.m_real)
    return BottleneckResult(Matching(pairing, w.m_real), value, edge)


def unique_bottleneck_edge_test(w: WeightMatrix, result: BottleneckResult) -> bool:
    """True iff the bottleneck edge lies in every bottleneck matching.

    Drops the edge itself and every strictly heavier edge; if the remainder
    still has a perfect matching, another bottleneck matching avoids the edge.
    Edges tied with the bottleneck weight are kept.
    """
    r, c = result.bottleneck_edge
    return not _has_alternative(w.weights, w.m_real, result.bottleneck_value, r, c)


def minimum_bottleneck_matching(w: WeightMatrix) -> MbmResult:
    """Lexicographic bottleneck matching by repeated unique-edge fixing.

    Each round finds a bottleneck matching of the remaining graph and checks
    that its bottleneck edge is unique. A unique edge is kept and both of its
    endpoints are removed. If a round finds no unique edge, the first-round
    bottleneck matching is returned with ``certified=False``.
    """
    pairing, certified, fixed = _mbm_kernel(w.weights, w.m_real)
    edges = tuple((int(r), int(c)) for r, c in fixed)
    return MbmResult(Matching(pairing, w.m_real), bool(certified), edges)


def exhaustive_optimum(w: WeightMatrix, objective: str) -> tuple[np.ndarray, object]:
    """Brute-force optimum over all ``n!`` perfect matchings (test oracle).

    ``objective`` is ``"sum"``, ``"bottleneck"`` or ``"lex"``; returns the
    first optimal pairing in ``itertools.permutations`` order and its score.
    """
    from itertools import permutations

    if w.n > 8:
        raise ValueError("exhaustive search is limited to n <= 8")
    real_rows = np.arange(w.m_real)
    best_key, best_perm = None, None
    for perm in permutations(range(w.n)):
        vals = w.weights[real_rows, np.asarray(perm[: w.m_real])]
        if objective == "sum":
            key = float(vals.sum())
        elif objective == "bottleneck":
            key = float(vals.max())
        elif objective == "lex":
            key = tuple(sorted(vals.tolist(), reverse=True))
        else:
            raise ValueError(f"unknown objective {objective!r}")
        if best_key is None or key < best_key:
            best_key, best_perm = key, perm
    return np.asarray(best_perm), best_key
