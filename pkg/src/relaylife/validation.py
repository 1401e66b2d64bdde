"""Input coercion for the estimator layer, in the spirit of ``check_array``."""
from __future__ import annotations

import os
from collections.abc import Mapping

import numpy as np

from .channel import Topology
from .matching import WeightMatrix


def check_topology(X) -> Topology:
    """Accept a :class:`Topology`, a path to a topology file, or a mapping.

    Mappings need ``source_positions``, ``relay_positions`` and ``bs_position``;
    energies default to 10 J per node when missing.
    """
    if isinstance(X, Topology):
        return X
    if isinstance(X, (str, os.PathLike)):
        from .harness.topology import read_topology

        return read_topology(X)
    if isinstance(X, Mapping):
        sp = np.asarray(X["source_positions"], dtype=float)
        rp = np.asarray(X["relay_positions"], dtype=float)
        se = X.get("source_energies", np.full(len(sp), 10.0))
        re = X.get("relay_energies", np.full(len(rp), 10.0))
        return Topology(sp, se, rp, re, X.get("bs_position", (50.0, 50.0)))
    raise TypeError(f"cannot interpret {type(X).__name__} as a topology")


def check_ser_targets(ser_targets, n_sources: int) -> np.ndarray:
    t = np.asarray(ser_targets, dtype=float)
    if t.ndim == 0:
        t = np.full(n_sources, float(t))
    if t.shape != (n_sources,):
        raise ValueError(f"expected a scalar or {n_sources} SER targets, got shape {t.shape}")
    if np.any(t <= 0) or np.any(t >= 1):
        raise ValueError("SER targets must lie in (0, 1)")
    return t


def check_weight_matrix(weights, m_real=None) -> WeightMatrix:
    """Wrap an ``M x N`` real matrix (padded) or an ``n x n`` matrix with ``m_real``."""
    if isinstance(weights, WeightMatrix):
        return weights
    w = np.asarray(weights, dtype=float)
    if m_real is None:
        return WeightMatrix.pad(w)
    return WeightMatrix(w, int(m_real))
