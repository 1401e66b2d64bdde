"""Random topology generation and the plain-text topology file format.

File format, one node per line (``#`` starts a comment)::

    x  12.5  40.0  10.0     # source: x_m y_m energy_j
    r  70.1  22.3  10.0     # relay
    bs 50.0  50.0           # base station (an energy column is ignored)
"""
from __future__ import annotations

import io
import os
from typing import Iterable

import numpy as np

from ..channel import REFERENCE_DISTANCE, InvalidTopologyError, Topology

PRNG_NAME = "numpy.PCG64"
MAX_REDRAWS = 10_000


def topology_rng(seed: int, index: int) -> np.random.Generator:
    """Independent PCG64 stream for topology ``index`` under master ``seed``."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(index,))))


def generate_topology(seed: int, index: int, n_sources: int, n_relays: int, *,
                      area_side: float = 100.0, bs_position=(50.0, 50.0),
                      energy: float = 10.0) -> Topology:
    """Uniform node placement in a square, re-drawing nodes closer than 1 m.

    Sources are placed first, so the source layout of a given ``(seed, index)``
    does not depend on the number of relays.
    """
    rng = topology_rng(seed, index)
    bs = np.asarray(bs_position, dtype=float)
    placed = [bs]
    for _ in range(n_sources + n_relays):
        for _attempt in range(MAX_REDRAWS):
            p = rng.uniform(0.0, area_side, size=2)
            if min(np.hypot(*(p - q)) for q in placed) >= REFERENCE_DISTANCE:
                break
        else:
            raise RuntimeError(f"could not place node after {MAX_REDRAWS} draws")
        placed.append(p)
    nodes = np.array(placed[1:])
    return Topology(
        nodes[:n_sources],
        np.full(n_sources, float(energy)),
        nodes[n_sources:],
        np.full(n_relays, float(energy)),
        bs,
    )


def parse_topology(lines: Iterable[str]) -> Topology:
    sources, relays, bs = [], [], None
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        kind, *fields = line.split()
        try:
            values = [float(v) for v in fields]
        except ValueError as exc:
            raise InvalidTopologyError(f"line {lineno}: {exc}") from None
        kind = kind.lower()
        if kind in ("x", "r"):
            if len(values) != 3:
                raise InvalidTopologyError(f"line {lineno}: expected 'x|r X Y ENERGY'")
            (sources if kind == "x" else relays).append(values)
        elif kind == "bs":
            if len(values) not in (2, 3) or bs is not None:
                raise InvalidTopologyError(f"line {lineno}: expected one 'bs X Y' line")
            bs = values[:2]
        else:
            raise InvalidTopologyError(f"line {lineno}: unknown node kind {kind!r}")
    if bs is None:
        raise InvalidTopologyError("missing 'bs' line")
    if not sources:
        raise InvalidTopologyError("no sources")
    s = np.array(sources).reshape(-1, 3)
    r = np.array(relays).reshape(-1, 3)
    return Topology(s[:, :2], s[:, 2], r[:, :2], r[:, 2], bs)


def read_topology(path: "str | os.PathLike") -> Topology:
    with open(path) as fh:
        return parse_topology(fh)


def format_topology(topology: Topology) -> str:
    out = io.StringIO()
    for (x, y), e in zip(topology.source_positions, topology.source_energies):
        out.write(f"x {float(x)!r} {float(y)!r} {float(e)!r}\n")
    for (x, y), e in zip(topology.relay_positions, topology.relay_energies):
        out.write(f"r {float(x)!r} {float(y)!r} {float(e)!r}\n")
    bx, by = topology.bs_position
    out.write(f"bs {float(bx)!r} {float(by)!r}\n")
    return out.getvalue()


def write_topology(topology: Topology, path: "str | os.PathLike") -> None:
    with open(path, "w") as fh:
        fh.write(format_topology(topology))
