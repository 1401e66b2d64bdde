"""Monte-Carlo sweeps over random topologies and their CSV output.

All strategies in a sweep cell run on the same topology set (paired
design). Topology ``i`` always comes from the PRNG stream ``(seed, i)``.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Optional

import numpy as np

from ..lifetime import run_lifetime
from .config import ExperimentSpec
from .topology import PRNG_NAME, generate_topology

CSV_FIELDS = (
    "strategy",
    "sweep_name",
    "sweep_value",
    "mean_lifetime_packets",
    "mean_energy_per_packet_j",
    "mean_wasted_energy_j",
    "n_topologies",
    "seed",
)
SEEDING = "SeedSequence(seed, spawn_key=(topology_index,))"


@dataclass(frozen=True)
class RunRecord:
    strategy: str
    sweep_value: Optional[int]
    topology_index: int
    lifetime_packets: int
    energy_per_packet: Optional[float]
    wasted_energy: float
    consumed_energy: float
    initial_energy: float
    truncated: bool


@dataclass(frozen=True)
class ResultRow:
    strategy: str
    sweep_name: str
    sweep_value: Optional[int]
    mean_lifetime_packets: float
    mean_energy_per_packet_j: float
    mean_wasted_energy_j: float
    n_topologies: int
    seed: int


def _topology(spec: ExperimentSpec, index: int, n_relays: int):
    return generate_topology(
        spec.seed, index, spec.n_sources, n_relays,
        area_side=spec.area_side, bs_position=spec.bs_position, energy=spec.initial_energy,
    )


def collect_runs(spec: ExperimentSpec, progress: Optional[Callable[[int, int], None]] = None) -> list[RunRecord]:
    """Run every (sweep value, topology, strategy) cell and return per-run records."""
    records = []
    total = len(spec.sweep_values) * spec.n_topologies
    done = 0
    relay_sweep = spec.sweep == "relay_count"
    for value in spec.sweep_values:
        n_relays = value if relay_sweep else spec.n_relays
        interval = spec.update_interval if relay_sweep else value
        configs = [spec.sim_config(s, interval) for s in spec.strategies]
        for index in range(spec.n_topologies):
            topo = _topology(spec, index, n_relays)
            for cfg in configs:
                res = run_lifetime(topo, cfg)
                records.append(RunRecord(
                    str(cfg.strategy), value, index, res.lifetime_packets, res.avg_energy_per_packet,
                    res.wasted_energy, res.consumed_energy, res.initial_energy, res.truncated,
                ))
            done += 1
            if progress is not None:
                progress(done, total)
    return records


def _sort_key(row):
    v = row.sweep_value
    return (row.strategy, math.inf if v is None else v)


def aggregate(records: Iterable[RunRecord], spec: ExperimentSpec) -> list[ResultRow]:
    cells: dict = {}
    for r in records:
        cells.setdefault((r.strategy, r.sweep_value), []).append(r)
    rows = []
    for (strategy, value), runs in cells.items():
        epp = [r.energy_per_packet for r in runs if r.energy_per_packet is not None]
        rows.append(ResultRow(
            strategy=strategy,
            sweep_name=spec.sweep,
            sweep_value=value,
            mean_lifetime_packets=float(np.mean([r.lifetime_packets for r in runs])),
            mean_energy_per_packet_j=float(np.mean(epp)) if epp else math.nan,
            mean_wasted_energy_j=float(np.mean([r.wasted_energy for r in runs])),
            n_topologies=len(runs),
            seed=spec.seed,
        ))
    return sorted(rows, key=_sort_key)


def run_experiment(spec: ExperimentSpec, progress=None) -> list[ResultRow]:
    return aggregate(collect_runs(spec, progress), spec)


def _fmt(value) -> str:
    if value is None:
        return "inf"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def format_csv(rows: Iterable[ResultRow], metadata: Optional[dict] = None) -> str:
    meta = {"prng": PRNG_NAME, "seeding": SEEDING, **(metadata or {})}
    out = io.StringIO()
    for k, v in meta.items():
        out.write(f"# {k}={v}\n")
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_FIELDS)
    for row in rows:
        writer.writerow([_fmt(getattr(row, f)) for f in CSV_FIELDS])
    return out.getvalue()


def parse_csv(text: str) -> list[ResultRow]:
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    reader = csv.DictReader(lines)
    if tuple(reader.fieldnames or ()) != CSV_FIELDS:
        raise ValueError(f"unexpected CSV header {reader.fieldnames}")
    rows = []
    for rec in reader:
        value = rec["sweep_value"]
        rows.append(ResultRow(
            strategy=rec["strategy"],
            sweep_name=rec["sweep_name"],
            sweep_value=None if value == "inf" else int(value),
            mean_lifetime_packets=float(rec["mean_lifetime_packets"]),
            mean_energy_per_packet_j=float(rec["mean_energy_per_packet_j"]),
            mean_wasted_energy_j=float(rec["mean_wasted_energy_j"]),
            n_topologies=int(rec["n_topologies"]),
            seed=int(rec["seed"]),
        ))
    return rows
