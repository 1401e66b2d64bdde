"""Experiment specification and the flat ``key = value`` config format.

Defaults reproduce the evaluation setup: 6 sources in a 100 m square with
the BS at the centre, 10 J per node, 10 kbps, G0 = -70 dB,
N0 = -134 dBm, alpha = 3.5, eta = 1, K = 2, SER target 1e-4, 300 topologies
and an update every 60 packets.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, field, fields
from typing import Iterable, Optional

from ..assignment import STRATEGIES, Strategy
from ..channel import SystemParams
from ..lifetime import SimConfig

SEED_ENV = "RELAYLIFE_SEED"
SWEEPS = ("relay_count", "update_interval")


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def dbm_to_watts(dbm: float) -> float:
    return 10.0 ** ((dbm - 30.0) / 10.0)


def default_seed() -> int:
    return int(os.environ.get(SEED_ENV, "0"))


@dataclass(frozen=True)
class ExperimentSpec:
    area_side: float = 100.0
    bs_position: tuple[float, float] = (50.0, 50.0)
    n_sources: int = 6
    n_relays: int = 20
    initial_energy: float = 10.0
    n_topologies: int = 300
    seed: int = field(default_factory=default_seed)
    sweep: str = "relay_count"
    sweep_values: tuple = ()
    strategies: tuple[Strategy, ...] = STRATEGIES
    # System and simulation settings (linear units).
    eta: float = 1.0
    alpha: float = 3.5
    g0_db: float = -70.0
    n0_dbm: float = -134.0
    mod_index: float = 2.0
    ser_target: float = 1e-4
    update_interval: Optional[int] = 60
    packet_bits: float = 1000.0
    data_rate: float = 1e4
    max_packets: int = 10**8
    srs_order: str = "max"

    def __post_init__(self):
        object.__setattr__(self, "strategies", tuple(Strategy.parse(s) for s in self.strategies))
        object.__setattr__(self, "bs_position", tuple(float(v) for v in self.bs_position))
        if self.sweep not in SWEEPS:
            raise ValueError(f"sweep must be one of {SWEEPS}, got {self.sweep!r}")
        if not self.sweep_values:
            base = self.n_relays if self.sweep == "relay_count" else self.update_interval
            object.__setattr__(self, "sweep_values", (base,))
        values = tuple(_normalise_sweep_value(self.sweep, v) for v in self.sweep_values)
        object.__setattr__(self, "sweep_values", values)
        if self.n_topologies < 1:
            raise ValueError("n_topologies must be >= 1")
        if not self.strategies:
            raise ValueError("at least one strategy is required")
        if self.n_sources < 1:
            raise ValueError("n_sources must be >= 1")
        if self.sweep == "relay_count" and min(self.sweep_values) < self.n_sources:
            raise ValueError("relay counts must be >= n_sources")

    @property
    def params(self) -> SystemParams:
        return SystemParams(
            eta=self.eta,
            alpha=self.alpha,
            noise_power=dbm_to_watts(self.n0_dbm),
            power_gain=db_to_linear(self.g0_db),
            mod_index=self.mod_index,
        )

    def sim_config(self, strategy, update_interval) -> SimConfig:
        return SimConfig(
            strategy=strategy,
            params=self.params,
            ser_target=self.ser_target,
            update_interval_packets=update_interval,
            packet_bits=self.packet_bits,
            data_rate=self.data_rate,
            max_packets=self.max_packets,
            srs_order=self.srs_order,
        )


def _normalise_sweep_value(sweep, value):
    if sweep == "update_interval":
        if value is None or (isinstance(value, str) and value.strip().lower() in ("inf", "none")):
            return None
        if isinstance(value, float) and math.isinf(value):
            return None
    value = float(value)
    if value != int(value) or value < 1:
        raise ValueError(f"sweep value must be a positive integer, got {value!r}")
    return int(value)


FIGURES = {
    "1": dict(sweep="relay_count", sweep_values=(10, 15, 20, 25, 30), update_interval=60),
    "2": dict(sweep="update_interval", n_relays=20,
              sweep_values=(60, 1000, 2000, 5000, 10000, 17000, 20000, 30000)),
    "3": dict(sweep="update_interval", n_relays=20, sweep_values=(60, 30000)),
    "4": dict(sweep="update_interval", n_relays=20, sweep_values=(60, 30000)),
}


def figure_spec(fig, **overrides) -> ExperimentSpec:
    """Preset reproducing one figure's sweep; ``overrides`` win over the preset."""
    try:
        preset = FIGURES[str(fig)]
    except KeyError:
        raise ValueError(f"unknown figure {fig!r}; choose from {sorted(FIGURES)}") from None
    return ExperimentSpec(**{**preset, **overrides})


_INT_KEYS = {"n_sources", "n_relays", "n_topologies", "seed", "max_packets"}
_STR_KEYS = {"sweep", "srs_order"}


def _coerce(key: str, raw: str):
    raw = raw.strip()
    if key in _INT_KEYS:
        return int(float(raw))
    if key in _STR_KEYS:
        return raw
    if key == "update_interval":
        return None if raw.lower() in ("inf", "none") else int(float(raw))
    if key in ("sweep_values", "strategies"):
        return tuple(v.strip() for v in raw.split(",") if v.strip())
    if key == "bs_position":
        return tuple(float(v) for v in raw.split(","))
    return float(raw)


_ALIASES = {"k": "mod_index", "tu": "update_interval", "m": "n_sources", "n": "n_relays",
            "topologies": "n_topologies", "energy": "initial_energy", "p_th": "ser_target"}


def parse_overrides(pairs: Iterable[str]) -> dict:
    """Turn ``key=value`` strings into ExperimentSpec keyword arguments."""
    known = {f.name for f in fields(ExperimentSpec)}
    out = {}
    bs = {}
    for lineno, line in enumerate(pairs, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ValueError(f"line {lineno}: expected key=value, got {line!r}")
        key = _ALIASES.get(key.strip().lower(), key.strip().lower())
        if key in ("bs_x", "bs_y"):
            bs[key] = float(value)
            continue
        if key not in known:
            raise ValueError(f"line {lineno}: unknown key {key!r}")
        out[key] = _coerce(key, value)
    if bs:
        x, y = out.get("bs_position", (50.0, 50.0))
        out["bs_position"] = (bs.get("bs_x", x), bs.get("bs_y", y))
    return out


def read_config(path) -> dict:
    with open(path) as fh:
        return parse_overrides(fh)


def format_config(spec: ExperimentSpec) -> str:
    lines = []
    for f in fields(spec):
        value = getattr(spec, f.name)
        if f.name in ("sweep_values", "strategies", "bs_position"):
            value = ",".join("inf" if v is None else str(v) for v in value)
        elif value is None:
            value = "inf"
        lines.append(f"{f.name} = {value}")
    return "\n".join(lines) + "\n"

