"""Path-loss link variances and the analytic end-to-end SER of an AF pair.

Everything here works in linear units (watts, metres). Conversions from
dB/dBm happen in :mod:`relaylife.harness.config`.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

REFERENCE_DISTANCE = 1.0


class InvalidTopologyError(ValueError):
    """Raised for topologies violating energy or minimum-distance constraints."""


@dataclass(frozen=True)
class SystemParams:
    """Propagation, noise and modulation constants.

    Attributes
    ----------
    eta : float
        Path-loss constant.
    alpha : float
        Path-loss exponent.
    noise_power : float
        AWGN power at relays and the BS, in watts.
    power_gain : float
        Linear power gain at the 1 m reference distance.
    mod_index : float
        Modulation dependent constant ``K`` of the SER approximation.
    """

    eta: float = 1.0
    alpha: float = 3.5
    noise_power: float = 10 ** (-16.4)
    power_gain: float = 1e-7
    mod_index: float = 2.0

    def __post_init__(self):
        for name in ("eta", "alpha", "noise_power", "power_gain", "mod_index"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be positive and finite, got {value!r}")

    @property
    def ser_scale(self) -> float:
        """Common factor ``3 N0^2 / (4 K^2 G0^2)`` of both SER coefficients."""
        return 3.0 * self.noise_power**2 / (4.0 * self.mod_index**2 * self.power_gain**2)


def _frozen(values, shape_tail, name):
    arr = np.array(values, dtype=float)
    if arr.ndim != len(shape_tail) + 1 or arr.shape[1:] != shape_tail:
        raise InvalidTopologyError(f"{name} has shape {arr.shape}, expected (n, {shape_tail})")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Topology:
    """Positions and residual energies of M sources, N relays and the BS.

    Arrays are copied and made read-only; use :meth:`with_energies` to get
    the same geometry with a different energy state.
    """

    source_positions: np.ndarray
    source_energies: np.ndarray
    relay_positions: np.ndarray
    relay_energies: np.ndarray
    bs_position: np.ndarray = field(default_factory=lambda: np.array([50.0, 50.0]))

    def __post_init__(self):
        sp = _frozen(self.source_positions, (2,), "source_positions")
        rp = _frozen(self.relay_positions, (2,), "relay_positions")
        se = _frozen(self.source_energies, (), "source_energies")
        re = _frozen(self.relay_energies, (), "relay_energies")
        bs = np.array(self.bs_position, dtype=float)
        if bs.shape != (2,):
            raise InvalidTopologyError(f"bs_position must have shape (2,), got {bs.shape}")
        bs.setflags(write=False)
        object.__setattr__(self, "source_positions", sp)
        object.__setattr__(self, "relay_positions", rp)
        object.__setattr__(self, "source_energies", se)
        object.__setattr__(self, "relay_energies", re)
        object.__setattr__(self, "bs_position", bs)

        m, n = len(sp), len(rp)
        if m < 1:
            raise InvalidTopologyError("at least one source is required")
        if n < m:
            raise InvalidTopologyError(f"need N >= M relays, got M={m}, N={n}")
        if len(se) != m or len(re) != n:
            raise InvalidTopologyError("one energy value per node is required")
        if not (np.all(np.isfinite(se)) and np.all(np.isfinite(re))):
            raise InvalidTopologyError("energies must be finite")
        if np.any(se <= 0) or np.any(re <= 0):
            raise InvalidTopologyError("all node energies must be positive")
        nodes = np.vstack([sp, rp, bs[None, :]])
        if not np.all(np.isfinite(nodes)):
            raise InvalidTopologyError("positions must be finite")
        gaps = np.linalg.norm(nodes[:, None, :] - nodes[None, :, :], axis=-1)
        np.fill_diagonal(gaps, np.inf)
        if gaps.min() < REFERENCE_DISTANCE:
            i, j = np.unravel_index(np.argmin(gaps), gaps.shape)
            raise InvalidTopologyError(
                f"nodes {i} and {j} are {gaps[i, j]:.4g} m apart; minimum is {REFERENCE_DISTANCE} m"
            )

    @property
    def n_sources(self) -> int:
        return len(self.source_positions)

    @property
    def n_relays(self) -> int:
        return len(self.relay_positions)

    def with_energies(self, source_energies, relay_energies) -> "Topology":
        return Topology(
            self.source_positions, source_energies, self.relay_positions, relay_energies, self.bs_position
        )

    def distances(self):
        """Return ``(D_sd (M,), D_sr (M, N), D_rd (N,))`` in metres."""
        d_sd = np.linalg.norm(self.source_positions - self.bs_position, axis=1)
        d_rd = np.linalg.norm(self.relay_positions - self.bs_position, axis=1)
        d_sr = np.linalg.norm(
            self.source_positions[:, None, :] - self.relay_positions[None, :, :], axis=-1
        )
        return d_sd, d_sr, d_rd


@dataclass(frozen=True)
class PairCoefficients:
    """SER coefficients ``(A, B)`` of one source-relay pair, in W^2."""

    a: float
    b: float

    def __post_init__(self):
        if not (self.a > 0 and self.b > 0):
            raise ValueError(f"SER coefficients must be positive, got a={self.a}, b={self.b}")


def link_variance(distance, params: SystemParams):
    """Average channel variance ``eta * D**-alpha``; accepts scalars or arrays."""
    d = np.asarray(distance, dtype=float)
    if np.any(d < REFERENCE_DISTANCE):
        raise InvalidTopologyError(f"link distance below {REFERENCE_DISTANCE} m")
    out = params.eta * d ** (-params.alpha)
    return float(out) if out.ndim == 0 else out


def coefficient_matrices(topology: Topology, params: SystemParams):
    """Vectorised SER coefficients for every source-relay pair.

    Returns
    -------
    a, b : ndarray of shape (M, N)
    sigma_sd2 : ndarray of shape (M,)
        Source-to-BS variances, needed by the SRS priority metric.
    """
    d_sd, d_sr, d_rd = topology.distances()
    s_sd = link_variance(d_sd, params)
    s_sr = link_variance(d_sr, params)
    s_rd = link_variance(d_rd, params)
    scale = params.ser_scale
    a = scale / (s_sd[:, None] * s_sr)
    b = scale / (s_sd[:, None] * s_rd[None, :])
    return a, b, np.atleast_1d(s_sd)


def ser_coefficients(topology: Topology, source_index: int, relay_index: int,
                     params: SystemParams) -> PairCoefficients:
    if not 0 <= source_index < topology.n_sources:
        raise IndexError(f"source index {source_index} out of range")
    if not 0 <= relay_index < topology.n_relays:
        raise IndexError(f"relay index {relay_index} out of range")
    s = topology.source_positions[source_index]
    r = topology.relay_positions[relay_index]
    bs = topology.bs_position
    s_sd = link_variance(np.linalg.norm(s - bs), params)
    s_sr = link_variance(np.linalg.norm(s - r), params)
    s_rd = link_variance(np.linalg.norm(r - bs), params)
    scale = params.ser_scale
    return PairCoefficients(a=scale / (s_sd * s_sr), b=scale / (s_sd * s_rd))


def end_to_end_ser(ps, pr, coeff: PairCoefficients):
    """SER at the BS after MRC: ``A/ps**2 + B/(ps*pr)``."""
    ps = np.asarray(ps, dtype=float)
    pr = np.asarray(pr, dtype=float)
    if np.any(ps <= 0) or np.any(pr <= 0):
        raise ValueError("transmit powers must be positive")
    out = coeff.a / ps**2 + coeff.b / (ps * pr)
    return float(out) if out.ndim == 0 else out
