"""Closed-form per-pair power allocation under the GLM and MWTP policies.

Both policies meet the SER target with equality. GLM balances the source
and relay lifetimes (``es/ps == er/pr``); MWTP minimises the
energy-weighted power ``ps/es + pr/er`` along the SER-equality curve.

The array kernels (:func:`glm_powers`, :func:`mwtp_powers`) broadcast, so
the same code builds a full M x N weight matrix or a single pair.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .channel import PairCoefficients


class Policy(str, enum.Enum):
    GLM = "GLM"
    MWTP = "MWTP"


@dataclass(frozen=True)
class PairContext:
    coeff: PairCoefficients
    es: float
    er: float
    ser_target: float

    def __post_init__(self):
        if not (self.es > 0 and self.er > 0):
            raise ValueError("residual energies must be positive")
        # Only positivity matters to the closed forms; callers that treat the
        # target as a probability enforce the (0, 1) range themselves.
        if not self.ser_target > 0:
            raise ValueError(f"ser_target must be positive, got {self.ser_target}")


@dataclass(frozen=True)
class PairAllocation:
    ps: float
    pr: float
    weight: float


def glm_powers(a, b, es, er, ser_target):
    """Return ``(ps, pr, weight)`` for GLM; weight is the inverse pair lifetime."""
    num = a * er + b * es
    ps = np.sqrt(num / (er * ser_target))
    pr = ps * er / es
    weight = np.sqrt(num / (es * es * er * ser_target))
    return ps, pr, weight


def mwtp_powers(a, b, es, er, ser_target):
    """Return ``(ps, pr, weight)`` for MWTP; weight is ``ps/es + pr/er``."""
    c = b * es / (a * er)
    # x = pth*ps^2/a; x - 1 is kept separate so pr avoids the cancellation
    # in pth*ps^2 - a when c is tiny.
    x_minus_1 = 0.5 * (c + np.sqrt(c * (c + 8.0)))
    ps = np.sqrt(a * (1.0 + x_minus_1) / ser_target)
    pr = b * ps / (a * x_minus_1)
    weight = ps / es + pr / er
    return ps, pr, weight


_KERNELS = {Policy.GLM: glm_powers, Policy.MWTP: mwtp_powers}


def policy_powers(policy, a, b, es, er, ser_target):
    return _KERNELS[Policy(policy)](a, b, es, er, ser_target)


def _allocate(kernel, ctx: PairContext) -> PairAllocation:
    ps, pr, w = kernel(ctx.coeff.a, ctx.coeff.b, ctx.es, ctx.er, ctx.ser_target)
    return PairAllocation(float(ps), float(pr), float(w))


def glm_allocate(ctx: PairContext) -> PairAllocation:
    return _allocate(glm_powers, ctx)


def mwtp_allocate(ctx: PairContext) -> PairAllocation:
    return _allocate(mwtp_powers, ctx)


def allocate(policy, ctx: PairContext) -> PairAllocation:
    return _allocate(_KERNELS[Policy(policy)], ctx)


def pair_weight(policy, ctx: PairContext) -> float:
    """Weight of a pair under ``policy``. Weights of different policies are not comparable."""
    return allocate(policy, ctx).weight


def mwtp_relay_power(ps, a, b, ser_target):
    """Relay power on the SER-equality curve for a given source power."""
    return b * ps / (ser_target * ps * ps - a)
