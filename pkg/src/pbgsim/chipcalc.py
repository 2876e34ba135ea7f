"""Closed-form atom-chip and strong-coupling design calculators.

U-trap geometry: a straight wire carrying current I with a perpendicular
bias field B_bias forms a two-dimensional quadrupole at height
r = (mu0 / 2 pi) I / B_bias with gradient grad B = (2 pi / mu0) B_bias^2 / I,
so r * grad B = B_bias identically.

Strong-coupling figures: saturation photon number m0 = gamma_perp^2 / 2 g0^2
and critical atom number N0 = 2 gamma_perp kappa / g0^2.  Both are ratios of
rates, so plain frequencies and angular frequencies give the same answer as
long as the three inputs use one convention consistently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .constants import MU0

THERMAL_TUNING_HZ_PER_K = 20e9   # cavity resonance shift per kelvin


@dataclass(frozen=True)
class TrapGeometry:
    current: float       # A
    bias_field: float    # T
    height: float        # m
    gradient: float      # T/m

    def __post_init__(self):
        rel = abs(self.height * self.gradient - self.bias_field)
        if rel > 1e-12 * self.bias_field:
            raise ValueError("height * gradient must equal bias_field")


@dataclass(frozen=True)
class CouplingFigures:
    m0: float    # saturation photon number
    n0: float    # critical atom number

    def __post_init__(self):
        if self.m0 <= 0 or self.n0 <= 0:
            raise ValueError("coupling figures must be positive")


def u_trap(current: float, bias_field: float) -> TrapGeometry:
    """Trap height and gradient for a U-wire current and bias field (SI)."""
    if current <= 0 or bias_field <= 0:
        raise ValueError("current and bias_field must be > 0")
    height = MU0 / (2 * math.pi) * current / bias_field
    gradient = bias_field / height
    return TrapGeometry(current, bias_field, height, gradient)


def coupling_figures(g0: float, kappa: float, gamma_perp: float) -> CouplingFigures:
    """Saturation photon number and critical atom number from the three rates."""
    if g0 <= 0:
        raise ValueError("g0 must be > 0")
    return CouplingFigures(
        m0=gamma_perp ** 2 / (2 * g0 ** 2),
        n0=2 * gamma_perp * kappa / g0 ** 2,
    )


def thermal_tuning(delta_t: float,
                   coefficient_hz_per_k: float = THERMAL_TUNING_HZ_PER_K) -> float:
    """Cavity frequency shift in Hz for a temperature change in kelvin."""
    return coefficient_hz_per_k * delta_t
