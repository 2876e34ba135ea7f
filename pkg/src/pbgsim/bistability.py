"""Semiclassical optical-bistability state equation and branch enumeration.

The input-output relation is used in its magnitude form,

    x^2 = u [ (1 + 2/(N0 D))^2 + (theta/kappa - (2 Delta/gamma)/(N0 D))^2 ],

with u = y^2 and D = 1 + (Delta/gamma)^2 + u, where x = E/sqrt(m0) is the
input field, y = |alpha|/sqrt(m0) the output field, m0 the saturation photon
number and N0 the critical atom number.  (The printed source places an "i"
inside the square root; the standard dispersive absolute-square form is used
here, and its empty-cavity limit reproduces the Lorentzian cavity response.)
gamma is identified with gamma_perp of the master equation.

Multiplying through by (N0 D)^2 gives a cubic in u, solved in closed form so
the root count is exact; each root gets one Newton polish.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .chipcalc import coupling_figures
from .lindblad import SystemParams

RESIDUAL_TOL = 1e-10


@dataclass(frozen=True)
class BistabilityBranch:
    x: float
    y: float
    n_photons: float       # m0 y^2
    stable: bool

    def __post_init__(self):
        if self.y < 0 or self.n_photons < 0:
            raise ValueError("output field and photon number must be >= 0")


@dataclass(frozen=True)
class BistabilityCurve:
    branches: list[tuple[float, list[BistabilityBranch]]] = field(repr=False)
    bistable_intervals: list[tuple[float, float]]
    n_drive: np.ndarray = field(repr=False)    # m0 x^2, drive axis in photon units


def _state_coefficients(params: SystemParams):
    figs = coupling_figures(params.g0, params.kappa, params.gamma_perp)
    dg = params.delta / params.gamma_perp
    t = params.theta / params.kappa
    s = 2.0 * params.delta / params.gamma_perp
    d0 = 1.0 + dg ** 2
    return figs.m0, figs.n0, t, s, d0


def _cubic_coeffs(x: float, n0: float, t: float, s: float, d0: float):
    """Coefficients (c3, c2, c1, c0) of the state equation as a cubic in u."""
    a = n0 * d0
    b = n0
    c3 = b * b * (1 + t * t)
    c2 = 2 * b * ((a + 2) + t * (t * a - s)) - x * x * b * b
    c1 = (a + 2) ** 2 + (t * a - s) ** 2 - 2 * a * b * x * x
    c0 = -x * x * a * a
    return c3, c2, c1, c0


def _cubic_roots(c3: float, c2: float, c1: float, c0: float) -> list[float]:
    """Real roots of a cubic with c3 > 0, by the depressed-cubic method."""
    p2, p1, p0 = c2 / c3, c1 / c3, c0 / c3
    # t = u + p2/3 removes the quadratic term: t^3 + p t + q = 0
    p = p1 - p2 * p2 / 3.0
    q = 2.0 * p2 ** 3 / 27.0 - p2 * p1 / 3.0 + p0
    shift = -p2 / 3.0
    disc = -4.0 * p ** 3 - 27.0 * q * q
    if disc > 0.0:
        # three real roots; trigonometric form
        m = 2.0 * math.sqrt(-p / 3.0)
        phi = math.acos(min(1.0, max(-1.0, 3.0 * q / (p * m)))) / 3.0
        roots = [m * math.cos(phi - 2.0 * math.pi * k / 3.0) + shift
                 for k in range(3)]
    else:
        # one real root; Cardano with stable branch
        r = math.sqrt(max(q * q / 4.0 + p ** 3 / 27.0, 0.0))
        w = -q / 2.0 + math.copysign(r, -q)
        cw = math.copysign(abs(w) ** (1.0 / 3.0), w) if w != 0.0 else 0.0
        roots = [(cw - p / (3.0 * cw) if cw != 0.0 else 0.0) + shift]
    return roots


def _rhs(u: float, n0: float, t: float, s: float, d0: float) -> float:
    """x^2 as a function of u from the magnitude state equation."""
    w = n0 * (d0 + u)
    return u * ((1.0 + 2.0 / w) ** 2 + (t - s / w) ** 2)


def _rhs_derivative(u: float, n0: float, t: float, s: float, d0: float) -> float:
    w = n0 * (d0 + u)
    absorptive = 1.0 + 2.0 / w
    dispersive = t - s / w
    d_abs = -2.0 * n0 / w ** 2
    d_disp = s * n0 / w ** 2
    return (absorptive ** 2 + dispersive ** 2
            + 2.0 * u * (absorptive * d_abs + dispersive * d_disp))


def ob_roots(x: float, params: SystemParams) -> list[BistabilityBranch]:
    """All non-negative output branches of the state equation at input x."""
    if x < 0:
        raise ValueError("input field x must be >= 0")
    m0, n0, t, s, d0 = _state_coefficients(params)
    if n0 <= 0:
        raise ValueError("state equation needs N0 > 0 (finite coupling)")
    if x == 0.0:
        return [BistabilityBranch(0.0, 0.0, 0.0, stable=True)]
    raw = _cubic_roots(*_cubic_coeffs(x, n0, t, s, d0))
    x2 = x * x
    out = []
    for u in raw:
        if u < -1e-12 * max(1.0, abs(u)):
            continue
        u = max(u, 0.0)
        # one Newton polish on the magnitude equation
        for _ in range(2):
            f = _rhs(u, n0, t, s, d0) - x2
            df = _rhs_derivative(u, n0, t, s, d0)
            if df != 0.0:
                step = f / df
                if abs(step) < 0.5 * max(u, 1.0):
                    u = max(u - step, 0.0)
        resid = abs(_rhs(u, n0, t, s, d0) - x2) / max(1.0, x2)
        if resid > RESIDUAL_TOL:
            continue
        stable = _rhs_derivative(u, n0, t, s, d0) > 0.0
        out.append(BistabilityBranch(x, math.sqrt(u), m0 * u, stable))
    out.sort(key=lambda b: b.y)
    # de-duplicate near-coincident roots at fold boundaries
    dedup: list[BistabilityBranch] = []
    for b in out:
        if dedup and abs(b.y - dedup[-1].y) <= 1e-9 * max(1.0, b.y):
            continue
        dedup.append(b)
    return dedup


def ob_curve(x_values, params: SystemParams) -> BistabilityCurve:
    """Branch sets along an ascending x grid, with multivalued x intervals."""
    xs = [float(x) for x in x_values]
    if xs != sorted(xs):
        raise ValueError("x_values must be sorted ascending")
    m0, _, _, _, _ = _state_coefficients(params)
    branches = [(float(x), ob_roots(float(x), params)) for x in xs]
    intervals: list[tuple[float, float]] = []
    start = None
    prev_x = None
    for x, roots in branches:
        if len(roots) > 1:
            if start is None:
                start = x
            prev_x = x
        elif start is not None:
            intervals.append((start, prev_x))
            start = None
    if start is not None:
        intervals.append((start, prev_x))
    n_drive = np.array([m0 * x * x for x in xs])
    return BistabilityCurve(branches=branches, bistable_intervals=intervals,
                            n_drive=n_drive)
