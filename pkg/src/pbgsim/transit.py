"""Quasi-static atom-transit simulation and kinematic kick estimates.

The atom crosses the cavity-hole axis at constant velocity v; the coupling it
sees is g(t) = g0 psi(v t) with psi a Gaussian mode profile.  For each
detector bin the joint steady state is re-solved at the instantaneous
coupling (quasi-static approximation) and the expected counts and count
variance are evaluated; per-bin shot noise is one seeded Gaussian draw of
standard deviation sqrt(variance).  Negative sampled values are retained:
the sampled trace is a statistic, not a physical counter reading.

The "width ~225 nm" of the mode profile is interpreted as the FWHM of psi,
giving sigma = 225 nm / (2 sqrt(2 ln 2)) ~ 95.5 nm; the interpretation is a
configurable knob on ModeProfile.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .constants import HBAR, KB
from .lindblad import SystemParams
from .observables import count_variance, photon_count
from .steady import SteadyStateError, solve_auto

DEFAULT_MODE_FWHM = 225e-9
_FWHM_TO_SIGMA = 1.0 / (2.0 * math.sqrt(2.0 * math.log(2.0)))


@dataclass(frozen=True)
class ModeProfile:
    """Gaussian coupling profile along the hole axis; width is the FWHM."""

    width: float = DEFAULT_MODE_FWHM
    center: float = 0.0

    def __post_init__(self):
        if self.width <= 0:
            raise ValueError("width must be > 0")

    @property
    def sigma(self) -> float:
        return self.width * _FWHM_TO_SIGMA


def mode_psi(z, profile: ModeProfile):
    """psi(z) = exp(-(z - center)^2 / 2 sigma^2); unity at the center."""
    z = np.asarray(z, dtype=float)
    out = np.exp(-((z - profile.center) ** 2) / (2.0 * profile.sigma ** 2))
    return float(out) if out.ndim == 0 else out


def mode_psi_gradient(z, profile: ModeProfile):
    """d psi / dz."""
    z = np.asarray(z, dtype=float)
    out = -(z - profile.center) / profile.sigma ** 2 * np.exp(
        -((z - profile.center) ** 2) / (2.0 * profile.sigma ** 2))
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class TransitTrace:
    times: np.ndarray = field(repr=False)      # s, bin centers
    expected: np.ndarray = field(repr=False)   # counts per bin
    sigma: np.ndarray = field(repr=False)      # counts per bin
    sampled: np.ndarray = field(repr=False)    # expected + seeded Gaussian noise
    coupling: np.ndarray = field(repr=False)   # g(t)/g0 per bin
    ok: np.ndarray = field(repr=False)         # per-bin solver success flags
    seed: int = 0

    def __post_init__(self):
        n = len(self.times)
        for arr in (self.expected, self.sigma, self.sampled, self.coupling, self.ok):
            if len(arr) != n:
                raise ValueError("trace arrays must have equal length")
        good = self.ok.astype(bool)
        if np.any(self.expected[good] < 0) or np.any(self.sigma[good] < 0):
            raise ValueError("expected counts and sigma must be >= 0")

    @property
    def n_failed(self) -> int:
        return int((~self.ok.astype(bool)).sum())


def transit_trace(params: SystemParams, v: float, bin_dt: float, window: float,
                  profile: ModeProfile | None = None, seed: int = 0,
                  peak_coupling: float = 1.0) -> TransitTrace:
    """Time-binned photon-count record for one atom transit.

    Bins are centered on t in (-window/2, window/2) with spacing bin_dt; the
    atom is at z = v t.  peak_coupling scales the maximum of g(t)/g0 below 1
    to model atoms that miss the field maximum.  Failed bins are flagged in
    `ok` and carry NaN statistics; the noise stream is drawn sequentially
    from the seed after all solves, so output is reproducible per seed
    independent of solve order.
    """
    if v <= 0 or bin_dt <= 0:
        raise ValueError("v and bin_dt must be > 0")
    if not 0.0 < peak_coupling <= 1.0:
        raise ValueError("peak_coupling must be in (0, 1]")
    profile = profile or ModeProfile()
    if window * v < 2.0 * profile.sigma:
        raise ValueError("window must cover at least +-1 sigma of the mode profile")
    n_bins = int(round(window / bin_dt))
    times = (np.arange(n_bins) - (n_bins - 1) / 2.0) * bin_dt
    coupling = peak_coupling * mode_psi(v * times, profile)
    expected = np.full(n_bins, np.nan)
    sig = np.full(n_bins, np.nan)
    ok = np.zeros(n_bins, dtype=bool)
    for i, c in enumerate(coupling):
        try:
            rho = solve_auto(params.with_psi(float(c)))
            expected[i] = photon_count(rho, params.kappa, bin_dt)
            sig[i] = math.sqrt(count_variance(rho, params.kappa, bin_dt))
            ok[i] = True
        except SteadyStateError:
            pass
    rng = np.random.default_rng(seed)
    noise = rng.standard_normal(n_bins)
    sampled = expected + noise * sig
    return TransitTrace(times=times, expected=expected, sigma=sig,
                        sampled=sampled, coupling=coupling, ok=ok, seed=seed)


def velocity_kick(f_max: float, dz: float, mass: float) -> float:
    """Velocity change sqrt(|f_max| dz / mass) accumulated over a distance dz."""
    if f_max < 0 or dz < 0 or mass <= 0:
        raise ValueError("f_max, dz must be >= 0 and mass > 0")
    return math.sqrt(f_max * dz / mass)


def simple_kick(g0: float, mass: float) -> float:
    """Velocity scale of the coupling energy, sqrt(2 hbar g0 / mass)."""
    if g0 < 0 or mass <= 0:
        raise ValueError("g0 must be >= 0 and mass > 0")
    return math.sqrt(2.0 * HBAR * g0 / mass)


def thermal_velocity(temperature: float, mass: float) -> float:
    """One-dimensional rms velocity sqrt(kB T / mass)."""
    if temperature < 0 or mass <= 0:
        raise ValueError("temperature must be >= 0 and mass > 0")
    return math.sqrt(KB * temperature / mass)
