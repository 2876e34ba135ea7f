"""Physical constants (SI) and unit conversions used throughout the package."""

import math

HBAR = 1.054571817e-34      # J s
KB = 1.380649e-23           # J/K
MU0 = 4e-7 * math.pi        # T m/A
C0 = 299792458.0            # m/s

M_CS = 2.2069e-25           # kg, cesium-133
LAMBDA_CS_D2 = 852.34727582e-9   # m, cesium D2 line
OMEGA_CS_D2 = 2 * math.pi * C0 / LAMBDA_CS_D2   # rad/s

GAUSS = 1e-4                # T
GAUSS_PER_CM = 1e-2         # T/m

TWO_PI = 2 * math.pi


def ghz_to_angular(nu_ghz: float) -> float:
    """Convert a frequency given as nu/2pi in GHz to an angular frequency in rad/s."""
    return TWO_PI * 1e9 * nu_ghz


def angular_to_ghz(omega: float) -> float:
    return omega / (TWO_PI * 1e9)
