"""Detection statistics and mechanical observables of the steady state.

Conventions follow the master-equation normalization of this package:
the expected detector count over an integration time dt is kappa dt <a+a>,
with variance kappa dt (<(a+a)^2> - <a+a>^2).  Note that with the dissipator
prefactor used here the photon-number decay rate is 2 kappa, so the count
formula under-reads the physical outflow by a factor of 2; it is kept in this
form deliberately so that counts match the normalization the curves in the
reference figures use.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .constants import HBAR, OMEGA_CS_D2
from .hilbert import (DensityMatrix, OperatorRep, annihilation_op,
                      atom_lowering_op, expectation, number_op)


class GridTooSmall(ValueError):
    pass


@dataclass(frozen=True)
class CountStatistics:
    mean_counts: float
    variance: float

    def __post_init__(self):
        if self.mean_counts < 0 or self.variance < -1e-10:
            raise ValueError("count statistics must be non-negative")

    @property
    def fano(self) -> float:
        if self.mean_counts <= 0:
            raise ValueError("Fano factor undefined for zero mean")
        return self.variance / self.mean_counts


@dataclass(frozen=True)
class QFunctionGrid:
    """Husimi Q sampled on a square phase-space grid."""

    alpha_re: np.ndarray = field(repr=False)
    alpha_im: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)     # shape (len(alpha_im), len(alpha_re))
    cell_area: float

    def __post_init__(self):
        if self.values.shape != (len(self.alpha_im), len(self.alpha_re)):
            raise ValueError("Q grid shape mismatch")
        if self.values.min() < -1e-12:
            raise ValueError(f"Q function negative beyond tolerance: {self.values.min():.3e}")

    def normalization(self) -> float:
        """Riemann sum of Q over the grid (should be ~1 for a covering grid)."""
        return float(self.values.sum() * self.cell_area)

    def local_maxima(self, floor_frac: float = 0.05) -> list[tuple[float, float, float]]:
        """Interior grid points >= all 8 neighbours and above floor_frac * max.

        Returns (alpha_re, alpha_im, Q) triples.
        """
        q = self.values
        floor = floor_frac * q.max()
        c = q[1:-1, 1:-1]
        mask = c > floor
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                if dx == 0 and dy == 0:
                    continue
                mask &= c >= q[1 + dy:q.shape[0] - 1 + dy, 1 + dx:q.shape[1] - 1 + dx]
        iy, ix = np.nonzero(mask)
        return [(float(self.alpha_re[x + 1]), float(self.alpha_im[y + 1]),
                 float(c[y, x])) for y, x in zip(iy, ix)]


def mean_photon_number(rho: DensityMatrix) -> float:
    return expectation(rho, number_op(rho.dims)).real


def photon_number_variance(rho: DensityMatrix) -> float:
    n = number_op(rho.dims)
    n2 = expectation(rho, n @ n).real
    nbar = expectation(rho, n).real
    return n2 - nbar ** 2


def photon_count(rho: DensityMatrix, kappa: float, dt: float) -> float:
    """Expected counts kappa dt <a+a> over one detector integration time."""
    if dt <= 0:
        raise ValueError("dt must be > 0")
    return kappa * dt * mean_photon_number(rho)


def count_variance(rho: DensityMatrix, kappa: float, dt: float) -> float:
    """Count variance kappa dt (<a+a a+a> - <a+a>^2)."""
    if dt <= 0:
        raise ValueError("dt must be > 0")
    var = kappa * dt * photon_number_variance(rho)
    return max(var, 0.0)


def count_statistics(rho: DensityMatrix, kappa: float, dt: float) -> CountStatistics:
    return CountStatistics(photon_count(rho, kappa, dt),
                           count_variance(rho, kappa, dt))


def heterodyne_amplitude(rho: DensityMatrix) -> complex:
    """<a>, the quantity a heterodyne detector is sensitive to."""
    return expectation(rho, annihilation_op(rho.dims))


def husimi_q(rho_field: DensityMatrix, radius: float | None = None,
             n_points: int = 161) -> QFunctionGrid:
    """Q(alpha) = <alpha| rho_f |alpha> / pi on a square grid.

    rho_field must be field-only (see partial_trace_atom).  The default grid
    radius is 4 sqrt(n_max); a radius below 3 sqrt(<n>+1) raises GridTooSmall.
    """
    dims = rho_field.dims
    if dims.atom_dim != 1:
        raise ValueError("husimi_q expects a field-only state; trace out the atom first")
    nbar = mean_photon_number(rho_field)
    if radius is None:
        radius = 4.0 * np.sqrt(dims.n_max)
    if radius < 3.0 * np.sqrt(nbar + 1.0):
        raise GridTooSmall(
            f"grid radius {radius:.2f} below 3 sqrt(<n>+1) = {3*np.sqrt(nbar+1):.2f}"
        )
    axis = np.linspace(-radius, radius, n_points)
    re, im = np.meshgrid(axis, axis)
    alphas = (re + 1j * im).ravel()
    nf = dims.field_dim
    # coherent-state overlap rows by stable upward recursion
    coh = np.empty((alphas.size, nf), dtype=complex)
    coh[:, 0] = np.exp(-0.5 * np.abs(alphas) ** 2)
    for n in range(1, nf):
        coh[:, n] = coh[:, n - 1] * alphas / np.sqrt(n)
    overlap = np.einsum("ij,jk,ik->i", coh.conj(), rho_field.entries, coh,
                        optimize=True)
    q = np.real(overlap).reshape(n_points, n_points) / np.pi
    cell = (axis[1] - axis[0]) ** 2
    return QFunctionGrid(alpha_re=axis, alpha_im=axis, values=q, cell_area=cell)


def field_atom_coherence(rho: DensityMatrix) -> complex:
    """<a+ s - a s+>, the (purely imaginary) interference term in the force."""
    a = annihilation_op(rho.dims)
    s = atom_lowering_op(rho.dims)
    return expectation(rho, OperatorRep(rho.dims,
                                        a.dag().entries @ s.entries
                                        - a.entries @ s.dag().entries))


def dipole_force(rho: DensityMatrix, g_gradient: float) -> float:
    """Force -i hbar grad(g) <a+ s - a s+> in newtons.

    g_gradient is the spatial gradient of the coupling in rad/s per meter.
    The expectation is purely imaginary; a nonzero real residue indicates a
    numerical problem and trips an assertion.
    """
    ex = field_atom_coherence(rho)
    f = -1j * HBAR * g_gradient * ex
    if abs(f) > 0 and abs(f.imag) > 1e-8 * abs(f):
        raise AssertionError(f"force has imaginary residue {f.imag:.3e} of {abs(f):.3e}")
    return float(f.real)


def output_power(rho: DensityMatrix, kappa: float,
                 omega_c: float = OMEGA_CS_D2) -> float:
    """Optical power leaving the cavity, 2 kappa <a+a> hbar omega_c (watts).

    Uses the physical energy-decay rate 2 kappa of this package's dissipator
    convention; informational helper, not a detection-statistics quantity.
    """
    return 2.0 * kappa * mean_photon_number(rho) * HBAR * omega_c
