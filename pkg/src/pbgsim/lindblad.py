"""Hamiltonian and Liouvillian construction for the driven atom-cavity system.

All rates and detunings are angular frequencies (hbar = 1 internally).  The
dissipators are gamma_perp (2 s rho s+ - s+ s rho - rho s+ s) and
kappa (2 a rho a+ - a+ a rho - rho a+ a), which makes kappa the decay rate of
the field amplitude (the photon number decays at 2 kappa).  gamma_perp is the
dipole (half-width) decay rate as quoted for cesium.
"""

from __future__ import annotations

from dataclasses import dataclass, replace, field

import numpy as np
import scipy.sparse as sp

from .constants import ghz_to_angular
from .hilbert import HilbertDims, OperatorRep, annihilation_op, atom_lowering_op


@dataclass(frozen=True)
class SystemParams:
    """Physical parameters of a single steady-state solve.

    g0, kappa, gamma_perp: coupling and decay rates (rad/s)
    delta: atom-laser detuning (rad/s)
    theta: cavity-laser detuning (rad/s)
    drive_E: coherent drive amplitude (rad/s)
    psi: dimensionless mode-amplitude factor in [0, 1] scaling g0
    """

    g0: float
    kappa: float
    gamma_perp: float
    delta: float = 0.0
    theta: float = 0.0
    drive_E: float = 0.0
    psi: float = 1.0

    def __post_init__(self):
        if self.g0 < 0 or self.kappa < 0 or self.gamma_perp < 0:
            raise ValueError("rates g0, kappa, gamma_perp must be >= 0")
        if not 0.0 <= self.psi <= 1.0:
            raise ValueError(f"psi must be in [0, 1], got {self.psi}")

    @classmethod
    def from_ghz(cls, g0=17.0, kappa=4.4, gamma_perp=2.6e-3, delta=10.0,
                 theta=10.0, drive_E=0.0, psi=1.0) -> "SystemParams":
        """Construct from frequencies given as nu/2pi in GHz (paper defaults)."""
        return cls(
            g0=ghz_to_angular(g0),
            kappa=ghz_to_angular(kappa),
            gamma_perp=ghz_to_angular(gamma_perp),
            delta=ghz_to_angular(delta),
            theta=ghz_to_angular(theta),
            drive_E=ghz_to_angular(drive_E),
            psi=psi,
        )

    @property
    def g_eff(self) -> float:
        """Coupling seen by the atom at its current position, g0 * psi."""
        return self.g0 * self.psi

    @property
    def n_drive(self) -> float:
        """Drive strength in empty-resonant-cavity photon units, (E/kappa)^2."""
        if self.kappa == 0.0:
            raise ValueError("n_drive undefined for kappa = 0")
        return (self.drive_E / self.kappa) ** 2

    def with_drive_photons(self, n_drive: float) -> "SystemParams":
        """Set the drive via E = kappa sqrt(n_drive)."""
        if n_drive < 0:
            raise ValueError("n_drive must be >= 0")
        return replace(self, drive_E=self.kappa * np.sqrt(n_drive))

    def with_psi(self, psi: float) -> "SystemParams":
        return replace(self, psi=psi)


@dataclass(frozen=True)
class SuperoperatorRep:
    """Sparse matrix acting on column-stacked density matrices."""

    dims: HilbertDims
    entries: sp.spmatrix = field(repr=False)

    def __post_init__(self):
        n2 = self.dims.total_dim ** 2
        if self.entries.shape != (n2, n2):
            raise ValueError(
                f"superoperator shape {self.entries.shape}, expected {(n2, n2)}"
            )

    def apply(self, rho: np.ndarray) -> np.ndarray:
        """Apply to a density matrix given as a square array."""
        d = self.dims.total_dim
        vec = rho.reshape(-1, order="F")
        return np.asarray(self.entries @ vec).reshape(d, d, order="F")

    def norm_inf(self) -> float:
        return float(np.max(np.abs(self.entries).sum(axis=1)))


def hamiltonian(params: SystemParams, dims: HilbertDims,
                extra_atom_drive: complex = 0.0) -> OperatorRep:
    """Joint-space Hamiltonian (hbar = 1).

    H = delta s+ s + theta a+ a + i E (a+ - a) + i g_eff (a+ s - s+ a).
    extra_atom_drive adds i g_eff (conj(beta) s - beta s+), used internally by
    the displaced-frame solver; it is zero for the physical Hamiltonian.
    """
    a = annihilation_op(dims).entries
    s = atom_lowering_op(dims).entries
    ad, sd = a.conj().T, s.conj().T
    h = (params.delta * (sd @ s)
         + params.theta * (ad @ a)
         + 1j * params.drive_E * (ad - a)
         + 1j * params.g_eff * (ad @ s - sd @ a))
    if extra_atom_drive != 0.0:
        b = extra_atom_drive
        h = h + 1j * params.g_eff * (np.conj(b) * s - b * sd)
    return OperatorRep(dims, h)


def _dissipator(c: sp.spmatrix, rate: float, ident: sp.spmatrix) -> sp.spmatrix:
    """rate * (2 c . c+ - c+c . - . c+c) on column-stacked matrices."""
    cdc = (c.conj().T @ c).tocsr()
    return rate * (2 * sp.kron(c.conj(), c)
                   - sp.kron(ident, cdc)
                   - sp.kron(cdc.T, ident))


def liouvillian(params: SystemParams, dims: HilbertDims,
                extra_atom_drive: complex = 0.0,
                drive_E: float | None = None) -> SuperoperatorRep:
    """Generator L with vec(rho_dot) = L vec(rho) (column stacking).

    drive_E overrides the drive amplitude of params when given (the
    displaced-frame solver sets it to zero).
    """
    if drive_E is not None:
        params = replace(params, drive_E=drive_E)
    h = sp.csr_matrix(hamiltonian(params, dims, extra_atom_drive).entries)
    d = dims.total_dim
    ident = sp.identity(d, format="csr")
    a = sp.csr_matrix(annihilation_op(dims).entries)
    s = sp.csr_matrix(atom_lowering_op(dims).entries)
    lv = -1j * (sp.kron(ident, h) - sp.kron(h.T, ident))
    lv = lv + _dissipator(s, params.gamma_perp, ident)
    lv = lv + _dissipator(a, params.kappa, ident)
    return SuperoperatorRep(dims, lv.tocsr())
