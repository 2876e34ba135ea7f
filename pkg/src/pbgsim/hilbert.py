"""Operator algebra on a truncated Fock space tensored with a two-level atom.

Basis conventions (fixed so that matrix layouts are reproducible):
  - field basis |0>, |1>, ..., |n_max>
  - atom basis index 0 = ground, index 1 = excited, so the lowering
    operator on the atom factor is [[0, 1], [0, 0]]
  - joint index = field_index * 2 + atom_index
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class DimensionMismatch(ValueError):
    pass


@dataclass(frozen=True)
class HilbertDims:
    """Truncated joint-space dimensions.

    atom_dim is 2 for the joint atom-field space; reduced field-only states
    carry atom_dim = 1.
    """

    n_max: int
    atom_dim: int = 2

    def __post_init__(self):
        if self.n_max < 1:
            raise ValueError(f"n_max must be >= 1, got {self.n_max}")
        if self.atom_dim not in (1, 2):
            raise ValueError(f"atom_dim must be 1 or 2, got {self.atom_dim}")

    @property
    def field_dim(self) -> int:
        return self.n_max + 1

    @property
    def total_dim(self) -> int:
        return self.atom_dim * (self.n_max + 1)


@dataclass(frozen=True)
class OperatorRep:
    """Dense complex square matrix on the truncated joint space."""

    dims: HilbertDims
    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=complex)
        if m.shape != (self.dims.total_dim, self.dims.total_dim):
            raise DimensionMismatch(
                f"entries shape {m.shape} does not match total_dim {self.dims.total_dim}"
            )
        object.__setattr__(self, "entries", m)

    def dag(self) -> "OperatorRep":
        return OperatorRep(self.dims, self.entries.conj().T)

    def __matmul__(self, other: "OperatorRep") -> "OperatorRep":
        if self.dims != other.dims:
            raise DimensionMismatch("operator dims differ")
        return OperatorRep(self.dims, self.entries @ other.entries)


HERMITICITY_TOL = 1e-10
TRACE_TOL = 1e-8
POSITIVITY_TOL = -1e-8


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, unit-trace, positive-semidefinite state on the joint space."""

    op: OperatorRep

    def __post_init__(self):
        m = self.op.entries
        herm = np.max(np.abs(m - m.conj().T))
        if herm > HERMITICITY_TOL:
            raise ValueError(f"density matrix not Hermitian: max deviation {herm:.3e}")
        tr = np.trace(m)
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValueError(f"density matrix trace {tr} differs from 1")

    @property
    def dims(self) -> HilbertDims:
        return self.op.dims

    @property
    def entries(self) -> np.ndarray:
        return self.op.entries

    def check_positive(self, tol: float = POSITIVITY_TOL) -> float:
        """Return the smallest eigenvalue; raise if it is below tol."""
        w = np.linalg.eigvalsh(self.entries)
        if w[0] < tol:
            raise ValueError(f"density matrix has eigenvalue {w[0]:.3e} below {tol}")
        return float(w[0])


def annihilation_field(n_max: int) -> np.ndarray:
    """Field-only ladder matrix with <n-1|a|n> = sqrt(n)."""
    return np.diag(np.sqrt(np.arange(1, n_max + 1)), 1).astype(complex)


def annihilation_op(dims: HilbertDims) -> OperatorRep:
    """Cavity annihilation operator a (x) I_atom on the joint space."""
    a_f = annihilation_field(dims.n_max)
    if dims.atom_dim == 1:
        return OperatorRep(dims, a_f)
    return OperatorRep(dims, np.kron(a_f, np.eye(2, dtype=complex)))


SIGMA_LOWERING = np.array([[0, 1], [0, 0]], dtype=complex)   # |g><e|, basis (g, e)


def atom_lowering_op(dims: HilbertDims) -> OperatorRep:
    """Atomic lowering operator I_field (x) sigma on the joint space."""
    if dims.atom_dim != 2:
        raise DimensionMismatch("atom lowering needs a joint space with atom_dim 2")
    return OperatorRep(dims, np.kron(np.eye(dims.field_dim, dtype=complex), SIGMA_LOWERING))


def number_op(dims: HilbertDims) -> OperatorRep:
    """Photon number operator a^dag a on the joint (or field-only) space."""
    n_f = np.diag(np.arange(dims.field_dim)).astype(complex)
    if dims.atom_dim == 1:
        return OperatorRep(dims, n_f)
    return OperatorRep(dims, np.kron(n_f, np.eye(2, dtype=complex)))


def expectation(rho: DensityMatrix, op: OperatorRep) -> complex:
    """Tr[rho op]."""
    if rho.dims != op.dims:
        raise DimensionMismatch("state and operator dims differ")
    return complex(np.sum(rho.entries * op.entries.T))


def partial_trace_atom(rho: DensityMatrix) -> DensityMatrix:
    """Trace out the two-level atom, leaving the field-only state."""
    d = rho.dims
    if d.atom_dim != 2:
        raise DimensionMismatch("state is already field-only")
    nf = d.field_dim
    r = rho.entries.reshape(nf, 2, nf, 2)
    rho_f = r[:, 0, :, 0] + r[:, 1, :, 1]
    fdims = HilbertDims(d.n_max, atom_dim=1)
    return DensityMatrix(OperatorRep(fdims, rho_f))


def coherent_field_vector(n_max: int, alpha: complex) -> np.ndarray:
    """Truncated coherent-state amplitudes c_n = e^{-|a|^2/2} a^n / sqrt(n!).

    Computed by upward recursion; not renormalized, so the truncation error
    shows up as a norm deficit.
    """
    c = np.empty(n_max + 1, dtype=complex)
    c[0] = np.exp(-0.5 * abs(alpha) ** 2)
    for n in range(1, n_max + 1):
        c[n] = c[n - 1] * alpha / np.sqrt(n)
    return c


def displacement_field(n_max: int, alpha: complex) -> np.ndarray:
    """Unitary displacement exp(alpha a^dag - alpha* a) on the truncated field space."""
    a = annihilation_field(n_max)
    gen = alpha * a.conj().T - np.conj(alpha) * a
    w, v = np.linalg.eigh(1j * gen)
    return (v * np.exp(-1j * w)) @ v.conj().T
