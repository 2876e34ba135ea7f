"""Steady-state cavity QED simulations for single-atom detection with a
photonic-bandgap cavity, plus atom-chip design calculators."""

__version__ = "0.1.0"

from .hilbert import (DensityMatrix, HilbertDims, OperatorRep, annihilation_op,
                      atom_lowering_op, expectation, partial_trace_atom)
from .lindblad import SystemParams, SuperoperatorRep, hamiltonian, liouvillian
from .steady import (ResourceCap, SingularSystem, TruncationInsufficient,
                     auto_truncate, solve_auto, steady_state)

__all__ = [
    "DensityMatrix", "HilbertDims", "OperatorRep", "SystemParams",
    "SuperoperatorRep", "annihilation_op", "atom_lowering_op", "expectation",
    "partial_trace_atom", "hamiltonian", "liouvillian", "steady_state",
    "solve_auto", "auto_truncate", "SingularSystem", "TruncationInsufficient",
    "ResourceCap",
]
