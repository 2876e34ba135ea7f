"""Steady-state solver for L vec(rho) = 0 with unit trace.

Two interchangeable engines sit behind the same contract (residual below
RESIDUAL_TOL relative to the inf-norm of the Liouvillian, unit trace,
Hermitian, deterministic):

  - direct: replace one row of the sparse Liouvillian with the vectorized
    trace constraint and solve the square system by sparse LU.
  - displaced: transform to the frame displaced by the empty-cavity coherent
    amplitude alpha = E/(kappa + i theta), where the field drive cancels
    exactly and only the atom-induced excitation remains.  The residual
    excitation occupies few Fock levels, so the direct solve in that frame
    stays small even at large drive; the solution is displaced back and
    verified against the full bare-basis Liouvillian.

The displaced engine is what makes drives of ~80 intracavity photons
tractable on a small machine; its output is always validated by the bare
residual check, so both engines are held to the identical contract.
"""

from __future__ import annotations

import logging
import math

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .hilbert import DensityMatrix, HilbertDims, OperatorRep, displacement_field
from .lindblad import SystemParams, liouvillian

log = logging.getLogger(__name__)

RESIDUAL_TOL = 1e-9
DEFAULT_TAIL_TOL = 1e-8
DEFAULT_NMAX_CEILING = 400

# largest joint dimension for which the bare sparse LU is preferred outright,
# and the larger one up to which it remains a viable fallback
_DIRECT_DIM_LIMIT = 260
_DIRECT_FALLBACK_DIM = 420

# displaced-frame internal truncation control
_DISPLACED_START = 16
_DISPLACED_TAIL = 1e-13
_DISPLACED_CAP = 320


class SteadyStateError(RuntimeError):
    pass


class SingularSystem(SteadyStateError):
    """No unique trace-1 null vector (degenerate parameters)."""


class TruncationInsufficient(SteadyStateError):
    """Top Fock levels carry more population than the tail threshold allows."""


class ResourceCap(SteadyStateError):
    """Automatic truncation would exceed the configured n_max ceiling."""


def _solve_trace_row(lv: sp.spmatrix, d: int) -> np.ndarray:
    """Solve L vec(rho) = 0 with Tr rho = 1 via trace-row replacement."""
    n2 = d * d
    lv = lv.tocsr(copy=True)
    # zero row 0, then put the vectorized trace there
    start, end = lv.indptr[0], lv.indptr[1]
    lv.data[start:end] = 0.0
    trace_row = sp.csr_matrix(
        (np.ones(d), (np.zeros(d, dtype=int), np.arange(d) * (d + 1))), shape=(1, n2)
    )
    lv = lv + sp.vstack(
        [trace_row, sp.csr_matrix((n2 - 1, n2), dtype=complex)]
    ).tocsr()
    rhs = np.zeros(n2, dtype=complex)
    rhs[0] = 1.0
    try:
        lu = spla.splu(lv.tocsc())
        x = lu.solve(rhs)
    except RuntimeError as exc:   # singular factorization
        raise SingularSystem(f"sparse LU failed: {exc}") from exc
    if not np.all(np.isfinite(x)):
        raise SingularSystem("non-finite solution from trace-row solve")
    return x.reshape(d, d, order="F")


def _field_populations(rho: np.ndarray, dims: HilbertDims) -> np.ndarray:
    pops = np.real(np.diag(rho))
    if dims.atom_dim == 1:
        return pops
    return pops.reshape(dims.field_dim, 2).sum(axis=1)


def _displaced_frame_solution(params: SystemParams) -> tuple[np.ndarray, int]:
    """Steady state in the displaced frame, with adaptive internal truncation.

    Returns (rho_prime, n_max_displaced); rho_prime lives on the joint space
    of that internal truncation.
    """
    alpha = params.drive_E / (params.kappa + 1j * params.theta)
    nd = _DISPLACED_START
    while True:
        ddims = HilbertDims(nd)
        lv = liouvillian(params, ddims, extra_atom_drive=alpha, drive_E=0.0)
        rho_p = _solve_trace_row(lv.entries, ddims.total_dim)
        pops = _field_populations(rho_p, ddims)
        if pops[-2:].sum() < _DISPLACED_TAIL:
            return rho_p, nd
        if nd >= _DISPLACED_CAP:
            raise TruncationInsufficient(
                f"displaced-frame truncation did not converge below {_DISPLACED_CAP}"
            )
        nd = int(nd * 1.5) + 1


def _finalize(rho: np.ndarray, params: SystemParams, dims: HilbertDims,
              tail_tol: float | None) -> DensityMatrix:
    """Hermitize, normalize, clip, then verify residual and tail."""
    rho = 0.5 * (rho + rho.conj().T)
    tr = np.trace(rho).real
    if not math.isfinite(tr) or abs(tr) < 1e-6:
        raise SingularSystem(f"solution trace {tr} is degenerate")
    rho = rho / tr

    w = np.linalg.eigvalsh(rho)
    if w[0] < -1e-8:
        raise TruncationInsufficient(
            f"steady state has eigenvalue {w[0]:.3e} below -1e-8 "
            "(truncation or conditioning problem)"
        )
    if w[0] < 0.0:
        vals, vecs = np.linalg.eigh(rho)
        clip = float(-vals[vals < 0].sum())
        vals = np.clip(vals, 0.0, None)
        rho = (vecs * vals) @ vecs.conj().T
        rho = rho / np.trace(rho).real
        log.debug("clipped negative eigenvalues, total magnitude %.3e", clip)

    lv = liouvillian(params, dims)
    resid = float(np.max(np.abs(lv.apply(rho))))
    rel = resid / lv.norm_inf()
    if rel > RESIDUAL_TOL:
        raise SteadyStateError(
            f"steady-state residual {rel:.3e} exceeds {RESIDUAL_TOL}"
        )

    if tail_tol is not None:
        pops = _field_populations(rho, dims)
        tail = float(pops[-2:].sum())
        if tail > tail_tol:
            raise TruncationInsufficient(
                f"top-two Fock-level population {tail:.3e} exceeds {tail_tol}"
            )
    return DensityMatrix(OperatorRep(dims, rho))


def steady_state(params: SystemParams, dims: HilbertDims,
                 tail_tol: float | None = DEFAULT_TAIL_TOL,
                 method: str = "auto") -> DensityMatrix:
    """Steady state of the master equation on the given bare truncation.

    method is "auto", "direct", or "displaced".  tail_tol = None skips the
    truncation check (used internally by auto_truncate).
    """
    if method not in ("auto", "direct", "displaced"):
        raise ValueError(f"unknown method {method!r}")
    fallback = False
    if method == "auto":
        small = dims.total_dim <= _DIRECT_DIM_LIMIT
        displaceable = params.kappa > 0.0 and params.drive_E != 0.0
        method = "direct" if (small or not displaceable) else "displaced"
        # displacing back into a barely adequate bare truncation can distort
        # the state near the Fock boundary; a native direct solve does not
        fallback = method == "displaced" and dims.total_dim <= _DIRECT_FALLBACK_DIM

    if method == "direct":
        lv = liouvillian(params, dims)
        rho = _solve_trace_row(lv.entries, dims.total_dim)
        return _finalize(rho, params, dims, tail_tol)

    if params.kappa <= 0.0:
        raise ValueError("displaced engine requires kappa > 0")
    alpha = params.drive_E / (params.kappa + 1j * params.theta)
    rho_p, nd = _displaced_frame_solution(params)
    if nd + 1 > dims.field_dim:
        raise TruncationInsufficient(
            f"displaced-frame occupation needs n_max >= {nd}, got {dims.n_max}"
        )
    disp = displacement_field(dims.n_max, alpha)
    disp_joint = np.kron(disp, np.eye(2, dtype=complex))
    embedded = np.zeros((dims.total_dim, dims.total_dim), dtype=complex)
    k = rho_p.shape[0]
    embedded[:k, :k] = rho_p
    rho = disp_joint @ embedded @ disp_joint.conj().T
    try:
        return _finalize(rho, params, dims, tail_tol)
    except SteadyStateError as exc:
        # a tail failure would only repeat in the direct engine
        if not fallback or isinstance(exc, TruncationInsufficient):
            raise
        return steady_state(params, dims, tail_tol, method="direct")


def solve_auto(params: SystemParams,
               tail_tol: float = DEFAULT_TAIL_TOL,
               nmax_cap: int = DEFAULT_NMAX_CEILING) -> DensityMatrix:
    """Steady state with an internally chosen bare truncation.

    Sizes the bare space from the empty-cavity amplitude plus the adaptive
    displaced-frame occupation, so it stays accurate (tail-checked) without a
    caller-supplied n_max.
    """
    if params.drive_E == 0.0:
        return steady_state(params, HilbertDims(max(2, _DISPLACED_START)), tail_tol)
    if params.kappa <= 0.0:
        raise ValueError("solve_auto requires kappa > 0; pass explicit dims instead")
    alpha = abs(params.drive_E / (params.kappa + 1j * params.theta))
    rho_p, nd = _displaced_frame_solution(params)
    n_max = int(math.ceil(alpha ** 2 + 10 * alpha + nd + 10))
    n_max = max(n_max, 2)
    if n_max > nmax_cap:
        raise ResourceCap(f"required n_max {n_max} exceeds cap {nmax_cap}")
    dims = HilbertDims(n_max)
    disp = displacement_field(dims.n_max, params.drive_E / (params.kappa + 1j * params.theta))
    disp_joint = np.kron(disp, np.eye(2, dtype=complex))
    embedded = np.zeros((dims.total_dim, dims.total_dim), dtype=complex)
    k = rho_p.shape[0]
    embedded[:k, :k] = rho_p
    rho = disp_joint @ embedded @ disp_joint.conj().T
    return _finalize(rho, params, dims, tail_tol)


def auto_truncate(params: SystemParams,
                  tail_tol: float = DEFAULT_TAIL_TOL,
                  ceiling: int = DEFAULT_NMAX_CEILING) -> HilbertDims:
    """Smallest n_max whose top-two Fock populations stay below tail_tol.

    Starts from n_max = ceil(4 n_drive + 20) and grows by x1.5 until the
    steady-state tail fits, then reads the smallest adequate n_max off the
    converged Fock populations.
    """
    if tail_tol <= 0:
        raise ValueError("tail_tol must be > 0")
    n_drive = params.n_drive if params.kappa > 0 else 0.0
    if params.drive_E == 0.0:
        return HilbertDims(1)
    guess = max(int(math.ceil(4 * n_drive + 20)), 2)
    while True:
        if guess > ceiling:
            raise ResourceCap(f"auto truncation exceeded ceiling {ceiling}")
        try:
            rho = steady_state(params, HilbertDims(guess), tail_tol=tail_tol)
        except TruncationInsufficient:
            guess = int(guess * 1.5) + 1
            continue
        break
    pops = _field_populations(rho.entries, rho.dims)
    above = np.concatenate([np.cumsum(pops[::-1])[::-1][1:], [0.0]])
    for m in range(1, guess + 1):
        if pops[m - 1] + pops[m] + above[m] < tail_tol:
            return HilbertDims(m)
    return HilbertDims(guess)
