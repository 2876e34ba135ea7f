import numpy as np
import pytest

from pbgsim.hilbert import HilbertDims
from pbgsim.lindblad import SystemParams, liouvillian
from pbgsim.observables import mean_photon_number
from pbgsim.steady import (RESIDUAL_TOL, ResourceCap, TruncationInsufficient,
                           auto_truncate, solve_auto, steady_state)
from tests.conftest import make_params

# frozen reference photon numbers (independent fine-truncation solves)
GOLDEN_NBAR = {
    ((10.0, 0.0), 10.0): 6.557780,
    ((10.0, 0.0), 80.0): 76.291583,
    ((10.0, 10.0), 80.0): 17.274767,
}


def test_empty_cavity_matches_lorentzian():
    p = make_params(theta_ghz=6.0, n_drive=3.0, g0=0.0)
    rho = steady_state(p, HilbertDims(30), method="direct")
    want = p.drive_E ** 2 / (p.kappa ** 2 + p.theta ** 2)
    assert mean_photon_number(rho) == pytest.approx(want, rel=1e-9)


def test_direct_and_displaced_agree():
    p = make_params(10.0, 0.0, n_drive=4.0)
    dims = HilbertDims(40)
    n_direct = mean_photon_number(steady_state(p, dims, method="direct"))
    n_disp = mean_photon_number(steady_state(p, dims, method="displaced"))
    assert n_disp == pytest.approx(n_direct, rel=1e-9)


@pytest.mark.parametrize("det,nd", sorted(GOLDEN_NBAR))
def test_golden_photon_numbers(det, nd):
    p = make_params(det[0], det[1], n_drive=nd)
    rho = solve_auto(p)
    assert mean_photon_number(rho) == pytest.approx(GOLDEN_NBAR[(det, nd)],
                                                    rel=2e-6)


def test_solution_contract(detunings):
    p = make_params(*detunings, n_drive=5.0)
    rho = solve_auto(p)
    assert np.trace(rho.entries).real == pytest.approx(1.0, abs=1e-10)
    assert rho.check_positive() >= -1e-12
    lv = liouvillian(p, rho.dims)
    resid = np.max(np.abs(lv.apply(rho.entries))) / lv.norm_inf()
    assert resid < RESIDUAL_TOL


def test_undriven_state_is_ground():
    p = make_params(n_drive=0.0)
    rho = solve_auto(p)
    assert rho.entries[0, 0].real == pytest.approx(1.0, abs=1e-10)
    assert mean_photon_number(rho) == pytest.approx(0.0, abs=1e-10)


def test_tail_check_rejects_small_truncation():
    p = make_params(10.0, 0.0, n_drive=10.0)
    with pytest.raises(TruncationInsufficient):
        steady_state(p, HilbertDims(6), method="direct")


def test_resource_cap():
    p = make_params(10.0, 0.0, n_drive=80.0)
    with pytest.raises(ResourceCap):
        solve_auto(p, nmax_cap=20)


def test_unknown_method_rejected():
    with pytest.raises(ValueError):
        steady_state(make_params(), HilbertDims(4), method="banana")


def test_auto_truncate_monotone_in_drive():
    p = make_params(10.0, 0.0)
    n_small = auto_truncate(p.with_drive_photons(1.0)).n_max
    n_large = auto_truncate(p.with_drive_photons(20.0)).n_max
    assert n_small < n_large
    assert auto_truncate(p).n_max == 1   # undriven


def test_auto_truncate_dims_solve_cleanly(detunings):
    p = make_params(*detunings, n_drive=5.0)
    dims = auto_truncate(p)
    rho = steady_state(p, dims)   # passes its own tail check
    assert mean_photon_number(rho) > 0
