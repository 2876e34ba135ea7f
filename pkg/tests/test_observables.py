import numpy as np
import pytest

from pbgsim.hilbert import (DensityMatrix, HilbertDims, OperatorRep,
                            coherent_field_vector, partial_trace_atom)
from pbgsim.observables import (CountStatistics, GridTooSmall, count_statistics,
                                count_variance, dipole_force,
                                heterodyne_amplitude, husimi_q,
                                mean_photon_number, output_power,
                                photon_count, photon_number_variance)
from pbgsim.steady import solve_auto
from tests.conftest import make_params


def coherent_density(n_max: int, alpha: complex) -> DensityMatrix:
    c = coherent_field_vector(n_max, alpha)
    c = c / np.linalg.norm(c)
    return DensityMatrix(OperatorRep(HilbertDims(n_max, atom_dim=1),
                                     np.outer(c, c.conj())))


def vacuum_density(n_max: int) -> DensityMatrix:
    m = np.zeros((n_max + 1, n_max + 1), dtype=complex)
    m[0, 0] = 1.0
    return DensityMatrix(OperatorRep(HilbertDims(n_max, atom_dim=1), m))


def test_count_statistics_fano():
    assert CountStatistics(4.0, 2.0).fano == 0.5
    with pytest.raises(ValueError):
        CountStatistics(0.0, 0.0).fano
    with pytest.raises(ValueError):
        CountStatistics(-1.0, 0.0)


def test_coherent_state_is_poissonian():
    rho = coherent_density(60, 1.7 + 0.3j)
    nbar = abs(1.7 + 0.3j) ** 2
    assert mean_photon_number(rho) == pytest.approx(nbar, rel=1e-9)
    assert photon_number_variance(rho) == pytest.approx(nbar, rel=1e-8)
    st = count_statistics(rho, kappa=2.0, dt=3.0)
    assert st.fano == pytest.approx(1.0, abs=1e-8)
    assert st.mean_counts == pytest.approx(6.0 * nbar, rel=1e-9)


def test_count_scaling_linear_in_dt():
    rho = coherent_density(40, 1.0)
    assert photon_count(rho, 2.0, 4.0) == pytest.approx(
        4.0 * photon_count(rho, 2.0, 1.0))
    assert count_variance(rho, 2.0, 4.0) == pytest.approx(
        4.0 * count_variance(rho, 2.0, 1.0))
    with pytest.raises(ValueError):
        photon_count(rho, 2.0, 0.0)


def test_heterodyne_amplitude_of_coherent_state():
    alpha = 0.9 - 0.4j
    rho = coherent_density(50, alpha)
    assert heterodyne_amplitude(rho) == pytest.approx(alpha, abs=1e-10)


def test_husimi_vacuum_closed_form():
    grid = husimi_q(vacuum_density(10), radius=4.0, n_points=81)
    re, im = np.meshgrid(grid.alpha_re, grid.alpha_im)
    want = np.exp(-(re ** 2 + im ** 2)) / np.pi
    assert np.max(np.abs(grid.values - want)) < 1e-10
    assert grid.normalization() == pytest.approx(1.0, abs=1e-4)


def test_husimi_coherent_peak_location():
    alpha = 1.5 + 1.0j
    grid = husimi_q(coherent_density(60, alpha), radius=7.0, n_points=121)
    peaks = grid.local_maxima()
    assert len(peaks) == 1
    assert peaks[0][0] == pytest.approx(alpha.real, abs=0.1)
    assert peaks[0][1] == pytest.approx(alpha.imag, abs=0.1)
    assert grid.normalization() == pytest.approx(1.0, abs=1e-3)


def test_husimi_grid_too_small():
    with pytest.raises(GridTooSmall):
        husimi_q(coherent_density(60, 3.0), radius=2.0)


def test_husimi_rejects_joint_state():
    p = make_params(n_drive=1.0)
    rho = solve_auto(p)
    with pytest.raises(ValueError, match="field-only"):
        husimi_q(rho)
    husimi_q(partial_trace_atom(rho), radius=8.0, n_points=41)   # ok


def test_local_maxima_two_bumps():
    axis = np.linspace(-4, 4, 81)
    re, im = np.meshgrid(axis, axis)
    q = np.exp(-((re - 2) ** 2 + im ** 2)) + np.exp(-((re + 2) ** 2 + im ** 2))
    grid_q = q / (q.sum() * (axis[1] - axis[0]) ** 2)
    from pbgsim.observables import QFunctionGrid
    g = QFunctionGrid(alpha_re=axis, alpha_im=axis, values=grid_q,
                      cell_area=(axis[1] - axis[0]) ** 2)
    assert len(g.local_maxima()) == 2


def test_dipole_force_vanishes_undriven():
    p = make_params(n_drive=0.0)
    rho = solve_auto(p)
    assert dipole_force(rho, g_gradient=1e15) == pytest.approx(0.0, abs=1e-25)


def test_dipole_force_finite_when_driven():
    p = make_params(10.0, 10.0, n_drive=2.0).with_psi(0.5)
    rho = solve_auto(p)
    f = dipole_force(rho, g_gradient=1e17)
    assert f != 0.0 and np.isfinite(f)


def test_output_power_scales_with_photon_number():
    r1 = coherent_density(40, 1.0)
    r2 = coherent_density(40, 2.0)
    assert output_power(r2, 1e9) == pytest.approx(4.0 * output_power(r1, 1e9),
                                                  rel=1e-8)
