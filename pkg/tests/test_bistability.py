import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pbgsim.bistability import (_rhs, _state_coefficients, ob_curve, ob_roots)
from pbgsim.chipcalc import coupling_figures
from tests.conftest import make_params

# frozen fold boundaries in n_drive units (independent discriminant scan)
GOLDEN_FOLDS = {
    (10.0, 10.0): (0.292489694, 0.475137446),
    (10.0, 0.0): (1.886334728, 2.059616956),
}


def test_zero_input_gives_zero_output():
    roots = ob_roots(0.0, make_params())
    assert len(roots) == 1 and roots[0].y == 0.0 and roots[0].stable


@settings(max_examples=40, deadline=None)
@given(x=st.floats(1e-3, 1e4), det=st.sampled_from(list(GOLDEN_FOLDS)))
def test_roots_satisfy_state_equation(x, det):
    p = make_params(*det)
    _, n0, t, s, d0 = _state_coefficients(p)
    for b in ob_roots(x, p):
        resid = abs(_rhs(b.y ** 2, n0, t, s, d0) - x * x) / max(1.0, x * x)
        assert resid < 1e-10


def test_root_count_around_fold(detunings):
    p = make_params(*detunings)
    figs = coupling_figures(p.g0, p.kappa, p.gamma_perp)
    lo, hi = GOLDEN_FOLDS[detunings]
    x_of = lambda nd: math.sqrt(nd / figs.m0)
    assert len(ob_roots(x_of(0.5 * lo), p)) == 1
    assert len(ob_roots(x_of(0.5 * (lo + hi)), p)) == 3
    assert len(ob_roots(x_of(2.0 * hi), p)) == 1


def test_fold_boundaries_match_frozen(detunings):
    p = make_params(*detunings)
    figs = coupling_figures(p.g0, p.kappa, p.gamma_perp)
    lo, hi = GOLDEN_FOLDS[detunings]
    grid = np.linspace(0.8 * lo, 1.2 * hi, 3000)
    curve = ob_curve(list(np.sqrt(grid / figs.m0)), p)
    assert len(curve.bistable_intervals) == 1
    a, b = curve.bistable_intervals[0]
    assert figs.m0 * a * a == pytest.approx(lo, rel=2e-3)
    assert figs.m0 * b * b == pytest.approx(hi, rel=2e-3)


def test_stability_pattern_in_fold(detunings):
    p = make_params(*detunings)
    figs = coupling_figures(p.g0, p.kappa, p.gamma_perp)
    lo, hi = GOLDEN_FOLDS[detunings]
    roots = ob_roots(math.sqrt(0.5 * (lo + hi) / figs.m0), p)
    assert [b.stable for b in roots] == [True, False, True]
    assert roots[0].n_photons < roots[1].n_photons < roots[2].n_photons


def test_weak_coupling_limit_is_empty_cavity_line():
    # N0 -> infinity: output photon number must equal the bare Lorentzian
    p = make_params(theta_ghz=10.0, g0=1e-6)
    figs = coupling_figures(p.g0, p.kappa, p.gamma_perp)
    for nd in (0.1, 1.0, 10.0):
        roots = ob_roots(math.sqrt(nd / figs.m0), p)
        assert len(roots) == 1
        want = nd * p.kappa ** 2 / (p.kappa ** 2 + p.theta ** 2)
        assert roots[0].n_photons == pytest.approx(want, rel=1e-12)


def test_curve_requires_sorted_axis():
    with pytest.raises(ValueError):
        ob_curve([2.0, 1.0], make_params())


def test_negative_input_rejected():
    with pytest.raises(ValueError):
        ob_roots(-1.0, make_params())
