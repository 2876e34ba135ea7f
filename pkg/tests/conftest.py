"""Shared fixtures: paper-default parameter sets for both detuning choices."""

import pytest

from pbgsim.lindblad import SystemParams

# (delta/2pi GHz, theta/2pi GHz) for the two operating points studied
DETUNING_SETS = ((10.0, 10.0), (10.0, 0.0))


def make_params(delta_ghz=10.0, theta_ghz=10.0, n_drive=0.0, **kw) -> SystemParams:
    p = SystemParams.from_ghz(delta=delta_ghz, theta=theta_ghz, **kw)
    return p.with_drive_photons(n_drive)


@pytest.fixture(params=DETUNING_SETS, ids=("d10t10", "d10t0"))
def detunings(request):
    return request.param
