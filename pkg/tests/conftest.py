import pytest

from fwmindex.core import NM, FourLevelParams, mhz

GAMMA_R = mhz(6.035)
WAVELENGTH = 770.1 * NM


def four_level(omega=0.1, gamma=0.5, gamma21=1e-3, density=1e14):
    """Four-level parameters with rates in units of the radiative rate."""
    return FourLevelParams.in_gamma_units(
        omega, gamma, gamma21, radiative_decay=GAMMA_R, density=density, wavelength=WAVELENGTH
    )


@pytest.fixture
def params():
    return four_level()
