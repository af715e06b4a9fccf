import math

import pytest
from hypothesis import given, strategies as st

from fwmindex.core import (
    HBAR,
    ComplexIndex,
    DomainError,
    FourLevelParams,
    PropagationConstants,
    SusceptibilityMatrix,
    coupling_rate,
    dimensionless_density,
    dipole_from_radiative_decay,
    mhz,
    radiative_decay_from_dipole,
    to_mhz,
)

from conftest import GAMMA_R, WAVELENGTH, four_level


def test_dimensionless_density_value():
    # 3 N lambda^3 / (64 pi^2) evaluated by hand for 1e14 cm^-3, 770.1 nm
    r = dimensionless_density(1e14, WAVELENGTH)
    assert r == pytest.approx(3e14 * (770.1e-7) ** 3 / (64 * math.pi**2), rel=1e-15)
    assert r == pytest.approx(0.2169, abs=1e-4)


def test_dimensionless_density_rejects_nonpositive():
    with pytest.raises(DomainError):
        dimensionless_density(0.0, WAVELENGTH)
    with pytest.raises(DomainError):
        dimensionless_density(1e14, -1.0)


@given(st.floats(1e5, 1e10), st.floats(1e3, 1e6))
def test_dipole_decay_roundtrip(gamma, k):
    mu = dipole_from_radiative_decay(gamma, k)
    assert radiative_decay_from_dipole(mu, k) == pytest.approx(gamma, rel=1e-12)


def test_coupling_rate_matches_dipole():
    k = 2 * math.pi / WAVELENGTH
    mu = dipole_from_radiative_decay(GAMMA_R, k)
    assert coupling_rate(1e14, GAMMA_R, k) == pytest.approx(1e14 * mu**2 / HBAR, rel=1e-12)


def test_mhz_roundtrip():
    assert mhz(1.0) == pytest.approx(2 * math.pi * 1e6)
    assert to_mhz(mhz(6.035)) == pytest.approx(6.035)


def test_four_level_validation():
    with pytest.raises(DomainError):
        four_level(gamma=0.4)
    with pytest.raises(DomainError):
        four_level(gamma21=-1.0)
    with pytest.raises(DomainError):
        four_level(density=0.0)
    with pytest.raises(DomainError):
        four_level(omega=-0.1)


def test_four_level_roundtrip_and_units():
    p = four_level(0.2, 0.7, 1e-2, 3e14)
    assert p.control_rabi == pytest.approx(0.2 * GAMMA_R)
    assert FourLevelParams.from_dict(p.to_dict()) == p
    assert p.replace(density=1e15).density == 1e15
    assert p.r == pytest.approx(dimensionless_density(3e14, WAVELENGTH))


def test_complex_index_rejects_nan():
    with pytest.raises(DomainError):
        ComplexIndex(math.nan, 0.0)
    z = ComplexIndex.from_complex(1 + 2j)
    assert complex(z) == 1 + 2j
    assert ComplexIndex.from_dict(z.to_dict()) == z


def test_susceptibility_matrix_ops():
    a = SusceptibilityMatrix(1, 2j, 3, 4j)
    b = SusceptibilityMatrix(1j, 1, 1, 1)
    s = a + b
    assert s.chi11 == 1 + 1j and s.chi22 == 1 + 4j
    assert SusceptibilityMatrix.from_dict(a.to_dict()) == a
    assert a.as_array().shape == (2, 2)
    with pytest.raises(DomainError):
        SusceptibilityMatrix(complex("nan"), 0, 0, 0)


def test_propagation_constants_swap_roundtrip():
    pc = PropagationConstants(1 + 1j, 2 - 1j)
    assert pc.swapped().lambda_plus == 2 - 1j
    assert PropagationConstants.from_dict(pc.to_dict()) == pc
