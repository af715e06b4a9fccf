import math
import warnings

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.special import erfcx

from fwmindex.broadening import (
    AccuracyWarning,
    BroadeningSpec,
    K_D1_COLLISIONAL_COEFFICIENT,
    collisional_gamma,
    doppler_average,
    doppler_width,
    max_index_with_collisions,
    vapor_density,
    vapor_pressure,
    velocity_nodes,
)
from fwmindex.core import DomainError, mhz
from fwmindex.liouville.hyperfine import SPECIES

from conftest import GAMMA_R, WAVELENGTH

K = 2 * math.pi / WAVELENGTH


def test_doppler_width_300k():
    w = doppler_width(300.0, SPECIES["K40"].mass, K)
    assert w == pytest.approx(mhz(458.0), rel=1e-2)


def test_voigt_peak_against_erfc():
    W = doppler_width(300.0, SPECIES["K40"].mass, K)
    g = W
    avg = doppler_average(lambda s: g / (s * s + g * g), W, nodes=64, max_nodes=128)
    exact = math.sqrt(math.pi) / W * erfcx(g / W)
    assert avg.value.real == pytest.approx(exact, rel=1e-6)
    assert avg.converged


def test_zero_width_returns_unshifted_value():
    avg = doppler_average(lambda s: 3.0 + s, 0.0)
    assert avg.value == 3.0 and avg.nodes == 0


def test_nonconvergence_warns():
    with pytest.warns(AccuracyWarning):
        avg = doppler_average(lambda s: 1.0 / (s - 1e-3j), 1.0, nodes=8, max_nodes=16)
    assert not avg.converged


@given(st.floats(0.1, 10.0))
def test_weights_normalized_and_polynomials_exact(width):
    s, w = velocity_nodes(width, 32)
    assert w.sum() == pytest.approx(1.0, rel=1e-13)
    # second moment of exp(-(v/W)^2)/(sqrt(pi) W) is W^2/2
    assert np.dot(w, s**2) == pytest.approx(0.5 * width**2, rel=1e-12)


def test_large_rules_are_finite():
    s, w = velocity_nodes(1.0, 1024)
    assert np.all(np.isfinite(s)) and np.all(np.isfinite(w))


def test_vectorized_matches_pointwise():
    f = lambda s: np.array([1 / (s - 1j), s**2])
    a = doppler_average(f, 0.7, nodes=16, max_nodes=32, tol=1e-4)
    b = doppler_average(lambda ss: np.array([f(x) for x in ss]), 0.7, nodes=16, max_nodes=32, tol=1e-4, vectorized=True)
    assert np.allclose(a.value, b.value, rtol=1e-14, atol=0)


def test_collisional_ceiling_and_crossover():
    beta = K_D1_COLLISIONAL_COEFFICIENT
    assert GAMMA_R / (2 * beta) == pytest.approx(8.6e13, rel=2e-2)
    top = max_index_with_collisions(1e17, GAMMA_R, WAVELENGTH)
    assert top == pytest.approx(0.37, rel=0.1)
    assert collisional_gamma(1e14) == pytest.approx(beta * 1e14)
    with pytest.raises(DomainError):
        collisional_gamma(-1.0)


def test_vapor_density_monotone_and_range():
    ts = [300.0, 336.0, 337.0, 400.0, 600.0]
    n = [vapor_density(t) for t in ts]
    assert all(b > a for a, b in zip(n, n[1:]))
    assert 1e15 < vapor_density(600.0) < 1e17
    with pytest.raises(DomainError):
        vapor_pressure(250.0)


def test_broadening_spec_validation():
    assert BroadeningSpec.from_dict(BroadeningSpec().to_dict()) == BroadeningSpec()
    with pytest.raises(DomainError):
        BroadeningSpec(doppler_nodes=7)
    with pytest.raises(DomainError):
        BroadeningSpec(temperature=0.0)
