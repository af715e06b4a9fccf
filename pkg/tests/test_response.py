import numpy as np
import pytest

from fwmindex.analytic import fwm_chi_arrays
from fwmindex.liouville.hyperfine import build_hyperfine_scheme, fwm_drives, k40_fwm_levels, loop_sign
from fwmindex.liouville.models import four_level_drives, four_level_scheme
from fwmindex.liouville.response import ResponseEngine, linear_response_susceptibilities

from conftest import GAMMA_R, four_level


def _rel(a, b):
    return np.max(np.abs(a - b)) / np.max(np.abs(b))


@pytest.mark.parametrize("omega,g21,density", [(0.1, 1e-3, 1e14), (1.3, 1e-2, 3e15), (0.02, 1e-4, 1e13)])
def test_four_level_matches_closed_form(omega, g21, density):
    p = four_level(omega, 0.5, g21, density)
    s = four_level_scheme(p)
    d = np.linspace(-3, 3, 61) * p.optical_decay
    res = ResponseEngine(s, four_level_drives(s, p.control_rabi), density).sweep(d).arrays()
    for name, ref in zip(("chi11", "chi12", "chi21", "chi22"), fwm_chi_arrays(p, d)):
        assert _rel(res[name], ref) < 1e-10


def test_unclamped_excited_coherence_differs_at_second_order():
    p = four_level(1.0, 0.5, 1e-3)
    d = np.linspace(-1, 1, 21) * GAMMA_R
    s = four_level_scheme(p, clamp_excited_coherence=False)
    a = ResponseEngine(s, four_level_drives(s, p.control_rabi), p.density).sweep(d).arrays()
    ref = fwm_chi_arrays(p, d)
    assert _rel(a["chi11"], ref[0]) > 1e-4


def test_probe2_sign_flips_cross_terms_only():
    p = four_level(0.4)
    s = four_level_scheme(p)
    dr = four_level_drives(s, p.control_rabi)
    a = ResponseEngine(s, dr, p.density).at(0.2 * GAMMA_R)
    b = ResponseEngine(s, dr, p.density, probe2_sign=-1.0).at(0.2 * GAMMA_R)
    assert b.chi11 == pytest.approx(a.chi11) and b.chi22 == pytest.approx(a.chi22)
    assert b.chi12 == pytest.approx(-a.chi12) and b.chi21 == pytest.approx(-a.chi21)


def test_single_probe_engine_and_wrapper():
    p = four_level(0.4)
    s = four_level_scheme(p)
    dr = four_level_drives(s, p.control_rabi)
    one = ResponseEngine(s, dr, p.density, probe1=None).at(0.1 * GAMMA_R)
    both = ResponseEngine(s, dr, p.density).at(0.1 * GAMMA_R)
    assert one.chi11 == 0 and one.chi12 == 0 and one.chi22 == pytest.approx(both.chi22)
    chis = linear_response_susceptibilities(s, dr, [0.1 * GAMMA_R], p.density)
    assert chis[0].chi11 == pytest.approx(both.chi11)


def test_k40_multilevel_response_is_passive_without_controls():
    s = build_hyperfine_scheme("K40", optical_dephasing=0.5 * GAMMA_R, ground_dephasing=1e-3 * GAMMA_R)
    d = fwm_drives(s, k40_fwm_levels(), 1e-4 * GAMMA_R)
    eng = ResponseEngine(s, d, 1e14, probe2_sign=loop_sign(s, d))
    assert eng.gen.is_reduced
    res = eng.sweep(np.linspace(-3, 3, 13) * GAMMA_R).arrays()
    assert np.all(res["chi11"].imag > 0) and np.all(res["chi22"].imag > 0)
    assert np.max(np.abs(res["chi12"])) < 1e-3 * np.max(np.abs(res["chi11"]))
