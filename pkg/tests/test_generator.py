import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fwmindex.liouville.generator import (
    SingularSystem,
    UnphysicalState,
    build_rotating_frame_generator,
    check_density_matrix,
    drive_hamiltonian,
    factorize,
    steady_state,
)
from fwmindex.liouville.hyperfine import build_hyperfine_scheme, fwm_drives, k40_fwm_levels
from fwmindex.liouville.models import four_level_drives, four_level_scheme
from fwmindex.liouville.scheme import DecayChannel, DipoleCoupling, DriveAssignment, Field, LevelScheme, State

from conftest import GAMMA_R, four_level


def _four(omega=0.3, clamp=True):
    p = four_level(omega, 0.5, 1e-3)
    s = four_level_scheme(p, clamp_excited_coherence=clamp)
    return p, s, four_level_drives(s, p.control_rabi)


def test_trace_preserved():
    # columns of the unpinned generator sum to zero on the populations
    _, s, d = _four(clamp=False)
    g = build_rotating_frame_generator(s, d, reduce=False)
    L = g.full.toarray()
    pops = [i * s.n + i for i in range(s.n)]
    assert np.max(np.abs(L[pops].sum(axis=0))) < 1e-6 * np.max(np.abs(L))


@settings(max_examples=20, deadline=None)
@given(st.floats(0.01, 3.0), st.floats(-3, 3))
def test_steady_state_is_density_matrix(om, x):
    p = four_level(om, 0.5, 1e-3)
    s = four_level_scheme(p)
    g = build_rotating_frame_generator(s, four_level_drives(s, p.control_rabi))
    ss = steady_state(g, x * GAMMA_R)
    assert ss.residual < 1e-8 * np.max(np.abs(g.matrix))
    check_density_matrix(ss.rho)
    assert np.trace(ss.rho).real == pytest.approx(1.0, abs=1e-12)


def test_symmetric_controls_split_population_evenly():
    p, s, d = _four(1.0)
    rho = steady_state(build_rotating_frame_generator(s, d)).rho
    pops = np.real(np.diag(rho))
    assert pops[0] == pytest.approx(pops[1], rel=1e-10)
    # ground minus excited population of a line: 1/2 / (1 + 4 Omega^2 / (gamma Gamma_r))
    diff = pops[0] - pops[2]
    assert diff == pytest.approx(0.5 / (1 + 4 * p.control_rabi**2 / (p.optical_decay * GAMMA_R)), rel=1e-9)


def test_four_level_equation_coefficient():
    # d sigma_41 / dt contains -i Omega_1 sigma_43 (rows: target element, columns: source)
    p, s, d = _four(0.7, clamp=False)
    g = build_rotating_frame_generator(s, d, reduce=False)
    L = g.full.toarray()
    n = s.n
    i4, i1, i3 = s.index("4"), s.index("1"), s.index("3")
    coeff = L[i4 * n + i1, i4 * n + i3]
    assert coeff == pytest.approx(-1j * p.control_rabi, rel=1e-12)


def test_reduced_equals_full():
    s = build_hyperfine_scheme("K40", optical_dephasing=0.5 * GAMMA_R, ground_dephasing=1e-3 * GAMMA_R)
    d = fwm_drives(s, k40_fwm_levels(), 1.0 * GAMMA_R)
    red = build_rotating_frame_generator(s, d, reduce=True)
    full = build_rotating_frame_generator(s, d, reduce=False)
    assert red.is_reduced and not full.is_reduced
    a = steady_state(red, 0.1 * GAMMA_R).rho
    b = steady_state(full, 0.1 * GAMMA_R).rho
    assert np.max(np.abs(a - b)) < 1e-10


def test_all_fields_off_is_singular():
    # without drives or relaxation both ground populations and the undamped
    # ground coherence pair are stationary
    st_ = (State("g1", 0.0, False), State("g2", 5.0, False), State("e", 100.0, True))
    s = LevelScheme(st_, (DipoleCoupling("g1", "e", 1.0, "a"), DipoleCoupling("g2", "e", 1.0, "b")),
                    (DecayChannel("e", "g1", 1.0), DecayChannel("e", "g2", 1.0)))
    d = DriveAssignment((Field("c", 100.0, 0.0, ("a",)), Field("p", 95.0, 0.0, ("b",), probe=True)))
    g = build_rotating_frame_generator(s, d, reduce=False)
    with pytest.raises(SingularSystem) as err:
        factorize(g)
    assert err.value.kernel_dimension == 4


def test_unphysical_state_detected():
    with pytest.raises(UnphysicalState):
        check_density_matrix(np.diag([1.5, -0.5]))


def test_probe_hamiltonian_excluded_by_default():
    _, s, d = _four()
    h = drive_hamiltonian(s, d)
    hp = drive_hamiltonian(s, d.with_rabi(probe1=1.0), probes=True)
    assert np.count_nonzero(h) == 4
    assert np.count_nonzero(hp) == 6
