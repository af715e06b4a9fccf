import itertools

import pytest
from sympy import Rational
from sympy.physics.wigner import wigner_3j as sym_3j, wigner_6j as sym_6j

from fwmindex.liouville.angular import wigner_3j, wigner_6j, wigner_coupling


def _sym6j(*args):
    # sympy refuses argument sets whose triads do not sum to integers
    try:
        return float(sym_6j(*args))
    except ValueError:
        return 0.0


def _halves(n):
    return [Rational(k, 2) for k in range(n)]


def test_3j_against_sympy():
    for j1, j2, j3 in itertools.product(_halves(6), repeat=3):
        for m1 in [-j1 + k for k in range(int(2 * j1) + 1)]:
            for m2 in [-j2 + k for k in range(int(2 * j2) + 1)]:
                m3 = -m1 - m2
                ref = float(sym_3j(j1, j2, j3, m1, m2, m3)) if abs(m3) <= j3 else 0.0
                got = wigner_3j(float(j1), float(j2), float(j3), float(m1), float(m2), float(m3))
                assert got == pytest.approx(ref, abs=1e-13)


def test_6j_against_sympy():
    vals = _halves(6)
    for a, b, c, d in itertools.product(vals, repeat=4):
        for e in (Rational(1, 2), Rational(1)):
            ref = _sym6j(a, b, c, d, e, Rational(3, 2))
            assert wigner_6j(float(a), float(b), float(c), float(d), float(e), 1.5) == pytest.approx(ref, abs=1e-13)


def test_unphysical_arguments_give_zero():
    assert wigner_3j(1, 1, 3, 0, 0, 0) == 0.0
    assert wigner_3j(1, 1, 1, 1, 1, 1) == 0.0
    assert wigner_6j(1, 1, 5, 1, 1, 1) == 0.0


@pytest.mark.parametrize("I", [1.5, 4.0])
def test_coupling_strengths_sum_rule(I):
    # from each excited sublevel the squared strengths to all ground sublevels sum to 1
    J, Jp = 0.5, 0.5
    Fs = [abs(I - J) + k for k in range(int(2 * min(I, J)) + 1)]
    for Fp in Fs:
        for mp in [-Fp + k for k in range(int(2 * Fp) + 1)]:
            tot = sum(
                wigner_coupling(F, m, Fp, mp, J, Jp, I) ** 2
                for F in Fs
                for m in [-F + k for k in range(int(2 * F) + 1)]
                if abs(m - mp) <= 1
            )
            assert tot == pytest.approx(1.0, rel=1e-12)


def test_integer_f_pi_zero():
    assert wigner_coupling(1, 0, 1, 0, 0.5, 0.5, 1.5) == 0.0
    assert wigner_coupling(2, 0, 2, 0, 0.5, 1.5, 1.5) == 0.0
