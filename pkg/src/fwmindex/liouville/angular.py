"""Wigner 3j/6j symbols (Racah formulas, exact rational arithmetic) and
hyperfine dipole factors."""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from ..core import DomainError


def _twice(j) -> int:
    t = Fraction(j) * 2 if not isinstance(j, float) else Fraction(j).limit_denominator(4) * 2
    if t.denominator != 1:
        raise DomainError(f"{j} is not a multiple of 1/2")
    return int(t)


def _triangle_ok(a2: int, b2: int, c2: int) -> bool:
    return (a2 + b2 + c2) % 2 == 0 and abs(a2 - b2) <= c2 <= a2 + b2


def _delta_sq(a2: int, b2: int, c2: int) -> Fraction:
    f = math.factorial
    return Fraction(
        f((a2 + b2 - c2) // 2) * f((a2 - b2 + c2) // 2) * f((-a2 + b2 + c2) // 2),
        f((a2 + b2 + c2) // 2 + 1),
    )


def _signed_sqrt(x: Fraction, sign: int) -> float:
    return sign * math.sqrt(x.numerator) / math.sqrt(x.denominator)


@lru_cache(maxsize=65536)
def _wigner_3j_2(j1, j2, j3, m1, m2, m3) -> float:
    if m1 + m2 + m3 != 0:
        return 0.0
    if not _triangle_ok(j1, j2, j3):
        return 0.0
    for j, m in ((j1, m1), (j2, m2), (j3, m3)):
        if abs(m) > j or (j + m) % 2:
            return 0.0
    f = math.factorial
    pre = _delta_sq(j1, j2, j3)
    for j, m in ((j1, m1), (j2, m2), (j3, m3)):
        pre *= f((j + m) // 2) * f((j - m) // 2)
    kmin = max(0, (j2 - j3 - m1) // 2, (j1 - j3 + m2) // 2)
    kmax = min((j1 + j2 - j3) // 2, (j1 - m1) // 2, (j2 + m2) // 2)
    terms = []
    for k in range(kmin, kmax + 1):
        d = (
            f(k)
            * f((j1 + j2 - j3) // 2 - k)
            * f((j1 - m1) // 2 - k)
            * f((j2 + m2) // 2 - k)
            * f((j3 - j2 + m1) // 2 + k)
            * f((j3 - j1 - m2) // 2 + k)
        )
        terms.append(Fraction((-1) ** k, d))
    total = sum(terms, Fraction(0))
    if total == 0:
        return 0.0
    phase = (-1) ** ((j1 - j2 - m3) // 2)
    value_sq = pre * total * total
    return _signed_sqrt(value_sq, phase * (1 if total > 0 else -1))


def wigner_3j(j1, j2, j3, m1, m2, m3) -> float:
    """Wigner 3j symbol; arguments may be integers, half-integers or Fractions."""
    return _wigner_3j_2(*(_twice(x) for x in (j1, j2, j3, m1, m2, m3)))


@lru_cache(maxsize=65536)
def _wigner_6j_2(a, b, c, d, e, g) -> float:
    triads = ((a, b, c), (a, e, g), (d, b, g), (d, e, c))
    if not all(_triangle_ok(*t) for t in triads):
        return 0.0
    f = math.factorial
    pre = Fraction(1)
    for t in triads:
        pre *= _delta_sq(*t)
    sums = [sum(t) // 2 for t in triads]
    pairs = ((a + b + d + e) // 2, (a + c + d + g) // 2, (b + c + e + g) // 2)
    terms = []
    for k in range(max(sums), min(pairs) + 1):
        den = 1
        for s in sums:
            den *= f(k - s)
        for p in pairs:
            den *= f(p - k)
        terms.append(Fraction((-1) ** k * f(k + 1), den))
    total = sum(terms, Fraction(0))
    if total == 0:
        return 0.0
    return _signed_sqrt(pre * total * total, 1 if total > 0 else -1)


def wigner_6j(j1, j2, j3, j4, j5, j6) -> float:
    """Wigner 6j symbol ``{j1 j2 j3; j4 j5 j6}``."""
    return _wigner_6j_2(*(_twice(x) for x in (j1, j2, j3, j4, j5, j6)))


def wigner_coupling(F, mF, Fp, mFp, J, Jp, I) -> float:
    """Dipole factor between lower ``|J I F mF>`` and upper ``|J' I F' mF'>``.

    Normalized so that summing the squares over every lower state (all F, mF
    and polarizations) from one upper sublevel gives 1; the decay rate of a
    channel is then ``Gamma * coupling**2``. Zero when selection rules forbid
    the transition.
    """
    for name, j in (("F", F), ("F'", Fp), ("J", J), ("J'", Jp), ("I", I)):
        if Fraction(j) < 0:
            raise DomainError(f"{name} must be non-negative")
    for f_, j_ in ((F, J), (Fp, Jp)):
        if not _triangle_ok(_twice(j_), _twice(I), _twice(f_)):
            raise DomainError(f"F={f_} cannot be formed from J={j_} and I={I}")
    if abs(Fraction(mF)) > Fraction(F) or abs(Fraction(mFp)) > Fraction(Fp):
        raise DomainError("|mF| exceeds F")
    q = Fraction(mF) - Fraction(mFp)
    if abs(q) > 1:
        return 0.0
    three_j = wigner_3j(F, 1, Fp, -Fraction(mF), q, mFp)
    six_j = wigner_6j(J, F, I, Fp, Jp, 1)
    phase_exp = _twice(Fraction(F) - Fraction(mF)) // 2 + _twice(
        Fraction(J) + Fraction(I) + Fraction(Fp) + 1
    ) // 2
    scale = math.sqrt((2 * Fraction(F) + 1) * (2 * Fraction(Fp) + 1) * (2 * Fraction(Jp) + 1))
    return (-1) ** (phase_exp % 2) * scale * three_j * six_j
