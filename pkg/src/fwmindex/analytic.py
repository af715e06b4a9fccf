"""Closed-form susceptibilities and index estimates.

Covers the two-species absorber/amplifier medium, the idealized four-level
FWM susceptibilities with their population difference, the ``lambda_+``
index, its zero-absorption detuning and enhancement factor, the control Rabi
frequency optimizer, and the two-level absorber that can be added to the
``omega_2`` probe susceptibility.

Functions taking a detuning accept scalars; the ``*_arrays`` variants accept
numpy arrays and are used for large sweeps.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .core import (
    HBAR,
    ComplexIndex,
    DomainError,
    FourLevelParams,
    SusceptibilityMatrix,
)

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


class NoZeroAbsorption(DomainError):
    """The parameters admit no real detuning with vanishing absorption."""


@dataclass(frozen=True)
class TwoLevelAbsorberParams:
    density: float
    dipole: float
    decay: float
    offset: float = 0.0

    def __post_init__(self):
        if not self.decay > 0:
            raise DomainError("absorber decay must be positive")
        if not self.density >= 0:
            raise DomainError("absorber density must be >= 0")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "TwoLevelAbsorberParams":
        return cls(**{k: float(v) for k, v in data.items()})


@dataclass(frozen=True)
class RamanPairParams:
    """Absorbing species (unprimed) plus amplifying species (primed)."""

    density: float
    dipole: float
    decay: float
    detuning: float
    population_difference: float
    density_b: float
    dipole_b: float
    decay_b: float
    detuning_b: float
    population_difference_b: float

    def __post_init__(self):
        for d in (self.population_difference, self.population_difference_b):
            if not -1.0 <= d <= 1.0:
                raise DomainError(f"population difference {d} outside [-1, 1]")

    def shifted(self, shift: float) -> "RamanPairParams":
        """Same medium probed at a frequency lower by ``shift``."""
        data = asdict(self)
        data["detuning"] += shift
        data["detuning_b"] += shift
        return RamanPairParams(**data)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "RamanPairParams":
        return cls(**{k: float(v) for k, v in data.items()})


def absorber_amplifier_index(p: RamanPairParams) -> ComplexIndex:
    """Index change of a two-Lorentzian absorbing/amplifying medium."""
    if not (p.decay > 0 and p.decay_b > 0):
        raise DomainError("decay rates must be positive")
    a = p.density * p.dipole**2 * p.population_difference / (1j * p.detuning + p.decay)
    b = p.density_b * p.dipole_b**2 * p.population_difference_b / (1j * p.detuning_b + p.decay_b)
    return ComplexIndex.from_complex(2j * math.pi / HBAR * (a + b))


def absorber_amplifier_arrays(p: RamanPairParams, shifts) -> np.ndarray:
    shifts = np.asarray(shifts, dtype=float)
    if not (p.decay > 0 and p.decay_b > 0):
        raise DomainError("decay rates must be positive")
    a = p.density * p.dipole**2 * p.population_difference / (1j * (p.detuning + shifts) + p.decay)
    b = p.density_b * p.dipole_b**2 * p.population_difference_b / (
        1j * (p.detuning_b + shifts) + p.decay_b
    )
    return 2j * math.pi / HBAR * (a + b)


def population_difference(control_rabi, optical_decay, radiative_decay):
    """Ground minus excited population under the two symmetric controls."""
    if np.any(np.asarray(optical_decay) <= 0) or np.any(np.asarray(radiative_decay) <= 0):
        raise DomainError("decay rates must be positive")
    s = 4.0 * np.square(control_rabi) / (optical_decay * radiative_decay)
    return 0.5 / (1.0 + s)


def fwm_chi_arrays(p: FourLevelParams, delta):
    """Return ``(chi11, chi12, chi21, chi22)`` as arrays over ``delta``."""
    d = np.asarray(delta, dtype=float)
    g, g21, om2 = p.optical_decay, p.ground_decay, p.control_rabi**2
    if not g > 0:
        raise DomainError("optical decay must be positive")
    pre = 0.5 * p.coupling_rate * population_difference(p.control_rabi, g, p.radiative_decay)
    zp = 1j * d + g
    zm = -1j * d + g
    den_p = zp * (1j * d + g21) + 2.0 * om2
    den_m = zm * (-1j * d + g21) + 2.0 * om2
    chi11 = 1j * pre * (1j * d + g21 - 1j * d * om2 / (g * zp)) / den_p
    chi12 = -1j * pre * om2 * (1j * d + 2.0 * g) / (g * zp * den_p)
    chi22 = 1j * pre * (-1j * d + g21 + 1j * d * om2 / (g * zm)) / den_m
    chi21 = -1j * pre * om2 * (-1j * d + 2.0 * g) / (g * zm * den_m)
    return chi11, chi12, chi21, chi22


def fwm_susceptibilities(p: FourLevelParams, delta: float) -> SusceptibilityMatrix:
    """Susceptibility matrix of the idealized FWM medium at probe detuning ``delta``.

    ``delta`` is the detuning of probe 1 from its transition in rad/s; probe 2
    is detuned by ``-delta`` through frequency matching.
    """
    c11, c12, c21, c22 = fwm_chi_arrays(p, float(delta))
    return SusceptibilityMatrix(complex(c11), complex(c12), complex(c21), complex(c22))


def index_plus_array(p: FourLevelParams, delta):
    d = np.asarray(delta, dtype=float)
    g, g21, om2 = p.optical_decay, p.ground_decay, p.control_rabi**2
    if not g > 0:
        raise DomainError("optical decay must be positive")
    pre = math.pi * p.coupling_rate * population_difference(p.control_rabi, g, p.radiative_decay)
    return 1j * pre * (1j * d + g21 - 2.0 * om2 / g) / ((1j * d + g) * (1j * d + g21) + 2.0 * om2)


def index_plus(p: FourLevelParams, delta: float) -> ComplexIndex:
    """Closed-form complex index of the ``lambda_+`` mode."""
    return ComplexIndex.from_complex(complex(index_plus_array(p, float(delta))))


def zero_absorption_detuning(control_rabi: float, optical_decay: float, ground_decay: float) -> float:
    """Non-negative detuning where the ``lambda_+`` absorption vanishes.

    The index is reduced at ``+delta*`` and enhanced at ``-delta*``.
    """
    g = optical_decay
    if not g > 0:
        raise DomainError("optical decay must be positive")
    num = 4.0 * control_rabi**4 / g**2 - ground_decay**2
    if num < 0:
        raise NoZeroAbsorption(
            f"2 Omega^2 / gamma = {2 * control_rabi**2 / g:.6g} is below gamma21 = {ground_decay:.6g}"
        )
    return math.sqrt(num / (1.0 + 2.0 * control_rabi**2 / g**2))


def enhancement_factor(control_rabi, optical_decay, ground_decay, radiative_decay):
    """Index enhancement at the zero-absorption point in units of ``r``.

    Vectorized over ``control_rabi``; entries below the zero-absorption
    threshold are NaN (scalar input raises ``NoZeroAbsorption`` instead).
    """
    om = np.asarray(control_rabi, dtype=float)
    g, g21, gr = optical_decay, ground_decay / optical_decay, radiative_decay
    x = om**2 / g**2
    rad = (4.0 * x * x - g21**2) / (1.0 + 2.0 * x)
    if om.ndim == 0 and rad < 0:
        raise NoZeroAbsorption("no zero-absorption point for these parameters")
    with np.errstate(invalid="ignore"):
        root = np.sqrt(np.where(rad >= 0, rad, np.nan))
    sat = 1.0 + 4.0 * om**2 / (g * gr)
    num = (2.0 * (1.0 + x) - g21) * (1.0 + 2.0 * x)
    den = (1.0 + g21) * (4.0 * x * (1.0 + x) + g21 * (2.0 - g21))
    out = (gr / g) / sat * root * num / den
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class RabiOptimum:
    control_rabi: float
    factor: float
    at_boundary: bool


def optimize_control_rabi(
    optical_decay: float,
    ground_decay: float,
    radiative_decay: float,
    search_window: tuple[float, float],
    grid_points: int = 401,
    tol: float = 1e-10,
) -> RabiOptimum:
    """Maximize the enhancement factor over a control Rabi frequency window.

    Log-spaced coarse grid followed by golden-section refinement around the
    best node. Returns the lower window edge with ``at_boundary=True`` when the
    objective is monotone decreasing or flat.
    """
    lo, hi = search_window
    if not (0 < lo < hi):
        raise DomainError("search window must satisfy 0 < lo < hi")
    grid = np.geomspace(lo, hi, grid_points)
    vals = enhancement_factor(grid, optical_decay, ground_decay, radiative_decay)
    vals = np.where(np.isnan(vals), -np.inf, vals)
    if not np.isfinite(vals).any():
        raise NoZeroAbsorption("no zero-absorption point anywhere in the window")
    i = int(np.argmax(vals))
    if np.ptp(vals[np.isfinite(vals)]) <= 1e-14 * abs(vals[i]) or i == 0:
        return RabiOptimum(float(grid[0]), float(vals[0]), True)
    if i == grid_points - 1:
        return RabiOptimum(float(grid[-1]), float(vals[-1]), True)

    def f(om):
        v = enhancement_factor(np.array(om), optical_decay, ground_decay, radiative_decay)
        return -np.inf if np.isnan(v) else float(v)

    a, b = math.log(grid[i - 1]), math.log(grid[i + 1])
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(math.exp(c)), f(math.exp(d))
    while b - a > tol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(math.exp(c))
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(math.exp(d))
    om = math.exp(0.5 * (a + b))
    best = f(om)
    if best < vals[i]:
        om, best = float(grid[i]), float(vals[i])
    return RabiOptimum(om, best, False)


def two_level_susceptibility(p: TwoLevelAbsorberParams, delta):
    """Susceptibility added to the ``omega_2`` probe by a two-level absorber.

    The absorber line sits at ``delta = p.offset`` with half width ``p.decay``.
    """
    if not p.decay > 0:
        raise DomainError("absorber decay must be positive")
    d = np.asarray(delta, dtype=float)
    out = np.asarray(1j * p.dipole**2 * p.density / HBAR / (1j * (p.offset - d) + p.decay))
    return complex(out) if out.ndim == 0 else out


def composite_chi_arrays(fwm: FourLevelParams, absorber: TwoLevelAbsorberParams, delta):
    c11, c12, c21, c22 = fwm_chi_arrays(fwm, delta)
    return c11, c12, c21, c22 + two_level_susceptibility(absorber, delta)


def composite_susceptibilities(
    fwm: FourLevelParams, absorber: TwoLevelAbsorberParams, delta: float
) -> SusceptibilityMatrix:
    base = fwm_susceptibilities(fwm, delta)
    return base.replace(chi22=base.chi22 + two_level_susceptibility(absorber, delta))
