"""Collisional broadening, Doppler averaging and the K vapor density model."""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import asdict, dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.special import roots_hermite

from .core import K_B, DomainError, mhz

log = logging.getLogger(__name__)

# 2 * beta * N = 0.7e-13 N MHz for the K D1 line
K_D1_COLLISIONAL_COEFFICIENT = mhz(0.35e-13)  # rad/s cm^3

VAPOR_BRANCH_T = 336.8
_VAPOR_FITS = ((7.9667, 4646.0), (7.4077, 4453.0))


class AccuracyWarning(UserWarning):
    pass


@dataclass(frozen=True)
class BroadeningSpec:
    collisional_coefficient: float = K_D1_COLLISIONAL_COEFFICIENT
    temperature: float = 300.0
    mass: float = 0.0
    doppler_nodes: int = 64

    def __post_init__(self):
        if self.collisional_coefficient < 0:
            raise DomainError("collisional coefficient must be >= 0")
        if not self.temperature > 0:
            raise DomainError("temperature must be positive")
        if self.doppler_nodes < 8 or self.doppler_nodes % 2:
            raise DomainError("doppler_nodes must be even and >= 8")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "BroadeningSpec":
        data = dict(data)
        data["doppler_nodes"] = int(data.get("doppler_nodes", 64))
        return cls(**data)


def collisional_gamma(density: float, coefficient: float = K_D1_COLLISIONAL_COEFFICIENT) -> float:
    """Density-proportional addition to the optical coherence decay (rad/s)."""
    if density < 0:
        raise DomainError("density must be >= 0")
    return coefficient * density


def max_index_with_collisions(density, radiative_decay, wavelength, coefficient=K_D1_COLLISIONAL_COEFFICIENT):
    """Upper bound ``r Gamma_r / gamma`` with ``gamma = Gamma_r/2 + beta N``."""
    density = np.asarray(density, dtype=float)
    r = 3.0 * density * wavelength**3 / (64.0 * math.pi**2)
    return r * radiative_decay / (0.5 * radiative_decay + coefficient * density)


def doppler_width(temperature: float, mass: float, wavevector: float) -> float:
    """Width ``k sqrt(2 kB T / m)`` of the 1D Doppler profile in rad/s (mass in g)."""
    if not (temperature > 0 and mass > 0 and wavevector > 0):
        raise DomainError("temperature, mass and wavevector must be positive")
    return wavevector * math.sqrt(2.0 * K_B * temperature / mass)


@lru_cache(maxsize=32)
def _hermite_rule(nodes: int):
    # numpy's hermgauss overflows beyond a few hundred nodes; scipy switches
    # to an asymptotic rule there
    x, w = roots_hermite(nodes)
    return x, w / math.sqrt(math.pi)


def velocity_nodes(width: float, nodes: int):
    """Doppler shifts and normalized weights of the Maxwell-Boltzmann rule."""
    x, w = _hermite_rule(nodes)
    return width * x, w


@dataclass(frozen=True)
class DopplerAverage:
    value: complex | np.ndarray
    nodes: int
    relative_change: float
    converged: bool


def doppler_average(
    spectrum_fn: Callable[[float], complex],
    width: float,
    nodes: int = 64,
    tol: float = 1e-6,
    max_nodes: int = 512,
    vectorized: bool = False,
) -> DopplerAverage:
    """Average ``spectrum_fn(shift)`` over ``exp(-(shift/W)^2) / (sqrt(pi) W)``.

    Gauss-Hermite quadrature with node doubling until two successive results
    agree to ``tol`` (relative). ``spectrum_fn`` may return a scalar or an
    array; results are reduced in fixed node order. A non-converged result
    carries ``converged=False`` and emits ``AccuracyWarning``.

    With ``vectorized=True`` the function receives the whole sorted node
    array and returns one row per node.
    """
    if width < 0:
        raise DomainError("Doppler width must be >= 0")
    if width == 0:
        v = spectrum_fn(np.zeros(1))[0] if vectorized else spectrum_fn(0.0)
        return DopplerAverage(v, 0, 0.0, True)

    def rule(n):
        shifts, weights = velocity_nodes(width, n)
        if vectorized:
            rows = np.asarray(spectrum_fn(shifts), dtype=complex)
            return np.tensordot(weights, rows, axes=(0, 0))
        acc = None
        for s, w in zip(shifts, weights):
            term = w * np.asarray(spectrum_fn(float(s)), dtype=complex)
            acc = term if acc is None else acc + term
        return acc

    prev = rule(nodes)
    n = nodes
    change = math.inf
    while n < max_nodes:
        n *= 2
        cur = rule(n)
        scale = float(np.max(np.abs(cur))) or 1.0
        change = float(np.max(np.abs(cur - prev))) / scale
        prev = cur
        if change < tol:
            break
    converged = change < tol
    if not converged:
        warnings.warn(
            f"Doppler average not converged: relative change {change:.2e} at {n} nodes",
            AccuracyWarning,
            stacklevel=2,
        )
    value = complex(prev) if np.ndim(prev) == 0 else prev
    return DopplerAverage(value, n, change, converged)


def vapor_pressure_branch(temperature: float, branch: int) -> float:
    a, b = _VAPOR_FITS[branch]
    return 10.0 ** (a - b / temperature)


def vapor_pressure(temperature: float) -> float:
    """K vapor pressure in mbar, valid for 298 K < T < 600 K."""
    if not 298.0 < temperature < 600.0 + 1e-9:
        raise DomainError(f"temperature {temperature} K outside the 298-600 K fit range")
    return vapor_pressure_branch(temperature, 0 if temperature < VAPOR_BRANCH_T else 1)


def vapor_density(temperature: float) -> float:
    """K vapor number density in atoms/cm^3.

    ``N = 10^2 p / (kB T)`` with p in mbar gives m^-3 in SI; the 10^2 is the
    mbar to Pa conversion.
    """
    p_pa = 100.0 * vapor_pressure(temperature)
    kb_si = K_B * 1e-7
    return p_pa / (kb_si * temperature) * 1e-6
