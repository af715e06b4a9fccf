"""Units, constants and the value types shared by every other module.

Internal conventions: angular frequencies in rad/s, lengths in cm, densities in
atoms/cm^3 and Gaussian electromagnetic units, so that the index change of a
dilute medium is ``dn = 2 * pi * chi``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, fields

import numpy as np

# CGS constants (CODATA 2018)
HBAR = 1.054571817e-27  # erg s
K_B = 1.380649e-16  # erg / K
AMU = 1.66053906660e-24  # g
TWO_PI = 2.0 * math.pi

MHZ = TWO_PI * 1e6  # rad/s per MHz
NM = 1e-7  # cm per nm


class DomainError(ValueError):
    """An argument lies outside the domain where a formula is defined."""


def mhz(value: float) -> float:
    """Convert a frequency in MHz (cycles) to rad/s."""
    return value * MHZ


def to_mhz(value: float) -> float:
    return value / MHZ


def _complex_to_list(z) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def _list_to_complex(v) -> complex:
    if isinstance(v, (list, tuple)):
        return complex(float(v[0]), float(v[1]))
    return complex(v)


@dataclass(frozen=True)
class FourLevelParams:
    """Parameters of the idealized symmetric four-level FWM medium.

    All rates are angular frequencies (rad/s). The dipole moment is never an
    input: it follows from ``radiative_decay`` and ``wavelength``.
    """

    control_rabi: float
    optical_decay: float
    ground_decay: float
    radiative_decay: float
    density: float
    wavelength: float

    def __post_init__(self):
        if not self.control_rabi >= 0:
            raise DomainError(f"control_rabi must be >= 0, got {self.control_rabi}")
        if not self.radiative_decay > 0:
            raise DomainError("radiative_decay must be positive")
        # small slack: gamma = Gamma_r / 2 computed in different unit systems
        if self.optical_decay < 0.5 * self.radiative_decay * (1 - 1e-12):
            raise DomainError("optical_decay must be >= radiative_decay / 2")
        if not self.ground_decay >= 0:
            raise DomainError("ground_decay must be >= 0")
        if not self.density > 0:
            raise DomainError("density must be positive")
        if not self.wavelength > 0:
            raise DomainError("wavelength must be positive")

    @property
    def wavevector(self) -> float:
        return TWO_PI / self.wavelength

    @property
    def dipole(self) -> float:
        return dipole_from_radiative_decay(self.radiative_decay, self.wavevector)

    @property
    def coupling_rate(self) -> float:
        """``N |mu|^2 / hbar`` in rad/s."""
        return coupling_rate(self.density, self.radiative_decay, self.wavevector)

    @property
    def r(self) -> float:
        return dimensionless_density(self.density, self.wavelength)

    def replace(self, **changes) -> "FourLevelParams":
        data = asdict(self)
        data.update(changes)
        return FourLevelParams(**data)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "FourLevelParams":
        names = {f.name for f in fields(cls)}
        return cls(**{k: float(v) for k, v in data.items() if k in names})

    @classmethod
    def in_gamma_units(
        cls,
        omega: float,
        gamma: float = 0.5,
        gamma21: float = 1e-3,
        *,
        radiative_decay: float,
        density: float,
        wavelength: float,
    ) -> "FourLevelParams":
        """Build from rates quoted in units of the radiative decay rate."""
        return cls(
            control_rabi=omega * radiative_decay,
            optical_decay=gamma * radiative_decay,
            ground_decay=gamma21 * radiative_decay,
            radiative_decay=radiative_decay,
            density=density,
            wavelength=wavelength,
        )


@dataclass(frozen=True)
class ComplexIndex:
    """Complex index change ``dn' + i dn''``; ``dn'' > 0`` is absorption."""

    real: float
    imag: float

    def __post_init__(self):
        if not (math.isfinite(self.real) and math.isfinite(self.imag)):
            raise DomainError(f"non-finite index ({self.real}, {self.imag})")

    @classmethod
    def from_complex(cls, z) -> "ComplexIndex":
        z = complex(z)
        return cls(z.real, z.imag)

    def __complex__(self) -> complex:
        return complex(self.real, self.imag)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "ComplexIndex":
        return cls(float(data["real"]), float(data["imag"]))


@dataclass(frozen=True)
class SusceptibilityMatrix:
    """The four probe susceptibilities at a single detuning.

    ``P1 = chi11 E1 + chi12 E2*`` and ``P2 = chi22 E2 + chi21 E1*``.
    """

    chi11: complex
    chi12: complex
    chi21: complex
    chi22: complex

    def __post_init__(self):
        for name in ("chi11", "chi12", "chi21", "chi22"):
            z = complex(getattr(self, name))
            if not (math.isfinite(z.real) and math.isfinite(z.imag)):
                raise DomainError(f"non-finite {name}: {z}")
            object.__setattr__(self, name, z)

    def as_array(self) -> np.ndarray:
        return np.array([[self.chi11, self.chi12], [self.chi21, self.chi22]])

    def replace(self, **changes) -> "SusceptibilityMatrix":
        data = {f.name: getattr(self, f.name) for f in fields(self)}
        data.update(changes)
        return SusceptibilityMatrix(**data)

    def __add__(self, other: "SusceptibilityMatrix") -> "SusceptibilityMatrix":
        return SusceptibilityMatrix(
            self.chi11 + other.chi11,
            self.chi12 + other.chi12,
            self.chi21 + other.chi21,
            self.chi22 + other.chi22,
        )

    def to_dict(self) -> dict:
        return {f.name: _complex_to_list(getattr(self, f.name)) for f in fields(self)}

    @classmethod
    def from_dict(cls, data: dict) -> "SusceptibilityMatrix":
        return cls(**{f.name: _list_to_complex(data[f.name]) for f in fields(cls)})


@dataclass(frozen=True)
class PropagationConstants:
    """Eigen-constants of the coupled probe equations, in 1/cm.

    Fields evolve as ``exp(lambda * z)``; ``branch`` records how the square
    root was resolved.
    """

    lambda_plus: complex
    lambda_minus: complex
    branch: str = "reference"

    def __post_init__(self):
        object.__setattr__(self, "lambda_plus", complex(self.lambda_plus))
        object.__setattr__(self, "lambda_minus", complex(self.lambda_minus))

    def swapped(self) -> "PropagationConstants":
        return PropagationConstants(self.lambda_minus, self.lambda_plus, self.branch + "+swap")

    def to_dict(self) -> dict:
        return {
            "lambda_plus": _complex_to_list(self.lambda_plus),
            "lambda_minus": _complex_to_list(self.lambda_minus),
            "branch": self.branch,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PropagationConstants":
        return cls(
            _list_to_complex(data["lambda_plus"]),
            _list_to_complex(data["lambda_minus"]),
            str(data.get("branch", "reference")),
        )


def dimensionless_density(density: float, wavelength: float) -> float:
    """Return ``r = 3 N lambda^3 / (64 pi^2)``.

    Parameters
    ----------
    density : float
        Atomic density in atoms/cm^3.
    wavelength : float
        Transition wavelength in cm.
    """
    if not density > 0 or not wavelength > 0:
        raise DomainError("density and wavelength must be positive")
    return 3.0 * density * wavelength**3 / (64.0 * math.pi**2)


def dipole_from_radiative_decay(radiative_decay: float, wavevector: float) -> float:
    """Dipole moment (esu cm) of a line with decay rate ``4 k^3 mu^2 / (3 hbar)``."""
    if not radiative_decay > 0 or not wavevector > 0:
        raise DomainError("radiative_decay and wavevector must be positive")
    return math.sqrt(3.0 * HBAR * radiative_decay / (4.0 * wavevector**3))


def radiative_decay_from_dipole(dipole: float, wavevector: float) -> float:
    return 4.0 * wavevector**3 * dipole**2 / (3.0 * HBAR)


def coupling_rate(density: float, radiative_decay: float, wavevector: float) -> float:
    """``N |mu|^2 / hbar`` for a dipole fixed by the radiative decay rate.

    Equals ``3 Gamma_r N / (4 k^3)``; hbar cancels, which keeps the number well
    scaled.
    """
    if not density >= 0:
        raise DomainError("density must be >= 0")
    if not radiative_decay > 0 or not wavevector > 0:
        raise DomainError("radiative_decay and wavevector must be positive")
    return 0.75 * radiative_decay * density / wavevector**3
