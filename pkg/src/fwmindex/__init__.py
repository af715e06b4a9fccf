"""Refractive index enhancement by four-wave mixing in atomic vapors."""

__version__ = "0.1.0"

from .core import (
    ComplexIndex,
    DomainError,
    FourLevelParams,
    PropagationConstants,
    SusceptibilityMatrix,
    coupling_rate,
    dimensionless_density,
    dipole_from_radiative_decay,
    mhz,
    to_mhz,
)
