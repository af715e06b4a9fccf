"""Probe susceptibilities from first-order response of the steady state.

The probe amplitudes enter the Hamiltonian linearly, so the first-order
density matrix is ``sum_p a_p X_p`` with ``L0 X_p = -L_p rho0`` and
``tr X_p = 0``. One factorization of ``L0`` serves the steady state and all
four response vectors, so no finite-difference step is involved.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from ..core import SusceptibilityMatrix, TWO_PI, coupling_rate
from .generator import (
    Liouvillian,
    SingularSystem,
    build_rotating_frame_generator,
    check_density_matrix,
    factorize,
    line_operator,
)
from .scheme import DriveAssignment, LevelScheme

log = logging.getLogger(__name__)


@dataclass
class SweepResult:
    deltas: np.ndarray
    chi: list  # SusceptibilityMatrix or None where the system was singular
    failures: dict

    def arrays(self) -> dict[str, np.ndarray]:
        out = {}
        for name in ("chi11", "chi12", "chi21", "chi22"):
            out[name] = np.array(
                [getattr(c, name) if c is not None else complex("nan+nanj") for c in self.chi]
            )
        return out


class ResponseEngine:
    """Susceptibility matrix of a driven multilevel medium.

    Parameters
    ----------
    scheme, drives
        Level scheme and fields. The probe fields are named by ``probe1`` and
        ``probe2``; either may be ``None`` for a single-probe medium.
    density
        Atomic density (cm^-3). Susceptibilities are in units where the index
        change is ``2 pi chi``.
    reduce
        Passed to :func:`build_rotating_frame_generator`.
    probe2_sign
        Phase convention (+1 or -1) of the second probe amplitude. Flipping it
        flips the signs of the cross terms chi12 and chi21 only.
    """

    def __init__(
        self,
        scheme: LevelScheme,
        drives: DriveAssignment,
        density: float,
        probe1: str | None = "probe1",
        probe2: str | None = "probe2",
        reduce="auto",
        check: bool = True,
        probe2_sign: float = 1.0,
    ):
        self.scheme = scheme
        self.drives = drives
        self.density = density
        self.check = check
        self.raise1 = self._raising(probe1)
        self.raise2 = self._raising(probe2)
        if self.raise2 is not None:
            self.raise2 = probe2_sign * self.raise2
        ops = {}
        if self.raise1 is not None:
            ops["a1"] = -self.raise1
            ops["a1c"] = -self.raise1.conj().T
        if self.raise2 is not None:
            ops["a2"] = -self.raise2
            ops["a2c"] = -self.raise2.conj().T
        self.gen: Liouvillian = build_rotating_frame_generator(
            scheme, drives, reduce=reduce, probes_to_check=list(ops.values())
        )
        self.perturbations = {k: self.gen.commutator(v) for k, v in ops.items()}
        k = TWO_PI / scheme.reference_wavelength
        self.prefactor = 0.5 * coupling_rate(density, scheme.reference_decay, k)

    def _raising(self, name):
        if name is None:
            return None
        return line_operator(self.scheme, self.drives.field(name).lines)

    def _responses(self, fac, rho0_vec, keys):
        b = np.column_stack([-(self.perturbations[k] @ rho0_vec) for k in keys])
        b[fac.trace_row, :] = 0.0
        b[self.gen.clamped, :] = 0.0
        x = fac.solve(b)
        return {k: self.gen.unvec(x[:, j]) for j, k in enumerate(keys)}

    def steady_state(self, delta: float = 0.0, doppler_shift: float = 0.0) -> np.ndarray:
        fac = factorize(self.gen, self.gen.at(delta, doppler_shift))
        rhs = np.zeros(self.gen.size, dtype=complex)
        rhs[fac.trace_row] = 1.0
        return self.gen.unvec(fac.solve(rhs))

    def at(self, delta: float, doppler_shift: float = 0.0) -> SusceptibilityMatrix:
        """Susceptibility matrix at one probe detuning (rad/s)."""
        fac = factorize(self.gen, self.gen.at(delta, doppler_shift))
        rhs = np.zeros(self.gen.size, dtype=complex)
        rhs[fac.trace_row] = 1.0
        x0 = fac.solve(rhs)
        if self.check:
            check_density_matrix(self.gen.unvec(x0))
        pre = self.prefactor
        x = self._responses(fac, x0, list(self.perturbations))
        c11 = c12 = c21 = c22 = 0j
        if self.raise1 is not None:
            c11 = pre * np.sum(self.raise1 * x["a1"])
            if self.raise2 is not None:
                c12 = pre * np.sum(self.raise1 * x["a2c"])
        if self.raise2 is not None:
            c22 = pre * np.sum(self.raise2 * x["a2"])
            if self.raise1 is not None:
                c21 = pre * np.sum(self.raise2 * x["a1c"])
        return SusceptibilityMatrix(complex(c11), complex(c12), complex(c21), complex(c22))

    def sweep(self, deltas, doppler_shift: float = 0.0) -> SweepResult:
        """Evaluate on a detuning grid; singular points are recorded, not raised."""
        deltas = np.asarray(deltas, dtype=float)
        out, failures = [], {}
        for i, d in enumerate(deltas):
            try:
                out.append(self.at(float(d), doppler_shift))
            except SingularSystem as exc:
                log.warning("singular system at delta=%g: %s", d, exc)
                failures[i] = str(exc)
                out.append(None)
        return SweepResult(deltas, out, failures)


def linear_response_susceptibilities(
    scheme: LevelScheme,
    drives: DriveAssignment,
    deltas,
    density: float,
    probe1: str | None = "probe1",
    probe2: str | None = "probe2",
    doppler_shift: float = 0.0,
    reduce="auto",
    probe2_sign: float = 1.0,
) -> list:
    """Susceptibility matrices on a grid of probe detunings (rad/s).

    Entries are ``None`` where the steady-state system was singular; the
    reason is logged.
    """
    eng = ResponseEngine(scheme, drives, density, probe1, probe2, reduce=reduce, probe2_sign=probe2_sign)
    return eng.sweep(deltas, doppler_shift).chi
