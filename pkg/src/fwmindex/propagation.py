"""Coupled propagation of the two probe fields.

The field pair is ``(E1, E2*)``. With phase matching it obeys
``d/dz (E1, E2*) = M (E1, E2*)`` where

    M = 2 pi i [[ k1 chi11,    k1 chi12  ],
                [-k2 chi21*,  -k2 chi22* ]]

whose eigenvalues are the propagation constants ``lambda_+-``. Fields grow as
``exp(lambda z)`` so ``dn' = Im(lambda)/k`` and ``dn'' = -Re(lambda)/k``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence, Union

import numpy as np
from scipy.integrate import solve_ivp

from .core import ComplexIndex, DomainError, PropagationConstants, SusceptibilityMatrix


class AsymptoteNotValid(DomainError):
    pass


class IntegrationFailure(RuntimeError):
    pass


def coupling_matrix(chi: SusceptibilityMatrix, k1: float, k2: float) -> np.ndarray:
    return 2j * math.pi * np.array(
        [
            [k1 * chi.chi11, k1 * chi.chi12],
            [-k2 * np.conj(chi.chi21), -k2 * np.conj(chi.chi22)],
        ]
    )


def _mode_terms(chi: SusceptibilityMatrix, k1: float, k2: float):
    mean = k1 * chi.chi11 - k2 * np.conj(chi.chi22)
    split = k1 * chi.chi11 + k2 * np.conj(chi.chi22)
    s2 = split * split - 4.0 * k1 * k2 * chi.chi12 * np.conj(chi.chi21)
    return complex(mean), complex(split), complex(s2)


def _reference_root(chi: SusceptibilityMatrix, k1: float, k2: float, split: complex) -> complex:
    # Exact root 2 k chi12 for the symmetric medium, and k1 chi11 + k2 chi22*
    # when the probes decouple.
    return split + 2.0 * math.sqrt(k1 * k2) * chi.chi12


def propagation_constants(
    chi: SusceptibilityMatrix,
    k1: float,
    k2: float,
    previous: PropagationConstants | None = None,
) -> PropagationConstants:
    """Eigen-constants ``lambda_+-`` of the phase-matched probe equations.

    Without ``previous`` the root is labelled so that ``lambda_+`` is the mode
    continuously connected to ``2 pi i k (chi11 + chi12)`` of the symmetric
    medium. With ``previous`` (a neighbouring grid point) the labels follow
    nearest-neighbour continuity instead.
    """
    mean, split, s2 = _mode_terms(chi, k1, k2)
    s = complex(np.sqrt(s2))
    a = 1j * math.pi * (mean + s)
    b = 1j * math.pi * (mean - s)
    if previous is None:
        ref = _reference_root(chi, k1, k2, split)
        if (s * ref.conjugate()).real < 0:
            a, b = b, a
        return PropagationConstants(a, b, "reference")
    keep = abs(a - previous.lambda_plus) + abs(b - previous.lambda_minus)
    swap = abs(b - previous.lambda_plus) + abs(a - previous.lambda_minus)
    if swap < keep:
        a, b = b, a
    return PropagationConstants(a, b, "continuity")


def propagation_constants_along(
    chis: Sequence[SusceptibilityMatrix], k1: float, k2: float
) -> list[PropagationConstants]:
    """Constants along an ordered detuning grid with continuous branches."""
    out: list[PropagationConstants] = []
    prev = None
    for chi in chis:
        prev = propagation_constants(chi, k1, k2, prev)
        out.append(prev)
    return out


def propagation_constant_arrays(c11, c12, c21, c22, k1: float, k2: float):
    """Vectorized reference-labelled ``(lambda_plus, lambda_minus)``."""
    c11, c12, c21, c22 = (np.asarray(c, dtype=complex) for c in (c11, c12, c21, c22))
    mean = k1 * c11 - k2 * np.conj(c22)
    split = k1 * c11 + k2 * np.conj(c22)
    s = np.sqrt(split * split - 4.0 * k1 * k2 * c12 * np.conj(c21))
    ref = split + 2.0 * math.sqrt(k1 * k2) * c12
    s = np.where((s * np.conj(ref)).real < 0, -s, s)
    return 1j * math.pi * (mean + s), 1j * math.pi * (mean - s)


def continue_branches(lp, lm, positions, anchor_position, anchor_plus, anchor_minus):
    """Relabel ``(lp, lm)`` so both branches vary smoothly along ``positions``.

    ``lp`` and ``lm`` have the sample axis first (further axes are independent
    columns). Labels at the samples next to ``anchor_position`` are matched to
    the anchor values, then each step outward keeps the assignment closest to
    a linear extrapolation of the two previous samples. Returns new arrays.
    """
    lp = np.array(lp, dtype=complex)
    lm = np.array(lm, dtype=complex)
    x = np.asarray(positions, dtype=float)
    if np.any(np.diff(x) <= 0):
        raise ValueError("positions must be strictly increasing")
    start = int(np.searchsorted(x, anchor_position))
    ax = float(anchor_position)
    a0 = np.asarray(anchor_plus, dtype=complex)
    b0 = np.asarray(anchor_minus, dtype=complex)
    for order in (range(start, len(x)), range(start - 1, -1, -1)):
        hist = [(ax, a0, b0)]
        for i in order:
            if len(hist) == 1 or hist[-1][0] == hist[-2][0]:
                pa, pb = hist[-1][1], hist[-1][2]
            else:
                (x1, a1, b1), (x2, a2, b2) = hist[-2], hist[-1]
                t = (x[i] - x2) / (x2 - x1)
                pa, pb = a2 + t * (a2 - a1), b2 + t * (b2 - b1)
            keep = np.abs(lp[i] - pa) + np.abs(lm[i] - pb)
            swap = np.abs(lm[i] - pa) + np.abs(lp[i] - pb)
            flip = swap < keep
            lp[i], lm[i] = np.where(flip, lm[i], lp[i]), np.where(flip, lp[i], lm[i])
            hist = [hist[-1], (x[i], lp[i].copy(), lm[i].copy())]
    return lp, lm


def index_from_constant(lam: complex, k: float) -> ComplexIndex:
    if not k > 0:
        raise DomainError("wavevector must be positive")
    return ComplexIndex(lam.imag / k, -lam.real / k)


@dataclass(frozen=True)
class SlabSolution:
    """Transfer matrix of a phase-matched slab acting on ``(E1(0), E2*(0))``."""

    transfer: np.ndarray
    thickness: float
    s: complex
    mean: complex

    def apply(self, e1: complex, e2c: complex) -> tuple[complex, complex]:
        out = self.transfer @ np.array([e1, e2c], dtype=complex)
        return complex(out[0]), complex(out[1])


def _sinc(x: complex) -> complex:
    """``sin(pi x) / (pi x)`` for complex ``x``, series near zero."""
    y = math.pi * x
    if abs(y) < 1e-3:
        y2 = y * y
        return 1.0 - y2 / 6.0 + y2 * y2 / 120.0
    return complex(np.sin(y) / y)


def slab_transfer(chi: SusceptibilityMatrix, k1: float, k2: float, thickness: float) -> SlabSolution:
    """Finite-thickness closed-form solution.

    Only even functions of ``S`` appear, so the branch of the square root is
    irrelevant; ``sin(pi S L)/S`` is evaluated through ``sinc`` which also
    covers ``S = 0``.
    """
    if thickness < 0:
        raise DomainError("thickness must be >= 0")
    mean, split, s2 = _mode_terms(chi, k1, k2)
    s = complex(np.sqrt(s2))
    L = thickness
    cos_t = np.cos(math.pi * s * L)
    sin_over_s = math.pi * L * _sinc(s * L)  # sin(pi S L) / S
    phase = np.exp(1j * math.pi * mean * L)
    m = phase * np.array(
        [
            [cos_t + 1j * split * sin_over_s, 2j * k1 * chi.chi12 * sin_over_s],
            [-2j * k2 * np.conj(chi.chi21) * sin_over_s, cos_t - 1j * split * sin_over_s],
        ]
    )
    return SlabSolution(m, L, s, mean)


def slab_asymptotic(
    chi: SusceptibilityMatrix,
    k1: float,
    k2: float,
    thickness: float,
    e1: complex,
    e2c: complex,
    threshold: float = 8.0,
) -> tuple[complex, complex]:
    """Deep-medium fields once the ``lambda_-`` mode has died out.

    Valid when ``(Re lambda_+ - Re lambda_-) L`` exceeds ``threshold``.
    """
    pc = propagation_constants(chi, k1, k2)
    attenuation = (pc.lambda_plus.real - pc.lambda_minus.real) * thickness
    if attenuation <= threshold:
        raise AsymptoteNotValid(
            f"relative attenuation {attenuation:.3g} of the lambda_- mode is below {threshold}"
        )
    mean, split, _ = _mode_terms(chi, k1, k2)
    s = (pc.lambda_plus / (1j * math.pi)) - mean  # root matching lambda_+
    grow = np.exp(pc.lambda_plus * thickness) / (2.0 * s)
    out1 = grow * (e1 * (split + s) + 2.0 * k1 * chi.chi12 * e2c)
    out2 = grow * (-2.0 * k2 * np.conj(chi.chi21) * e1 + e2c * (s - split))
    return complex(out1), complex(out2)


ChiSource = Union[SusceptibilityMatrix, Callable[[float], SusceptibilityMatrix]]


def integrate_coupled(
    chi: ChiSource,
    k1: float,
    k2: float,
    mismatch: float,
    thickness: float,
    e1: complex,
    e2c: complex,
    rtol: float = 1e-10,
    atol: float = 1e-14,
) -> tuple[complex, complex]:
    """Numerically integrate the coupled probe equations for ``(E1, E2*)``.

    ``chi`` may be a function of ``z`` (cm). ``mismatch`` is the wavevector
    mismatch in 1/cm entering as ``exp(+-i mismatch z)`` on the cross terms.
    """
    if thickness < 0:
        raise DomainError("thickness must be >= 0")
    y0 = np.array([e1, e2c], dtype=complex)
    if thickness == 0:
        return complex(y0[0]), complex(y0[1])
    const = None if callable(chi) else chi

    def rhs(z, y):
        c = const if const is not None else chi(z)
        ph = np.exp(1j * mismatch * z)
        return 2j * math.pi * np.array(
            [
                k1 * c.chi11 * y[0] + k1 * c.chi12 * ph * y[1],
                -k2 * np.conj(c.chi22) * y[1] - k2 * np.conj(c.chi21) / ph * y[0],
            ]
        )

    scale = max(abs(e1), abs(e2c), 1e-300)
    sol = solve_ivp(rhs, (0.0, thickness), y0, method="DOP853", rtol=rtol, atol=atol * scale)
    if not sol.success:
        raise IntegrationFailure(f"integration failed at z={sol.t[-1]:.6g} cm: {sol.message}")
    return complex(sol.y[0, -1]), complex(sol.y[1, -1])
