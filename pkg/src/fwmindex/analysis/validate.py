"""Oracle cross-checks run by ``fwmindex validate``.

Every check is deterministic (fixed seeds, fixed grids) and the report
contains no timings, so two runs produce identical bytes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erfcx

from ..analytic import (
    enhancement_factor,
    fwm_chi_arrays,
    index_plus_array,
    zero_absorption_detuning,
)
from ..broadening import doppler_average, doppler_width
from ..core import NM, TWO_PI, FourLevelParams, SusceptibilityMatrix, dimensionless_density, mhz
from ..liouville.angular import wigner_coupling
from ..liouville.hyperfine import SPECIES, build_hyperfine_scheme
from ..liouville.models import four_level_drives, four_level_scheme
from ..liouville.response import ResponseEngine
from ..propagation import integrate_coupled, slab_transfer
from .spectrum import SpectrumResult, find_zero_absorption

GAMMA_R = mhz(6.035)
WAVELENGTH = 770.1 * NM


@dataclass(frozen=True)
class Check:
    name: str
    value: float
    bound: float
    ok: bool
    detail: str = ""

    def line(self) -> str:
        tag = "PASS" if self.ok else "FAIL"
        extra = f" ({self.detail})" if self.detail else ""
        return f"{tag} {self.name}: {self.value:.3e} vs bound {self.bound:.3e}{extra}"


def _rel(a, b) -> float:
    a, b = np.asarray(a), np.asarray(b)
    return float(np.max(np.abs(a - b)) / max(float(np.max(np.abs(b))), 1e-300))


def _random_params(rng) -> FourLevelParams:
    return FourLevelParams(
        control_rabi=10 ** rng.uniform(-1.5, 0.5) * GAMMA_R,
        optical_decay=0.5 * GAMMA_R,
        ground_decay=10 ** rng.uniform(-4, -1) * GAMMA_R,
        radiative_decay=GAMMA_R,
        density=10 ** rng.uniform(13, 15),
        wavelength=WAVELENGTH,
    )


def check_liouville_oracle(draws: int = 5, points: int = 201) -> Check:
    rng = np.random.default_rng(1)
    worst = 0.0
    for _ in range(draws):
        p = _random_params(rng)
        d = np.linspace(-3, 3, points) * p.optical_decay
        s = four_level_scheme(p)
        a = ResponseEngine(s, four_level_drives(s, p.control_rabi), p.density).sweep(d).arrays()
        ref = fwm_chi_arrays(p, d)
        for name, r in zip(("chi11", "chi12", "chi21", "chi22"), ref):
            worst = max(worst, _rel(a[name], r))
    return Check("liouville response vs closed-form four-level susceptibilities", worst, 1e-6, worst < 1e-6, f"{draws} draws x {points} points")


def check_closed_forms(samples: int = 2000) -> Check:
    rng = np.random.default_rng(2)
    worst = 0.0
    for _ in range(samples):
        p = _random_params(rng)
        d = rng.uniform(-3, 3) * p.optical_decay
        c11, c12, _, _ = fwm_chi_arrays(p, d)
        worst = max(worst, abs(index_plus_array(p, d) - TWO_PI * (c11 + c12)) / abs(TWO_PI * (c11 + c12)))
        try:
            ds = zero_absorption_detuning(p.control_rabi, p.optical_decay, p.ground_decay)
        except ValueError:
            continue
        n = index_plus_array(p, -ds)
        F = enhancement_factor(p.control_rabi, p.optical_decay, p.ground_decay, p.radiative_decay)
        r = dimensionless_density(p.density, p.wavelength)
        worst = max(worst, abs(n.real / r - F) / abs(F))
    return Check("index and enhancement closed forms vs susceptibility sums", worst, 1e-9, worst < 1e-9, f"{samples} samples")


def check_zero_root() -> Check:
    p = FourLevelParams(0.09 * GAMMA_R, 0.5 * GAMMA_R, 1e-3 * GAMMA_R, GAMMA_R, 1e14, WAVELENGTH)
    x = np.linspace(-3, 3, 601)
    n = index_plus_array(p, x * GAMMA_R)
    spec = SpectrumResult(x, n, n, refine=lambda xx, b, i: complex(index_plus_array(p, xx * GAMMA_R)))
    ds = zero_absorption_detuning(p.control_rabi, p.optical_decay, p.ground_decay) / GAMMA_R
    roots = sorted(r.delta for r in find_zero_absorption(spec))
    err = max(abs(roots[0] + ds), abs(roots[-1] - ds)) if len(roots) == 2 else math.inf
    return Check("zero-absorption roots vs closed-form detuning", err, 1e-8, err < 1e-8)


def check_doppler_width() -> Check:
    w = doppler_width(300.0, SPECIES["K40"].mass, TWO_PI / WAVELENGTH) / mhz(458.0)
    return Check("Doppler width at 300 K relative to 458 MHz", abs(w - 1), 1e-2, abs(w - 1) < 1e-2)


def check_voigt_peak() -> Check:
    W = doppler_width(300.0, SPECIES["K40"].mass, TWO_PI / WAVELENGTH)
    g = W
    avg = doppler_average(lambda s: g / (s * s + g * g), W, nodes=64, max_nodes=128)
    exact = math.sqrt(math.pi) / W * erfcx(g / W)
    err = abs(avg.value.real - exact) / exact
    return Check("Voigt line centre: quadrature vs erfc identity", err, 1e-6, err < 1e-6)


def check_slab(draws: int = 20) -> Check:
    rng = np.random.default_rng(3)
    worst = 0.0
    k = TWO_PI / WAVELENGTH
    for _ in range(draws):
        z = rng.normal(size=4) + 1j * rng.normal(size=4)
        chi = SusceptibilityMatrix(*(complex(v) * 1e-3 for v in z))
        L = rng.uniform(0, 1) * 1e-3
        e = complex(rng.normal(), rng.normal()), complex(rng.normal(), rng.normal())
        a = slab_transfer(chi, k, k, L).apply(*e)
        b = integrate_coupled(chi, k, k, 0.0, L, *e)
        worst = max(worst, _rel(a, b))
    eye = np.max(np.abs(slab_transfer(chi, k, k, 0.0).transfer - np.eye(2)))
    ok = worst < 1e-8 and eye == 0.0
    return Check("slab transfer vs ODE integration", worst, 1e-8, ok, f"L=0 identity deviation {eye:.1e}")


def check_dark_states() -> Check:
    s = build_hyperfine_scheme("K40")
    zero_k40 = sum(1 for c in s.couplings if c.strength == 0.0)
    synthetic = abs(wigner_coupling(1, 0, 1, 0, 0.5, 0.5, 1.5))
    ok = zero_k40 == 0 and synthetic == 0.0 and len(s.couplings) > 0
    return Check("dark-state structure (40K couplings nonzero, integer-F mF=0 zero)", float(zero_k40) + synthetic, 0.0, ok,
                 f"{len(s.couplings)} 40K couplings")


CHECKS = (
    check_liouville_oracle,
    check_closed_forms,
    check_zero_root,
    check_doppler_width,
    check_voigt_peak,
    check_slab,
    check_dark_states,
)


def run_validation() -> tuple[str, bool]:
    results = [c() for c in CHECKS]
    ok = all(r.ok for r in results)
    lines = [r.line() for r in results]
    lines.append(f"{sum(r.ok for r in results)}/{len(results)} checks passed")
    return "\n".join(lines) + "\n", ok
