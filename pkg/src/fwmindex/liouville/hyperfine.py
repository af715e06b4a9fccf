"""Hyperfine level schemes for potassium and drive layouts built on them.

Atomic constants are configuration data, not derived quantities; the
defaults below are standard tabulated values and can be replaced through
:class:`SpeciesData`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction

from ..core import AMU, MHZ, NM, TWO_PI, DomainError, dipole_from_radiative_decay, mhz
from .angular import wigner_coupling
from .scheme import (
    DecayChannel,
    Dephasing,
    DipoleCoupling,
    DriveAssignment,
    Field,
    LevelScheme,
    SchemeError,
    State,
)

C_CM = 2.99792458e10  # cm/s
DEFAULT_DECAY = mhz(6.035)


@dataclass(frozen=True)
class LineData:
    """An ``nS1/2 -> nP_J'`` line: wavelength in cm, constants in MHz."""

    name: str
    J: float
    wavelength: float
    decay: float
    A: float
    B: float = 0.0
    isotope_shift: float = 0.0


@dataclass(frozen=True)
class SpeciesData:
    name: str
    I: float
    mass: float  # g
    ground_A: float  # MHz
    lines: dict = field(default_factory=dict)

    def line(self, name: str) -> LineData:
        try:
            return self.lines[name]
        except KeyError:
            raise SchemeError(f"{self.name} has no line {name!r}") from None

    def with_decay(self, decay: float) -> "SpeciesData":
        return replace(self, lines={k: replace(v, decay=decay) for k, v in self.lines.items()})


SPECIES = {
    "K40": SpeciesData(
        "K40", 4.0, 39.96399848 * AMU, -285.7308,
        {
            "D1": LineData("D1", 0.5, 770.108 * NM, DEFAULT_DECAY, -34.523, 0.0, 125.58),
            "D2": LineData("D2", 1.5, 766.701 * NM, DEFAULT_DECAY, -7.585, -3.445, 125.58),
        },
    ),
    "K39": SpeciesData(
        "K39", 1.5, 38.96370668 * AMU, 230.8598601,
        {
            "D1": LineData("D1", 0.5, 770.108 * NM, DEFAULT_DECAY, 27.775, 0.0, 0.0),
            "D2": LineData("D2", 1.5, 766.701 * NM, DEFAULT_DECAY, 6.093, 2.786, 0.0),
        },
    ),
}

REFERENCE_WAVELENGTH = SPECIES["K39"].lines["D1"].wavelength


def hyperfine_shift(A: float, B: float, I: float, J: float, F: float) -> float:
    """Magnetic-dipole plus electric-quadrupole shift (same units as A, B)."""
    K = F * (F + 1) - I * (I + 1) - J * (J + 1)
    e = 0.5 * A * K
    if B and I > 0.5 and J > 0.5:
        e += B * (1.5 * K * (K + 1) - 2 * I * (I + 1) * J * (J + 1)) / (
            4 * I * (2 * I - 1) * J * (2 * J - 1)
        )
    return e


def _f_values(I: float, J: float) -> list[Fraction]:
    lo = abs(Fraction(I) - Fraction(J))
    return [lo + k for k in range(int(Fraction(I) + Fraction(J) - lo) + 1)]


def _fmt(x) -> str:
    return str(Fraction(x))


def level_label(species: str, term: str, F) -> str:
    return f"{species} {term} F={_fmt(F)}"


def _term(J: float) -> str:
    return "P1/2" if J == 0.5 else "P3/2"


def line_frequency(line: LineData) -> float:
    """Line centroid in rad/s relative to the reference optical frequency."""
    nu = C_CM / line.wavelength - C_CM / REFERENCE_WAVELENGTH
    return TWO_PI * nu + line.isotope_shift * MHZ


def build_hyperfine_scheme(
    species: str | SpeciesData = "K40",
    lines=("D1",),
    polarization: str = "pi",
    *,
    excited_F: dict | None = None,
    reference_line: str = "D1",
    optical_dephasing: float = 0.0,
    ground_dephasing: float = 0.0,
    ground_relaxation: float = 0.0,
) -> LevelScheme:
    """All ``|F, mF>`` sublevels of the ground state and the chosen excited levels.

    Parameters
    ----------
    species
        ``"K40"``, ``"K39"`` or a custom :class:`SpeciesData`.
    lines
        Lines whose excited manifolds are included, e.g. ``("D1", "D2")``.
    polarization
        Only ``"pi"`` is supported; dipole couplings are listed for
        ``mF -> mF`` only, while spontaneous decay uses all polarizations.
    excited_F
        Optional ``{line: [F', ...]}`` restricting the excited hyperfine levels.
    optical_dephasing
        Extra decay (rad/s) of every ground-excited coherence, e.g. collisions.
    ground_dephasing
        Decay (rad/s) of coherences between different ground hyperfine levels.
    ground_relaxation
        Total rate (rad/s) of incoherent redistribution among ground sublevels.
        Needed when some ground sublevels are dark to every field, otherwise
        the stationary state is not unique.
    """
    if polarization != "pi":
        raise SchemeError(f"unsupported polarization {polarization!r}; only 'pi' is implemented")
    if isinstance(species, str):
        if species not in SPECIES:
            raise SchemeError(f"unsupported species {species!r}")
        data = SPECIES[species]
    else:
        data = species
    ref = data.line(reference_line)
    mu_ref = dipole_from_radiative_decay(ref.decay, TWO_PI / ref.wavelength)

    states: list[State] = []
    ground_levels = []
    for F in _f_values(data.I, 0.5):
        lab = level_label(data.name, "S1/2", F)
        e = hyperfine_shift(data.ground_A, 0.0, data.I, 0.5, float(F)) * MHZ
        ground_levels.append((F, lab))
        for k in range(int(2 * F) + 1):
            m = -F + k
            states.append(State(f"{lab} m={_fmt(m)}", e, False, float(F), float(m), lab))

    couplings, decays = [], []
    excited_levels = []
    for lname in lines:
        line = data.line(lname)
        wanted = None if excited_F is None else excited_F.get(lname)
        mu = dipole_from_radiative_decay(line.decay, TWO_PI / line.wavelength)
        for Fp in _f_values(data.I, line.J):
            if wanted is not None and float(Fp) not in [float(x) for x in wanted]:
                continue
            lab = level_label(data.name, _term(line.J), Fp)
            e = line_frequency(line) + hyperfine_shift(line.A, line.B, data.I, line.J, float(Fp)) * MHZ
            excited_levels.append(lab)
            for k in range(int(2 * Fp) + 1):
                mp = -Fp + k
                up = f"{lab} m={_fmt(mp)}"
                states.append(State(up, e, True, float(Fp), float(mp), lab))
                for F, glab in ground_levels:
                    for q in (-1, 0, 1):
                        m = mp - q
                        if abs(m) > F:
                            continue
                        c = wigner_coupling(F, m, Fp, mp, 0.5, line.J, data.I)
                        if c == 0.0:
                            continue
                        lo = f"{glab} m={_fmt(m)}"
                        decays.append(
                            DecayChannel(up, lo, line.decay * c * c, group=f"{lab} -> {glab} q={q}", sign=math.copysign(1.0, c))
                        )
                        if q == 0:
                            couplings.append(DipoleCoupling(lo, up, c * mu / mu_ref, f"{glab} -> {lab}"))
    if not excited_levels:
        raise SchemeError("no excited levels selected")

    deph = []
    ground = [s for s in states if not s.excited]
    excited = [s for s in states if s.excited]
    if optical_dephasing > 0:
        deph += [Dephasing(g.label, e.label, optical_dephasing) for g in ground for e in excited]
    if ground_dephasing > 0:
        deph += [
            Dephasing(a.label, b.label, ground_dephasing)
            for i, a in enumerate(ground) for b in ground[i + 1:] if a.level != b.level
        ]
    if ground_relaxation > 0:
        rate = ground_relaxation / len(ground)
        decays += [
            DecayChannel(a.label, b.label, rate) for a in ground for b in ground if a is not b
        ]
    return LevelScheme(
        tuple(states), tuple(couplings), tuple(decays), tuple(deph),
        reference_decay=ref.decay, reference_wavelength=ref.wavelength,
        name=f"{data.name} {'+'.join(lines)}",
    )


def level_energy(scheme: LevelScheme, level: str) -> float:
    for s in scheme.states:
        if s.level == level:
            return s.energy
    raise SchemeError(f"scheme has no level {level!r}")


def transition_frequency(scheme: LevelScheme, lower: str, upper: str) -> float:
    return level_energy(scheme, upper) - level_energy(scheme, lower)


def k40_fwm_levels(upper4: str = "D1") -> dict[int, str]:
    """Assignment of the four FWM levels to 40K hyperfine levels.

    ``upper4="D2"`` places level 4 in the ``4P3/2 F'=9/2`` manifold.
    """
    lv = {
        1: level_label("K40", "S1/2", Fraction(9, 2)),
        2: level_label("K40", "S1/2", Fraction(7, 2)),
        3: level_label("K40", "P1/2", Fraction(9, 2)),
    }
    if upper4 == "D1":
        lv[4] = level_label("K40", "P1/2", Fraction(7, 2))
    elif upper4 == "D2":
        lv[4] = level_label("K40", "P3/2", Fraction(9, 2))
    else:
        raise SchemeError("level 4 must lie in the D1 or D2 manifold")
    return lv


def fwm_drives(
    scheme: LevelScheme,
    levels: dict[int, str],
    control_rabi: float,
    control_rabi_2: float | None = None,
    control_offsets: tuple[float, float] = (0.0, 0.0),
) -> DriveAssignment:
    """Controls on 1-3 and 2-4, probe 1 on 1-4 and probe 2 on 2-3.

    Controls sit on the line centres plus ``control_offsets``; probe 2 is set
    by frequency matching so the loop closes at every probe detuning.
    """
    w = lambda a, b: transition_frequency(scheme, levels[a], levels[b])
    line = lambda a, b: f"{levels[a]} -> {levels[b]}"
    wc1 = w(1, 3) + control_offsets[0]
    wc2 = w(2, 4) + control_offsets[1]
    w1 = w(1, 4)
    w2 = wc1 + wc2 - w1
    om2 = control_rabi if control_rabi_2 is None else control_rabi_2
    return DriveAssignment(
        (
            Field("control1", wc1, control_rabi, (line(1, 3),)),
            Field("control2", wc2, om2, (line(2, 4),)),
            Field("probe1", w1, 0.0, (line(1, 4),), probe=True, sweep=1.0),
            Field("probe2", w2, 0.0, (line(2, 3),), probe=True, sweep=-1.0),
        ),
        fwm_closure=True,
    )


def raman_absorber_drives(
    scheme: LevelScheme,
    probe_frequency: float,
    control_rabi: float,
    raman_offset: float,
    lower_F,
    upper_F,
) -> DriveAssignment:
    """Probe 2 from ground ``lower_F`` and a control from ground ``upper_F``.

    Both address every excited hyperfine level present. The control is placed
    so that the two-photon resonance falls at probe detuning ``raman_offset``;
    ``probe_frequency`` is the probe-2 frequency at zero detuning (shared with
    the FWM medium), which is swept as ``probe_frequency + delta``.
    """
    species = scheme.states[0].label.split()[0]
    g_lo = level_label(species, "S1/2", Fraction(lower_F).limit_denominator())
    g_up = level_label(species, "S1/2", Fraction(upper_F).limit_denominator())
    excited = []
    for s in scheme.states:
        if s.excited and s.level not in excited:
            excited.append(s.level)
    split = level_energy(scheme, g_up) - level_energy(scheme, g_lo)
    wc = probe_frequency + raman_offset - split
    return DriveAssignment(
        (
            Field("probe2", probe_frequency, 0.0, tuple(f"{g_lo} -> {e}" for e in excited), probe=True, sweep=-1.0),
            Field("control", wc, control_rabi, tuple(f"{g_up} -> {e}" for e in excited)),
        )
    )


def loop_sign(scheme: LevelScheme, drives: DriveAssignment, names=("control1", "control2", "probe1", "probe2")) -> float:
    """Sign of ``sum_m c13 c24 c14 c23`` around the FWM loop.

    The four-level formulas assume a positive loop product; for a multilevel
    scheme with a negative one, using ``probe2_sign=-1`` restores that
    convention (it only relabels the phase of the second probe).
    """
    lines = [set(drives.field(n).lines) for n in names]
    by_m: dict[float, list[float]] = {}
    for c in scheme.couplings:
        for k, ls in enumerate(lines):
            if c.line in ls:
                m = next(s.mF for s in scheme.states if s.label == c.lower)
                by_m.setdefault(m, [0.0] * 4)[k] += c.strength
    total = sum(math.prod(v) for v in by_m.values())
    return -1.0 if total < 0 else 1.0


def isolated_ground_sublevels(scheme: LevelScheme, drives: DriveAssignment) -> list[str]:
    """Ground sublevels with no non-zero coupling to any non-probe field."""
    driven = {line for f in drives.fields if not f.probe for line in f.lines}
    touched = {c.lower for c in scheme.couplings if c.line in driven and c.strength != 0.0}
    return [s.label for s in scheme.states if not s.excited and s.label not in touched]


def require_species(name: str) -> SpeciesData:
    if name not in SPECIES:
        raise DomainError(f"unsupported species {name!r}")
    return SPECIES[name]
