"""Ready-made schemes for the idealized four-level FWM medium."""

from __future__ import annotations

import math

from ..core import FourLevelParams
from .scheme import DecayChannel, Dephasing, DipoleCoupling, DriveAssignment, Field, LevelScheme, State

OPTICAL_PAIRS = (("1", "3"), ("1", "4"), ("2", "3"), ("2", "4"))


def four_level_scheme(p: FourLevelParams, *, clamp_excited_coherence: bool = True, splitting: float = 0.0) -> LevelScheme:
    """Double-Lambda scheme ``|1>,|2>`` (ground) and ``|3>,|4>`` (excited).

    Each excited state decays to each ground state at ``Gamma_r/2``; extra
    dephasing brings every optical coherence to ``p.optical_decay``. With
    ``clamp_excited_coherence`` the 3-4 coherence is held at zero (its decay
    rate taken to infinity), which is the limit the closed-form
    susceptibilities describe.
    """
    gr = p.radiative_decay
    extra = p.optical_decay - 0.5 * gr
    if extra < 0:
        raise ValueError("optical_decay must be at least radiative_decay / 2")
    states = (
        State("1", 0.0, False),
        State("2", splitting, False),
        State("3", 0.0, True),
        State("4", splitting, True),
    )
    couplings = (
        DipoleCoupling("1", "3", 1.0, "c1"),
        DipoleCoupling("2", "4", 1.0, "c2"),
        DipoleCoupling("1", "4", 1.0, "p1"),
        DipoleCoupling("2", "3", 1.0, "p2"),
    )
    decays = tuple(DecayChannel(e, g, 0.5 * gr) for g, e in OPTICAL_PAIRS)
    deph = [Dephasing(g, e, extra) for g, e in OPTICAL_PAIRS if extra > 0]
    if p.ground_decay > 0:
        deph.append(Dephasing("1", "2", p.ground_decay))
    if clamp_excited_coherence:
        deph.append(Dephasing("3", "4", math.inf))
    return LevelScheme(
        states, couplings, decays, tuple(deph),
        reference_decay=gr, reference_wavelength=p.wavelength, name="four-level",
    )


def four_level_drives(scheme: LevelScheme, control_rabi: float) -> DriveAssignment:
    """Equal controls on 1-3 and 2-4; probe 1 on 1-4 and probe 2 on 2-3.

    Probe detuning ``delta`` lowers probe 1 and raises probe 2 by ``delta``.
    """
    e = {s.label: s.energy for s in scheme.states}
    return DriveAssignment(
        (
            Field("control1", e["3"] - e["1"], control_rabi, ("c1",)),
            Field("control2", e["4"] - e["2"], control_rabi, ("c2",)),
            Field("probe1", e["4"] - e["1"], 0.0, ("p1",), probe=True, sweep=1.0),
            Field("probe2", e["3"] - e["2"], 0.0, ("p2",), probe=True, sweep=-1.0),
        ),
        fwm_closure=True,
    )
