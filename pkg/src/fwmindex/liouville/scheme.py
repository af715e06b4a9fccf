"""Level schemes and drive assignments for the density-matrix engine.

Energies and field frequencies are angular frequencies (rad/s) measured from a
common optical reference frequency, so that optical detunings are formed from
numbers of order GHz rather than 1e15 rad/s.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Iterable

import yaml

from ..core import DomainError


class SchemeError(ValueError):
    """A level scheme or drive assignment is inconsistent."""


@dataclass(frozen=True)
class State:
    label: str
    energy: float
    excited: bool
    F: float | None = None
    mF: float | None = None
    level: str = ""


@dataclass(frozen=True)
class DipoleCoupling:
    """Dipole matrix element ``strength * mu_ref`` between two states.

    ``line`` groups couplings that one field addresses together (for example
    all mF components of an ``F -> F'`` transition).
    """

    lower: str
    upper: str
    strength: float
    line: str = ""


@dataclass(frozen=True)
class DecayChannel:
    """Incoherent transfer ``upper -> lower`` at ``rate``.

    Channels that share a ``group`` form one jump operator, with relative
    amplitude signs ``sign``; that is how spontaneous emission of one
    polarization carries excited-state coherence to the ground states.
    """

    upper: str
    lower: str
    rate: float
    group: str | None = None
    sign: float = 1.0


@dataclass(frozen=True)
class Dephasing:
    """Extra decay of the coherence ``rho_ab`` (rad/s); ``inf`` pins it to zero."""

    a: str
    b: str
    rate: float


@dataclass(frozen=True)
class LevelScheme:
    states: tuple[State, ...]
    couplings: tuple[DipoleCoupling, ...]
    decays: tuple[DecayChannel, ...]
    dephasing: tuple[Dephasing, ...] = ()
    reference_decay: float = 1.0
    reference_wavelength: float = 1.0
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "couplings", tuple(self.couplings))
        object.__setattr__(self, "decays", tuple(self.decays))
        object.__setattr__(self, "dephasing", tuple(self.dephasing))
        labels = [s.label for s in self.states]
        if len(set(labels)) != len(labels):
            raise SchemeError("state labels must be unique")
        lookup = {s.label: s for s in self.states}
        for s in self.states:
            if not math.isfinite(s.energy):
                raise SchemeError(f"state {s.label} has a non-finite energy")
        for c in self.couplings:
            lo, up = lookup.get(c.lower), lookup.get(c.upper)
            if lo is None or up is None:
                raise SchemeError(f"coupling {c.lower}->{c.upper} names an unknown state")
            if lo.excited or not up.excited:
                raise SchemeError(f"coupling {c.lower}->{c.upper} must join a ground and an excited state")
        for d in self.decays:
            if d.upper not in lookup or d.lower not in lookup:
                raise SchemeError(f"decay {d.upper}->{d.lower} names an unknown state")
            if not d.rate >= 0:
                raise SchemeError(f"decay {d.upper}->{d.lower} has a negative rate")
        for d in self.dephasing:
            if d.a not in lookup or d.b not in lookup or d.a == d.b:
                raise SchemeError(f"dephasing {d.a},{d.b} is not a valid state pair")
            if not d.rate >= 0:
                raise SchemeError("dephasing rates must be >= 0")
        if not (self.reference_decay > 0 and self.reference_wavelength > 0):
            raise SchemeError("reference decay and wavelength must be positive")

    @property
    def n(self) -> int:
        return len(self.states)

    @property
    def labels(self) -> list[str]:
        return [s.label for s in self.states]

    def index(self, label: str) -> int:
        for i, s in enumerate(self.states):
            if s.label == label:
                return i
        raise KeyError(label)

    def total_decay(self, label: str) -> float:
        return sum(d.rate for d in self.decays if d.upper == label)

    def lines(self) -> list[str]:
        seen: dict[str, None] = {}
        for c in self.couplings:
            seen.setdefault(c.line, None)
        return list(seen)

    def with_dephasing(self, extra: Iterable[Dephasing]) -> "LevelScheme":
        return replace(self, dephasing=self.dephasing + tuple(extra))

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "reference_decay": self.reference_decay,
            "reference_wavelength": self.reference_wavelength,
            "states": [asdict(s) for s in self.states],
            "couplings": [asdict(c) for c in self.couplings],
            "decays": [asdict(d) for d in self.decays],
            "dephasing": [asdict(d) for d in self.dephasing],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "LevelScheme":
        return cls(
            states=tuple(State(**s) for s in data["states"]),
            couplings=tuple(DipoleCoupling(**c) for c in data.get("couplings", ())),
            decays=tuple(DecayChannel(**d) for d in data.get("decays", ())),
            dephasing=tuple(Dephasing(**d) for d in data.get("dephasing", ())),
            reference_decay=float(data.get("reference_decay", 1.0)),
            reference_wavelength=float(data.get("reference_wavelength", 1.0)),
            name=str(data.get("name", "")),
        )

    def dumps(self) -> str:
        return yaml.safe_dump(self.to_dict(), sort_keys=False)

    @classmethod
    def loads(cls, text: str) -> "LevelScheme":
        return cls.from_dict(yaml.safe_load(text))

    def save(self, path) -> None:
        Path(path).write_text(self.dumps(), encoding="utf-8")

    @classmethod
    def load(cls, path) -> "LevelScheme":
        return cls.loads(Path(path).read_text(encoding="utf-8"))


@dataclass(frozen=True)
class Field:
    """A monochromatic field addressing whole lines of a scheme.

    ``frequency`` is taken at zero probe detuning; a sweep to probe detuning
    ``delta`` moves it to ``frequency - sweep * delta``. ``rabi`` multiplies
    each coupling's strength, so the Rabi frequency of a coupling of strength
    ``c`` is ``c * rabi`` (half the textbook full Rabi frequency).
    """

    name: str
    frequency: float
    rabi: float
    lines: tuple[str, ...]
    probe: bool = False
    sweep: float = 0.0
    k_sign: int = 1

    def __post_init__(self):
        object.__setattr__(self, "lines", tuple(self.lines))


@dataclass(frozen=True)
class DriveAssignment:
    fields: tuple[Field, ...]
    fwm_closure: bool = False

    def __post_init__(self):
        object.__setattr__(self, "fields", tuple(self.fields))
        names = [f.name for f in self.fields]
        if len(set(names)) != len(names):
            raise SchemeError("field names must be unique")
        owner: dict[str, str] = {}
        for f in self.fields:
            for line in f.lines:
                if line in owner:
                    raise SchemeError(f"line {line!r} addressed by both {owner[line]} and {f.name}")
                owner[line] = f.name

    def field(self, name: str) -> Field:
        for f in self.fields:
            if f.name == name:
                return f
        raise KeyError(name)

    def with_rabi(self, **rabis: float) -> "DriveAssignment":
        return replace(
            self, fields=tuple(replace(f, rabi=rabis.get(f.name, f.rabi)) for f in self.fields)
        )

    def frequencies(self, delta: float = 0.0) -> dict[str, float]:
        return {f.name: f.frequency - f.sweep * delta for f in self.fields}

    def check_matching(self, scheme: LevelScheme, tol: float = 1e-6) -> None:
        """Frequency matching of a closed FWM loop (checked through the frame)."""
        rotating_frame(scheme, self, 0.0)
        rotating_frame(scheme, self, 1.0)

    def to_dict(self) -> dict:
        return {"fwm_closure": self.fwm_closure, "fields": [asdict(f) for f in self.fields]}

    @classmethod
    def from_dict(cls, data: dict) -> "DriveAssignment":
        fields_ = []
        for f in data["fields"]:
            f = dict(f)
            f["lines"] = tuple(f["lines"])
            fields_.append(Field(**f))
        return cls(tuple(fields_), bool(data.get("fwm_closure", False)))


def rotating_frame(scheme: LevelScheme, drives: DriveAssignment, delta: float = 0.0):
    """Frame frequencies ``theta`` (one per state) in which every drive is static.

    The frame is built on levels (``State.level``, or the label when empty),
    so all sublevels of a hyperfine level share one frame frequency. An upper
    level rotates at ``theta_lower + omega_field``; a loop whose frequencies
    do not close raises ``SchemeError``. Undriven levels rotate at their own
    energy, and each connected group is anchored on its first ground level.
    """
    freqs = drives.frequencies(delta)
    line_field = {line: f.name for f in drives.fields for line in f.lines}
    key = {s.label: (s.level or s.label) for s in scheme.states}
    levels: dict[str, State] = {}
    for s in scheme.states:
        levels.setdefault(key[s.label], s)
    adj: dict[str, list[tuple[str, float]]] = {lv: [] for lv in levels}
    for c in scheme.couplings:
        fname = line_field.get(c.line)
        if fname is None or c.strength == 0:
            continue
        lo, up = key[c.lower], key[c.upper]
        w = freqs[fname]
        adj[lo].append((up, w))
        adj[up].append((lo, -w))
    scale = max([abs(s.energy) for s in scheme.states] + [abs(v) for v in freqs.values()] + [1.0])
    theta: dict[str, float] = {}
    for root in levels:
        if root in theta:
            continue
        theta[root] = levels[root].energy
        stack, comp = [root], []
        while stack:
            a = stack.pop()
            comp.append(a)
            for b, w in adj[a]:
                t = theta[a] + w
                if b not in theta:
                    theta[b] = t
                    stack.append(b)
                elif abs(theta[b] - t) > 1e-9 * scale:
                    raise SchemeError(
                        "drives admit no co-rotating frame: frequency mismatch "
                        f"{theta[b] - t:.6g} rad/s around a loop through {b}"
                    )
        ground = [a for a in comp if not levels[a].excited]
        if ground:
            shift = levels[ground[0]].energy - theta[ground[0]]
            for a in comp:
                theta[a] += shift
    return [theta[key[s.label]] for s in scheme.states]


def require_domain(cond: bool, msg: str) -> None:
    if not cond:
        raise DomainError(msg)
