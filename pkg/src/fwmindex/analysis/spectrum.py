"""Spectrum tables, zero-absorption search and deterministic file output."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np
from scipy.optimize import brentq

from ..core import DomainError

COLUMNS = ("delta_over_gamma_r", "dn_plus_re", "dn_plus_im", "dn_minus_re", "dn_minus_im")
DISCREPANCY = "discrepancy"


@dataclass
class SpectrumResult:
    """Complex index of both propagation modes on a detuning grid.

    ``delta`` is in units of the radiative rate. ``refine`` (not serialized)
    evaluates the index of one branch at an off-grid detuning and is used to
    polish zero crossings.
    """

    delta: np.ndarray
    dn_plus: np.ndarray
    dn_minus: np.ndarray
    metadata: dict = field(default_factory=dict)
    discrepancy: np.ndarray | None = None
    analysis: dict = field(default_factory=dict)
    refine: Callable | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self.delta = np.asarray(self.delta, dtype=float)
        self.dn_plus = np.asarray(self.dn_plus, dtype=complex)
        self.dn_minus = np.asarray(self.dn_minus, dtype=complex)
        if self.discrepancy is not None:
            self.discrepancy = np.asarray(self.discrepancy, dtype=float)
        if len(self.delta) > 1 and np.any(np.diff(self.delta) <= 0):
            raise ValueError("spectrum rows must be sorted by detuning")

    def __len__(self) -> int:
        return len(self.delta)

    def branch(self, name: str) -> np.ndarray:
        if name in ("plus", "+"):
            return self.dn_plus
        if name in ("minus", "-"):
            return self.dn_minus
        raise ValueError(f"unknown branch {name!r}")

    def rows(self) -> list[tuple]:
        out = []
        for i, d in enumerate(self.delta):
            row = (float(d), self.dn_plus[i].real, self.dn_plus[i].imag, self.dn_minus[i].real, self.dn_minus[i].imag)
            if self.discrepancy is not None:
                row = row + (float(self.discrepancy[i]),)
            out.append(row)
        return out

    def same_values(self, other: "SpectrumResult") -> bool:
        eq = (
            np.array_equal(self.delta, other.delta)
            and np.array_equal(self.dn_plus, other.dn_plus)
            and np.array_equal(self.dn_minus, other.dn_minus)
        )
        if (self.discrepancy is None) != (other.discrepancy is None):
            return False
        if self.discrepancy is not None:
            eq = eq and np.array_equal(self.discrepancy, other.discrepancy)
        return bool(eq)


@dataclass(frozen=True)
class ZeroCrossing:
    delta: float
    dn_real: float
    direction: str  # "down": absorption -> gain with increasing delta
    residual: float

    def to_dict(self) -> dict:
        return {"delta_over_gamma_r": self.delta, "dn_real": self.dn_real, "direction": self.direction, "residual": self.residual}


@dataclass(frozen=True)
class GainCheck:
    ok: bool
    minimum: float
    window: tuple[float, float]

    def to_dict(self) -> dict:
        return {"no_gain": self.ok, "min_dn_imag": self.minimum, "window": list(self.window)}


def find_zero_absorption(spectrum: SpectrumResult, branch: str = "plus", tol: float = 1e-10) -> list[ZeroCrossing]:
    """Detunings where the branch absorption changes sign.

    Sign changes on the grid are bracketed and, when the spectrum carries a
    ``refine`` callback, polished with Brent's method on the underlying
    engine; otherwise linear interpolation is used. Sorted by ``|dn'|``,
    largest first. No sign change gives an empty list.
    """
    if len(spectrum) < 2:
        raise DomainError("spectrum needs at least two rows")
    d = spectrum.delta
    n = spectrum.branch(branch)
    im = n.imag
    roots: list[ZeroCrossing] = []
    i = 0
    while i < len(d) - 1:
        a, b = im[i], im[i + 1]
        if a == 0.0:
            roots.append(ZeroCrossing(float(d[i]), float(n[i].real), _direction(im, i), 0.0))
            i += 1
            continue
        if a * b < 0:
            roots.append(_refine(spectrum, branch, i, tol))
        i += 1
    if im[-1] == 0.0:
        roots.append(ZeroCrossing(float(d[-1]), float(n[-1].real), _direction(im, len(d) - 1), 0.0))
    roots.sort(key=lambda r: (-abs(r.dn_real), r.delta))
    return roots


def _direction(im, i) -> str:
    lo = im[i - 1] if i > 0 else im[i]
    hi = im[i + 1] if i + 1 < len(im) else im[i]
    return "down" if hi < lo else "up"


def _refine(spectrum: SpectrumResult, branch: str, i: int, tol: float) -> ZeroCrossing:
    d = spectrum.delta
    n = spectrum.branch(branch)
    direction = "down" if n[i + 1].imag < n[i].imag else "up"
    if spectrum.refine is not None:
        f = lambda x: spectrum.refine(x, branch, i).imag
        fa, fb = f(d[i]), f(d[i + 1])
        if fa * fb < 0:
            x = brentq(f, d[i], d[i + 1], xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)
            val = spectrum.refine(x, branch, i)
            # the last bracket may stall on a very steep crossing
            if abs(val.imag) > tol:
                lo, hi = (d[i], d[i + 1])
                for _ in range(200):
                    mid = 0.5 * (lo + hi)
                    fm = f(mid)
                    if abs(fm) <= tol or hi - lo < 1e-15:
                        x, val = mid, spectrum.refine(mid, branch, i)
                        break
                    if (fm < 0) == (fa < 0):
                        lo = mid
                    else:
                        hi = mid
            return ZeroCrossing(float(x), float(val.real), direction, float(abs(val.imag)))
    t = n[i].imag / (n[i].imag - n[i + 1].imag)
    x = d[i] + t * (d[i + 1] - d[i])
    re = n[i].real + t * (n[i + 1].real - n[i].real)
    return ZeroCrossing(float(x), float(re), direction, math.nan)


def check_no_nearby_gain(
    spectrum: SpectrumResult,
    root,
    window_width: float,
    tolerance: float = 1e-9,
    branch: str = "plus",
    neighborhood: float | None = None,
) -> GainCheck:
    """Is the branch free of gain within ``root +- window_width``?

    Points within ``neighborhood`` of the root (default 1.5 grid steps) are
    excluded. Raises ``DomainError`` when the window leaves the grid.
    """
    x0 = root.delta if isinstance(root, ZeroCrossing) else float(root)
    d = spectrum.delta
    lo, hi = x0 - window_width, x0 + window_width
    if lo < d[0] - 1e-12 or hi > d[-1] + 1e-12:
        raise DomainError(f"window [{lo:.6g}, {hi:.6g}] exceeds the grid [{d[0]:.6g}, {d[-1]:.6g}]")
    if neighborhood is None:
        neighborhood = 1.5 * float(np.min(np.diff(d))) if len(d) > 1 else 0.0
    mask = (d >= lo) & (d <= hi) & (np.abs(d - x0) > neighborhood)
    im = spectrum.branch(branch).imag[mask]
    m = float(im.min()) if im.size else math.inf
    return GainCheck(bool(m >= -tolerance), m, (lo, hi))


def _fmt(x: float) -> str:
    # repr() is locale-independent and round-trips exactly
    return repr(float(x))


def format_csv(result: SpectrumResult) -> str:
    buf = io.StringIO()
    header = list(COLUMNS) + ([DISCREPANCY] if result.discrepancy is not None else [])
    buf.write(",".join(header) + "\n")
    for row in result.rows():
        buf.write(",".join(_fmt(v) for v in row) + "\n")
    return buf.getvalue()


def format_json(result: SpectrumResult) -> str:
    doc = {
        "columns": list(COLUMNS) + ([DISCREPANCY] if result.discrepancy is not None else []),
        "rows": [list(r) for r in result.rows()],
        "metadata": result.metadata,
        "analysis": result.analysis,
    }
    return json.dumps(_jsonable(doc), sort_keys=True, indent=1, allow_nan=False) + "\n"


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.floating,)):
        x = float(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    if isinstance(x, float) and not math.isfinite(x):
        return repr(x)
    if isinstance(x, complex):
        return [x.real, x.imag]
    return x


def emit(result: SpectrumResult, path, format: str = "csv") -> Path:
    """Write ``result`` as CSV or JSON; identical inputs give identical bytes."""
    p = Path(path)
    text = format_csv(result) if format == "csv" else format_json(result) if format == "json" else None
    if text is None:
        raise ValueError(f"unknown format {format!r}")
    try:
        with open(p, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write {p}: {exc}") from exc
    return p


def parse(path) -> SpectrumResult:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot read {p}: {exc}") from exc
    if text.lstrip().startswith("{"):
        doc = json.loads(text)
        rows = doc["rows"]
        meta, analysis, cols = doc.get("metadata", {}), doc.get("analysis", {}), doc["columns"]
    else:
        reader = csv.reader(io.StringIO(text))
        cols = next(reader)
        rows = [[float(v) for v in r] for r in reader if r]
        meta, analysis = {}, {}
    a = np.array(rows, dtype=float).reshape(-1, len(cols))
    disc = a[:, 5] if DISCREPANCY in cols else None
    return SpectrumResult(
        a[:, 0], a[:, 1] + 1j * a[:, 2], a[:, 3] + 1j * a[:, 4], meta, disc, analysis
    )
