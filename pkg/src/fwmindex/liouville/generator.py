"""Rotating-frame Lindblad generator and its steady state.

Density matrices are vectorized row-major, ``vec(A X B) = kron(A, B.T) vec(X)``.
When every driven coupling preserves mF the generator leaves the block of
coherences with equal mF invariant, and only that block is kept.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp

from .scheme import DriveAssignment, LevelScheme, SchemeError, rotating_frame

PIVOT_THRESHOLD = 1e-12


class SingularSystem(np.linalg.LinAlgError):
    """The steady-state system has no unique solution."""

    def __init__(self, message: str, kernel_dimension: int | None = None):
        super().__init__(message)
        self.kernel_dimension = kernel_dimension


class UnphysicalState(RuntimeError):
    pass


def _commutator(op: sp.spmatrix, n: int) -> sp.csr_matrix:
    eye = sp.identity(n, dtype=complex, format="csr")
    return (sp.kron(op, eye) - sp.kron(eye, op.T)).tocsr()


def _dissipator(c: sp.spmatrix, n: int) -> sp.csr_matrix:
    eye = sp.identity(n, dtype=complex, format="csr")
    cdc = (c.conj().T @ c).tocsr()
    return (sp.kron(c, c.conj()) - 0.5 * sp.kron(cdc, eye) - 0.5 * sp.kron(eye, cdc.T)).tocsr()


def _jump_operators(scheme: LevelScheme, theta=None) -> list[sp.csr_matrix]:
    """One operator per decay group.

    With ``theta`` given, a group whose channels rotate at different frame
    frequencies is rejected: its cross terms would not be static.
    """
    n = scheme.n
    idx = {s.label: i for i, s in enumerate(scheme.states)}
    groups: dict[object, list] = {}
    for k, d in enumerate(scheme.decays):
        if d.rate == 0:
            continue
        key = d.group if d.group is not None else ("_single", k)
        groups.setdefault(key, []).append(d)
    ops = []
    for chans in groups.values():
        rows = [idx[d.lower] for d in chans]
        cols = [idx[d.upper] for d in chans]
        vals = [math.copysign(math.sqrt(d.rate), d.sign) for d in chans]
        if theta is not None and len(chans) > 1:
            w = [theta[u] - theta[l] for u, l in zip(cols, rows)]
            if max(w) - min(w) > 1e-9 * max(1.0, max(abs(x) for x in w)):
                raise SchemeError(
                    "decay group mixes transitions with different frame frequencies; "
                    "split it per transition"
                )
        ops.append(sp.csr_matrix((vals, (rows, cols)), shape=(n, n), dtype=complex))
    return ops


def drive_hamiltonian(scheme: LevelScheme, drives: DriveAssignment, *, probes: bool = False) -> np.ndarray:
    """Off-diagonal drive part of ``H/hbar``: ``-sum c*rabi (|u><l| + h.c.)``.

    Probe fields are left out unless ``probes`` is set; they enter only
    through linear response.
    """
    n = scheme.n
    idx = {s.label: i for i, s in enumerate(scheme.states)}
    by_line = {line: f for f in drives.fields for line in f.lines}
    h = np.zeros((n, n), dtype=complex)
    for c in scheme.couplings:
        f = by_line.get(c.line)
        if f is None or (f.probe and not probes):
            continue
        u, l = idx[c.upper], idx[c.lower]
        h[u, l] -= c.strength * f.rabi
        h[l, u] -= c.strength * f.rabi
    return h


def line_operator(scheme: LevelScheme, lines, *, raising: bool = True) -> np.ndarray:
    """``sum c |u><l|`` over the couplings of ``lines`` (or its adjoint)."""
    lines = set(lines)
    n = scheme.n
    idx = {s.label: i for i, s in enumerate(scheme.states)}
    op = np.zeros((n, n), dtype=complex)
    for c in scheme.couplings:
        if c.line in lines:
            u, l = idx[c.upper], idx[c.lower]
            if raising:
                op[u, l] += c.strength
            else:
                op[l, u] += c.strength
    return op


@dataclass
class Liouvillian:
    """Generator restricted to a set of density-matrix elements.

    ``pairs[k] = (a, b)`` names the element held at position ``k``;
    ``clamped`` positions carry identity rows and stay zero.
    """

    matrix: np.ndarray
    pairs: np.ndarray
    n: int
    populations: np.ndarray
    clamped: np.ndarray
    theta: np.ndarray
    sweep_diagonal: np.ndarray
    doppler_diagonal: np.ndarray
    full: sp.csr_matrix = field(repr=False, default=None)
    positions: np.ndarray = field(repr=False, default=None)

    @property
    def size(self) -> int:
        return len(self.pairs)

    @property
    def is_reduced(self) -> bool:
        return self.size < self.n * self.n

    def at(self, delta: float = 0.0, doppler_shift: float = 0.0) -> np.ndarray:
        """Dense generator at probe detuning ``delta`` and excited-state shift."""
        m = self.matrix.copy()
        d = delta * self.sweep_diagonal + doppler_shift * self.doppler_diagonal
        m[np.diag_indices_from(m)] += d
        return m

    def vec(self, rho: np.ndarray) -> np.ndarray:
        return rho[self.pairs[:, 0], self.pairs[:, 1]]

    def unvec(self, x: np.ndarray) -> np.ndarray:
        rho = np.zeros((self.n, self.n), dtype=complex)
        rho[self.pairs[:, 0], self.pairs[:, 1]] = x
        return rho

    def commutator(self, op: np.ndarray) -> np.ndarray:
        """Matrix of ``rho -> -i [op, rho]`` on the kept elements."""
        c = _commutator(sp.csr_matrix(op), self.n)
        sub = c[self.positions][:, self.positions]
        leak = c[:, self.positions]
        if self.is_reduced:
            outside = np.setdiff1d(np.arange(self.n * self.n), self.positions)
            leak = leak[outside]
            leak.eliminate_zeros()
            if leak.nnz:
                raise ValueError("perturbation leaves the retained block of the density matrix")
        return -1j * sub.toarray()


def build_rotating_frame_generator(
    scheme: LevelScheme,
    drives: DriveAssignment,
    delta: float = 0.0,
    *,
    reduce: str | bool = "auto",
    probes_to_check=(),
) -> Liouvillian:
    """Lindblad generator in the frame where all drives are static.

    ``delta`` is the probe detuning at which ``matrix`` is built; the linear
    dependence on probe detuning and on a common excited-state shift
    (Doppler) is kept in ``sweep_diagonal`` and ``doppler_diagonal``.
    ``reduce`` selects the equal-mF block: ``"auto"`` keeps it when it is
    exactly invariant (also under the probe operators in ``probes_to_check``).
    """
    n = scheme.n
    theta0 = np.asarray(rotating_frame(scheme, drives, 0.0))
    theta1 = np.asarray(rotating_frame(scheme, drives, 1.0))
    dtheta = theta1 - theta0
    energies = np.array([s.energy for s in scheme.states])
    excited = np.array([s.excited for s in scheme.states], dtype=float)

    diag = energies - theta0 - delta * dtheta
    h = drive_hamiltonian(scheme, drives) + np.diag(diag)
    full = -1j * _commutator(sp.csr_matrix(h), n)
    for c in _jump_operators(scheme, theta0 + delta * dtheta):
        full = full + _dissipator(c, n)
    deph = np.zeros(n * n)
    pinned = np.zeros(n * n, dtype=bool)
    idx = {s.label: i for i, s in enumerate(scheme.states)}
    for d in scheme.dephasing:
        a, b = idx[d.a], idx[d.b]
        for p in (a * n + b, b * n + a):
            if math.isinf(d.rate):
                pinned[p] = True
            else:
                deph[p] += d.rate
    full = (full - sp.diags(deph)).tocsr()

    a_idx, b_idx = np.divmod(np.arange(n * n), n)
    positions = np.arange(n * n)
    if reduce:
        mf = [s.mF for s in scheme.states]
        if all(m is not None for m in mf):
            mf = np.asarray(mf, dtype=float)
            keep = np.flatnonzero(mf[a_idx] == mf[b_idx])
            if len(keep) < n * n and _invariant(full, keep, n, [*probes_to_check]):
                positions = keep
            elif reduce is True:
                raise ValueError("the equal-mF block is not invariant for this drive")
    sub = full[positions][:, positions].toarray()
    pairs = np.column_stack([a_idx[positions], b_idx[positions]])
    clamped = np.flatnonzero(pinned[positions])
    for k in clamped:
        sub[k, :] = 0.0
        sub[k, k] = 1.0
    pops = np.flatnonzero(pairs[:, 0] == pairs[:, 1])

    hd = -dtheta
    sweep = -1j * (hd[pairs[:, 0]] - hd[pairs[:, 1]])
    dop = -1j * (excited[pairs[:, 0]] - excited[pairs[:, 1]])
    sweep[clamped] = 0.0
    dop[clamped] = 0.0
    return Liouvillian(
        matrix=sub,
        pairs=pairs,
        n=n,
        populations=pops,
        clamped=clamped,
        theta=theta0 + delta * dtheta,
        sweep_diagonal=sweep,
        doppler_diagonal=dop,
        full=full,
        positions=positions,
    )


def _invariant(full: sp.csr_matrix, keep: np.ndarray, n: int, ops) -> bool:
    outside = np.setdiff1d(np.arange(n * n), keep)
    mats = [full] + [_commutator(sp.csr_matrix(op), n) for op in ops]
    for m in mats:
        leak = m[outside][:, keep]
        leak.eliminate_zeros()
        if leak.nnz and np.abs(leak.data).max() > 0:
            return False
    return True


@dataclass
class Factorization:
    """LU of the generator with the trace condition in place of one row."""

    lu: tuple
    trace_row: int
    clamped: np.ndarray
    pivot_ratio: float

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        return sla.lu_solve(self.lu, rhs)


def factorize(gen: Liouvillian, matrix: np.ndarray | None = None) -> Factorization:
    a = gen.matrix.copy() if matrix is None else matrix.copy()
    row = int(gen.populations[0])
    a[row, :] = 0.0
    a[row, gen.populations] = 1.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        lu = sla.lu_factor(a, check_finite=False)
    piv = np.abs(np.diag(lu[0]))
    ratio = float(piv.min() / piv.max()) if piv.max() > 0 else 0.0
    if not ratio > PIVOT_THRESHOLD:
        k = kernel_dimension(matrix if matrix is not None else gen.matrix)
        raise SingularSystem(
            f"steady state is not unique: generator kernel has dimension {k}", kernel_dimension=k
        )
    return Factorization(lu, row, gen.clamped, ratio)


def kernel_dimension(matrix: np.ndarray, rtol: float = 1e-10) -> int:
    s = np.linalg.svd(matrix, compute_uv=False)
    return int(np.sum(s <= rtol * s.max()))


@dataclass
class SteadyState:
    rho: np.ndarray
    vector: np.ndarray
    residual: float
    pivot_ratio: float

    @property
    def populations(self) -> np.ndarray:
        return np.real(np.diag(self.rho))


def steady_state(
    gen: Liouvillian,
    delta: float | None = None,
    doppler_shift: float = 0.0,
    *,
    check: bool = True,
    tol: float = 1e-8,
    factorization: Factorization | None = None,
) -> SteadyState:
    """Unique stationary state of ``gen``.

    Raises ``SingularSystem`` (carrying the kernel dimension) when the
    stationary state is not unique, and ``UnphysicalState`` when ``check``
    is set and the solution is not a density matrix within ``tol``.
    """
    m = gen.matrix if delta is None and doppler_shift == 0.0 else gen.at(delta or 0.0, doppler_shift)
    fac = factorization or factorize(gen, m)
    rhs = np.zeros(gen.size, dtype=complex)
    rhs[fac.trace_row] = 1.0
    x = fac.solve(rhs)
    resid = float(np.abs(m @ x - _pinned_rhs(gen)).max())
    rho = gen.unvec(x)
    if check:
        check_density_matrix(rho, tol)
    return SteadyState(rho, x, resid, fac.pivot_ratio)


def _pinned_rhs(gen: Liouvillian) -> np.ndarray:
    return np.zeros(gen.size, dtype=complex)


def check_density_matrix(rho: np.ndarray, tol: float = 1e-8) -> None:
    herm = np.abs(rho - rho.conj().T).max()
    tr = abs(np.trace(rho) - 1.0)
    low = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)).min()
    if herm > tol or tr > tol or low < -tol:
        raise UnphysicalState(
            f"steady state is not a density matrix (hermiticity {herm:.2e}, trace {tr:.2e}, "
            f"lowest eigenvalue {low:.2e})"
        )
