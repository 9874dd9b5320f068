"""Finite fermionic Fock space over arrival-event modes.

Modes are labeled (species, x, s) with positions on the lattice conjugate
to a uniform momentum grid, x_k = 2 pi k / (N dp) with integer k != 0, so
that discrete plane waves are exactly orthogonal.  Ladder operators are
built with Jordan-Wigner parity strings in a fixed canonical ordering
(all electron-event modes first, lattice order then spin up/down, then
positron-event modes), which makes every anticommutation relation exact
in integer arithmetic.

The positron-event mode attached to lattice site x carries the event
spinor of the mirrored position -x together with the phase exp(+i(eps T -
p x)).  This is the pairing under which (a) the electron/positron spinor
families are exactly orthogonal site by site, (b) the spin-summed outer
products of the two families add up to the identity, and (c) the discrete
field anticommutator comes out exactly i/dp times a delta on a complete
lattice.  The naive same-position pairing satisfies none of these.

The arrival-time operator is applied to modes analytically (eigenvalue
action: -T on electron-event modes, +T on positron-event modes), which
isolates the Fock-algebra content from discretization error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .dirac import EventKinematics, electron_event_spinor, positron_event_spinor

ELECTRON = "electron-event"
POSITRON = "positron-event"

MAX_MODES = 14        # dense Fock matrices stay desk-scale below 2^14
MAX_FIELD_MODES = 10  # field-operator checks materialize 4 N_p matrices

_SQRT_2PI = math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class ModeLabel:
    """One arrival-event mode: species, lattice position, spin."""

    species: str
    x: float
    s: float
    tau: float
    arrival: float

    def __post_init__(self):
        if self.species not in (ELECTRON, POSITRON):
            raise ValueError(f"unknown species {self.species!r}")
        if self.x == 0:
            raise ValueError("mode position must be nonzero")
        if self.s not in (0.5, -0.5):
            raise ValueError("spin must be +0.5 or -0.5")

    @property
    def key(self) -> tuple:
        return (self.x, self.s)


@dataclass(frozen=True)
class ModeSet:
    """Ordered event modes over one conjugate lattice.

    ``n_grid`` and ``spacing`` define the momentum lattice p_j = p_offset
    + j dp, j = 0..n_grid-1; mode positions must sit on its conjugate
    lattice.  The ordering convention (electrons first) fixes the
    Jordan-Wigner strings and hence every matrix below.
    """

    labels: tuple
    n_grid: int
    spacing: float
    p_offset: float
    tau: float

    def __post_init__(self):
        if len(self.labels) > MAX_MODES:
            raise ValueError(f"at most {MAX_MODES} modes supported, got {len(self.labels)}")
        if len(set((l.species, l.x, l.s) for l in self.labels)) != len(self.labels):
            raise ValueError("duplicate mode labels")
        if self.n_grid < 1 or self.spacing <= 0:
            raise ValueError("momentum lattice must have n >= 1 and positive spacing")
        unit = 2.0 * math.pi / (self.n_grid * self.spacing)
        for l in self.labels:
            ratio = l.x / unit
            if abs(ratio - round(ratio)) > 1e-9 or round(ratio) == 0:
                raise ValueError(
                    f"mode position {l.x:g} is off the conjugate lattice "
                    f"(unit {unit:g}); cross terms would not cancel exactly")
        p = self.momentum_points()
        if np.abs(p).min() == 0.0:
            raise ValueError("momentum lattice touches the origin")

    def momentum_points(self) -> np.ndarray:
        return self.p_offset + self.spacing * np.arange(self.n_grid)

    @property
    def n_modes(self) -> int:
        return len(self.labels)

    @property
    def dim(self) -> int:
        return 2 ** self.n_modes

    @property
    def norm_constant(self) -> float:
        """N dp / (2 pi): makes each discrete mode exactly unit norm."""
        return self.n_grid * self.spacing / (2.0 * math.pi)

    def pair_keys(self) -> list:
        seen = []
        for l in self.labels:
            if l.key not in seen:
                seen.append(l.key)
        return seen

    def is_complete(self) -> bool:
        """All lattice residues, both spins, both species present."""
        unit = 2.0 * math.pi / (self.n_grid * self.spacing)
        residues = set()
        for l in self.labels:
            residues.add(round(l.x / unit) % self.n_grid)
        if residues != set(range(self.n_grid)):
            return False
        for l in self.labels:
            for sp in (ELECTRON, POSITRON):
                for s in (0.5, -0.5):
                    if not any(m.species == sp and m.x == l.x and m.s == s
                               for m in self.labels):
                        return False
        return True


def event_mode_set(lattice_k: Sequence[int], n_grid: int, spacing: float,
                   tau: float, spins: Sequence[float] = (0.5, -0.5),
                   species: Sequence[str] = (ELECTRON, POSITRON),
                   p_offset: float | None = None) -> ModeSet:
    """Build a canonical mode set from conjugate-lattice indices.

    ``lattice_k`` holds the nonzero integers k of x_k = 2 pi k/(N dp); the
    full N-site complete lattice is k = 1..N.  The default momentum offset
    of half a spacing keeps the lattice clear of the origin.
    """
    if p_offset is None:
        p_offset = 0.5 * spacing
    unit = 2.0 * math.pi / (n_grid * spacing)
    labels = []
    for sp in (ELECTRON, POSITRON):
        if sp not in species:
            continue
        for k in lattice_k:
            if k == 0:
                raise ValueError("lattice index 0 is excluded (|x| > 0)")
            x = unit * k
            for s in spins:
                labels.append(ModeLabel(sp, x, s, tau, math.hypot(x, tau)))
    return ModeSet(tuple(labels), n_grid, spacing, p_offset, tau)


def ladder_operators(modes: ModeSet) -> list:
    """Dense annihilation matrices in the Jordan-Wigner string construction.

    The entries are 0 and +-1 exactly, so anticommutators close in integer
    arithmetic; {a_i, a_j^dag} = delta_ij I holds with residual exactly 0.
    """
    n = modes.n_modes
    lower = np.array([[0, 1], [0, 0]], dtype=complex)
    parity = np.array([[1, 0], [0, -1]], dtype=complex)
    ident = np.eye(2, dtype=complex)
    ops = []
    for i in range(n):
        chain = [parity] * i + [lower] + [ident] * (n - 1 - i)
        m = chain[0]
        for factor in chain[1:]:
            m = np.kron(m, factor)
        ops.append(m)
    return ops


def _occupations(n_modes: int) -> np.ndarray:
    """(dim, n_modes) occupation table in the kron basis ordering."""
    dim = 2 ** n_modes
    b = np.arange(dim)[:, None]
    shifts = n_modes - 1 - np.arange(n_modes)[None, :]
    return (b >> shifts) & 1


def number_form_arrival_time(modes: ModeSet) -> np.ndarray:
    """The occupation-diagonal total arrival time.

    Each (x, s) pair contributes (n_electron + n_positron - 1) T_x, so the
    vacuum carries the zero-point value -sum T_x over pairs.
    """
    occ = _occupations(modes.n_modes)
    t_per_mode = np.array([l.arrival for l in modes.labels])
    diag = occ @ t_per_mode
    diag = diag - sum(math.hypot(x, modes.tau) for (x, s) in modes.pair_keys())
    return np.diag(diag.astype(complex))


def vacuum_state(modes: ModeSet) -> np.ndarray:
    v = np.zeros(modes.dim, dtype=complex)
    v[0] = 1.0
    return v


def basis_state(modes: ModeSet, occupied: Iterable[int]) -> np.ndarray:
    """Occupation basis vector with the given mode indices filled."""
    idx = 0
    n = modes.n_modes
    for i in occupied:
        idx |= 1 << (n - 1 - i)
    v = np.zeros(modes.dim, dtype=complex)
    v[idx] = 1.0
    return v


def mode_wavefunctions(modes: ModeSet, eps: float = 0.0):
    """Per-mode grid wavefunctions, arrival eigenvalues, and creator flags.

    Electron-event modes: zeta(x, s) exp(-i(eps T + p x)), eigenvalue -T,
    entering the field through the annihilator.  Positron-event modes:
    xi(-x, s) exp(+i(eps T - p x)), eigenvalue +T, entering through the
    creator.
    """
    p = modes.momentum_points()
    w = np.empty((modes.n_modes, modes.n_grid, 4), dtype=complex)
    tvals = np.empty(modes.n_modes)
    creator = np.zeros(modes.n_modes, dtype=bool)
    for i, l in enumerate(modes.labels):
        ev = EventKinematics(l.x, modes.tau)
        t = ev.arrival
        if l.species == ELECTRON:
            spinor = electron_event_spinor(ev, l.s)
            phase = np.exp(-1j * (eps * t + p * l.x))
            tvals[i] = -t
        else:
            spinor = positron_event_spinor(ev.mirrored(), l.s)
            phase = np.exp(1j * (eps * t - p * l.x))
            tvals[i] = t
            creator[i] = True
        w[i] = (phase / _SQRT_2PI)[:, None] * spinor[None, :]
    return w, tvals, creator


@dataclass(frozen=True)
class QuadraticFormResult:
    matrix: np.ndarray
    sigma: int
    residual: float


def quadratic_form_arrival_time(modes: ModeSet, eps: float = 0.0) -> QuadraticFormResult:
    """Reassemble the total arrival time from the conserved-charge quadratic form.

    The field is expanded in elementary modes, the arrival-time operator is
    applied analytically, and the momentum sum is taken over the lattice.
    Cross terms cancel exactly: distinct sites by plane-wave orthogonality,
    equal sites by the orthogonality of the electron spinor at x against the
    positron spinor at -x.  Returns the matrix together with the sign sigma
    that minimizes the deviation from the occupation-diagonal form.
    """
    for (x, s) in modes.pair_keys():
        have = {l.species for l in modes.labels if l.key == (x, s)}
        if have != {ELECTRON, POSITRON}:
            raise ValueError(
                "quadratic-form comparison needs both species at every (x, s); "
                f"({x:g}, {s:+g}) is unpaired")
    w, tvals, creator = mode_wavefunctions(modes, eps)
    ops = ladder_operators(modes)
    field_ops = [ops[i].conj().T if creator[i] else ops[i]
                 for i in range(modes.n_modes)]
    gram = np.einsum("ipc,jpc->ij", w.conj(), w) * modes.spacing
    coef = gram * tvals[None, :] / modes.norm_constant
    dim = modes.dim
    quad = np.zeros((dim, dim), dtype=complex)
    for i in range(modes.n_modes):
        left = field_ops[i].conj().T
        for j in range(modes.n_modes):
            c = coef[i, j]
            if abs(c) > 1e-16:
                quad += c * (left @ field_ops[j])
    direct = number_form_arrival_time(modes)
    dev_plus = float(np.abs(quad - direct).max())
    dev_minus = float(np.abs(quad + direct).max())
    if dev_minus <= dev_plus:
        return QuadraticFormResult(quad, -1, dev_minus)
    return QuadraticFormResult(quad, +1, dev_plus)


@dataclass(frozen=True)
class FieldCarResult:
    phi_pi_residual: float
    phi_phi_residual: float
    complete: bool

    @property
    def note(self) -> str:
        return "complete conjugate lattice" if self.complete else "incomplete basis"


def field_car_check(modes: ModeSet, eps: float = 0.0) -> FieldCarResult:
    """Anticommutators of the operator-valued field with its conjugate momentum.

    Builds phi_c(p_j) as dense Fock matrices and measures the deviation of
    {phi_c(p_j), pi_d(p_l)} from (i/dp) delta_jl delta_cd, with pi = i
    phi^dag.  Exact on a complete lattice; an incomplete mode set is
    flagged, not failed.
    """
    if modes.n_modes > MAX_FIELD_MODES:
        raise ValueError(f"field CAR check capped at {MAX_FIELD_MODES} modes")
    w, _tvals, creator = mode_wavefunctions(modes, eps)
    ops = ladder_operators(modes)
    field_ops = [ops[i].conj().T if creator[i] else ops[i]
                 for i in range(modes.n_modes)]
    scale = 1.0 / math.sqrt(modes.norm_constant)
    dim = modes.dim
    n_p = modes.n_grid
    phi = np.zeros((n_p, 4, dim, dim), dtype=complex)
    for i in range(modes.n_modes):
        for j in range(n_p):
            for c in range(4):
                coeff = scale * w[i, j, c]
                if coeff != 0:
                    phi[j, c] += coeff * field_ops[i]

    ident = np.eye(dim)
    expected = 1j / modes.spacing
    worst_pi = 0.0
    worst_phi = 0.0
    for j in range(n_p):
        for c in range(4):
            a = phi[j, c]
            for l in range(n_p):
                for d in range(4):
                    b = phi[l, d]
                    pi = 1j * b.conj().T
                    anti = a @ pi + pi @ a
                    target = expected * ident if (j == l and c == d) else 0.0
                    worst_pi = max(worst_pi, float(np.abs(anti - target).max()))
                    anti2 = a @ b + b @ a
                    worst_phi = max(worst_phi, float(np.abs(anti2).max()))
    return FieldCarResult(worst_pi, worst_phi, modes.is_complete())


def event_statistics(state: np.ndarray, t_matrix: np.ndarray) -> tuple[float, float]:
    """Mean and variance of the total arrival time in a Fock state."""
    state = np.asarray(state, dtype=complex)
    norm2 = float(np.vdot(state, state).real)
    if norm2 == 0:
        raise ValueError("zero-norm state")
    psi = state / math.sqrt(norm2)
    t_psi = t_matrix @ psi
    mean = float(np.vdot(psi, t_psi).real)
    second = float(np.vdot(t_psi, t_psi).real)
    return mean, second - mean * mean


def sorted_spectrum(t_matrix: np.ndarray) -> np.ndarray:
    """Eigenvalues of an occupation-diagonal operator, ascending."""
    return np.sort(np.diagonal(t_matrix).real.copy())
