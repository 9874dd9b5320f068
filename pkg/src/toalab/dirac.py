"""Exact 4x4 Dirac-representation algebra and the dual spinor families.

Everything in this module is closed-form and evaluates to machine
precision: the fixed gamma-matrix family, the positive/negative-energy
free-particle spinors on the mass shell E^2 = p^2 + m^2, and their event
duals living on the spacetime-interval shell T^2 = x^2 + tau^2.  The two
shells are exchanged by the substitution (p, m, E) <-> (x, tau, T); the
kinematic containers below carry one point of each shell.

All values are immutable after construction and all functions are pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

SPIN_UP = 0.5
SPIN_DOWN = -0.5

_METRIC = np.diag([1.0, -1.0, -1.0, -1.0])


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=complex)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class DiracBasis:
    """The fixed matrix family of the standard (Dirac) representation.

    ``sigma1`` is the diagonal 2x2 involution diag(1, -1); the two-spinors
    ``eta_up``/``eta_down`` are its +1/-1 eigenvectors.  ``alpha1`` is the
    velocity matrix gamma0 @ gamma1 and ``beta`` is gamma0.  All entries
    are 0, +-1 or +-1j, so every algebraic identity of the family holds
    exactly in complex floating point.
    """

    gamma0: np.ndarray
    gamma1: np.ndarray
    gamma2: np.ndarray
    gamma3: np.ndarray
    alpha1: np.ndarray
    beta: np.ndarray
    sigma1: np.ndarray
    eta_up: np.ndarray
    eta_down: np.ndarray

    @property
    def gammas(self) -> tuple[np.ndarray, ...]:
        return (self.gamma0, self.gamma1, self.gamma2, self.gamma3)

    def eta(self, s: float) -> np.ndarray:
        return self.eta_up if s > 0 else self.eta_down

    def clifford_residual(self) -> float:
        """Max-norm deviation of {gamma_mu, gamma_nu} from 2 g_{mu nu} I."""
        worst = 0.0
        for mu, gmu in enumerate(self.gammas):
            for nu, gnu in enumerate(self.gammas):
                anti = gmu @ gnu + gnu @ gmu
                dev = np.abs(anti - 2.0 * _METRIC[mu, nu] * np.eye(4)).max()
                worst = max(worst, float(dev))
        return worst


def build_dirac_basis() -> DiracBasis:
    """Construct the standard representation with diagonal sigma1.

    The 2x2 triple completing the Clifford algebra is the cyclic
    relabeling (z, x, y) of the Pauli matrices, so that sigma1 = diag(1, -1)
    as required by the spinor block structure used throughout.
    """
    s1 = np.array([[1, 0], [0, -1]], dtype=complex)
    s2 = np.array([[0, 1], [1, 0]], dtype=complex)
    s3 = np.array([[0, -1j], [1j, 0]], dtype=complex)
    z = np.zeros((2, 2), dtype=complex)
    i2 = np.eye(2, dtype=complex)

    gamma0 = np.block([[i2, z], [z, -i2]])
    gammas = [np.block([[z, s], [-s, z]]) for s in (s1, s2, s3)]
    return DiracBasis(
        gamma0=_frozen(gamma0),
        gamma1=_frozen(gammas[0]),
        gamma2=_frozen(gammas[1]),
        gamma3=_frozen(gammas[2]),
        alpha1=_frozen(gamma0 @ gammas[0]),
        beta=_frozen(gamma0),
        sigma1=_frozen(s1),
        eta_up=_frozen(np.array([1, 0])),
        eta_down=_frozen(np.array([0, 1])),
    )


#: Shared immutable instance; cheap to build but used everywhere.
BASIS = build_dirac_basis()


def _check_spin(s: float) -> None:
    if s not in (SPIN_UP, SPIN_DOWN):
        raise ValueError(f"spin must be +0.5 or -0.5, got {s!r}")


@dataclass(frozen=True)
class MomentumKinematics:
    """One point (m, p, E) of the mass shell, momentum along the x axis.

    Rest mass must be positive and momentum nonzero; the energy is always
    the positive root, so E > m holds strictly.
    """

    m: float
    p: float
    energy: float = field(init=False)

    def __post_init__(self):
        if not (self.m > 0 and math.isfinite(self.m)):
            raise ValueError(f"rest mass must be positive and finite, got {self.m}")
        if self.p == 0 or not math.isfinite(self.p):
            raise ValueError(f"momentum must be nonzero and finite, got {self.p}")
        object.__setattr__(self, "energy", math.hypot(self.p, self.m))

    def shell_residual(self) -> float:
        return abs(self.energy**2 - self.p**2 - self.m**2)


@dataclass(frozen=True)
class EventKinematics:
    """One point (x, tau, T) of the spacetime-interval shell.

    ``arrival`` is always the positive root sqrt(x^2 + tau^2).  When the
    event is derived from a mass-shell point via ``from_momentum`` the two
    classical relations tau = x m / p and T = x E / p hold simultaneously
    (for x and p of equal sign, where the signed and positive-root arrival
    values coincide).
    """

    x: float
    tau: float
    arrival: float = field(init=False)

    def __post_init__(self):
        if self.x == 0 or not math.isfinite(self.x):
            raise ValueError(f"position interval must be nonzero, got {self.x}")
        if not math.isfinite(self.tau):
            raise ValueError("proper time must be finite")
        object.__setattr__(self, "arrival", math.hypot(self.x, self.tau))

    @classmethod
    def from_momentum(cls, k: MomentumKinematics, x: float) -> "EventKinematics":
        return cls(x=x, tau=x * k.m / k.p)

    def mirrored(self) -> "EventKinematics":
        """The event at the opposite position, same proper time."""
        return EventKinematics(x=-self.x, tau=self.tau)

    def shell_residual(self) -> float:
        return abs(self.arrival**2 - self.x**2 - self.tau**2)


def _two_block_spinor(top: np.ndarray, bottom: np.ndarray) -> np.ndarray:
    return np.concatenate([top, bottom]).astype(complex)


def electron_spinor(k: MomentumKinematics, s: float) -> np.ndarray:
    """Unit-norm positive-energy spinor at (m, p)."""
    _check_spin(s)
    norm = math.sqrt((k.m + k.energy) / (2.0 * k.energy))
    eta = BASIS.eta(s)
    lower = (k.p / (k.m + k.energy)) * (BASIS.sigma1 @ eta)
    return norm * _two_block_spinor(eta, lower)


def positron_spinor(k: MomentumKinematics, s: float) -> np.ndarray:
    """Unit-norm negative-energy spinor: the block swap of the electron one."""
    _check_spin(s)
    norm = math.sqrt((k.m + k.energy) / (2.0 * k.energy))
    eta = BASIS.eta(s)
    upper = (k.p / (k.m + k.energy)) * (BASIS.sigma1 @ eta)
    return norm * _two_block_spinor(upper, eta)


def electron_event_spinor(e: EventKinematics, s: float) -> np.ndarray:
    """Event dual of the electron spinor, on the interval shell."""
    _check_spin(s)
    denom = e.tau + e.arrival
    if denom == 0:
        raise ValueError("degenerate event: tau + arrival magnitude vanishes")
    norm = math.sqrt(denom / (2.0 * e.arrival))
    eta = BASIS.eta(s)
    lower = (e.x / denom) * (BASIS.sigma1 @ eta)
    return norm * _two_block_spinor(eta, lower)


def positron_event_spinor(e: EventKinematics, s: float) -> np.ndarray:
    """Event dual of the positron spinor (block swap of the electron dual)."""
    _check_spin(s)
    denom = e.tau + e.arrival
    if denom == 0:
        raise ValueError("degenerate event: tau + arrival magnitude vanishes")
    norm = math.sqrt(denom / (2.0 * e.arrival))
    eta = BASIS.eta(s)
    upper = (e.x / denom) * (BASIS.sigma1 @ eta)
    return norm * _two_block_spinor(upper, eta)


def particle_eigen_residuals(k: MomentumKinematics, s: float) -> tuple[float, float]:
    """Residuals of the algebraic energy eigenrelations of both spinors.

    The electron spinor solves (alpha1 p + beta m) u = +E u.  The positron
    spinor pairs with the opposite momentum, so the relation it satisfies
    is (-alpha1 p + beta m) v = -E v; this was confirmed numerically before
    being frozen into the test suite.
    """
    u = electron_spinor(k, s)
    v = positron_spinor(k, s)
    h_plus = BASIS.alpha1 * k.p + BASIS.beta * k.m
    h_minus = -BASIS.alpha1 * k.p + BASIS.beta * k.m
    ru = float(np.linalg.norm(h_plus @ u - k.energy * u))
    rv = float(np.linalg.norm(h_minus @ v + k.energy * v))
    return ru, rv


def dual_eigen_residual(e: EventKinematics, s: float) -> tuple[float, float]:
    """Residuals of the arrival-magnitude eigenrelations of the event spinors.

    (alpha1 x + beta tau) annihilates nothing here: it has the electron
    event spinor as a +T eigenvector, while the flipped sign combination
    (alpha1 x - beta tau) has the positron event spinor as a +T eigenvector.
    """
    zeta = electron_event_spinor(e, s)
    xi = positron_event_spinor(e, s)
    op_plus = BASIS.alpha1 * e.x + BASIS.beta * e.tau
    op_minus = BASIS.alpha1 * e.x - BASIS.beta * e.tau
    rz = float(np.linalg.norm(op_plus @ zeta - e.arrival * zeta))
    rx = float(np.linalg.norm(op_minus @ xi - e.arrival * xi))
    return rz, rx
