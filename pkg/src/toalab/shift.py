"""The energy-shift equation, its elementary solutions, and the action layer.

The evolution parameter here is an energy offset: shifting the zero of
energy by eps multiplies each elementary mode by a pure phase whose rate
is the mode's arrival value.  The proper time is a c-number throughout
this module, so the generator is -(alpha1 xhat + beta tau) with
xhat = +i d/dp, and the elementary modes built from the event spinors are
exact eigensolutions.

The action functional, generalized Lagrange density, time-function
density, and the conserved charge live at the bottom of the file.  Note
one sign convention: the Legendre density pi phidot - Gamma equals
phi^dag (alpha1 xhat + beta tau) phi, which is the density of MINUS the
generator; the conserved charge reported here is the integral weighted by
the arrival-time operator itself, so an eigenmode of arrival value -T
carries charge -T times its norm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from . import _kernels
from .dirac import BASIS, EventKinematics, electron_event_spinor, positron_event_spinor
from .grids import Grid1D, SpinorField, GridOperator

BRANCH_MINUS_ARRIVAL = "minus_arrival"   # electron-event mode, eigenvalue -T
BRANCH_PLUS_ARRIVAL = "plus_arrival"     # positron-event mode, eigenvalue +T

_SQRT_2PI = math.sqrt(2.0 * math.pi)


def energy_grid(lower: float, upper: float, n_points: int) -> Grid1D:
    """Energy-parameter axis; may include zero (nothing is inverted on it)."""
    return Grid1D("energy", lower, upper, n_points)


@dataclass(frozen=True)
class ShiftField:
    """Spinor-valued function on a rectangular (energy, momentum) grid."""

    eps_grid: Grid1D
    p_grid: Grid1D
    values: np.ndarray

    def __post_init__(self):
        v = np.ascontiguousarray(self.values, dtype=complex)
        expected = (self.eps_grid.n_points, self.p_grid.n_points, 4)
        if v.shape != expected:
            raise ValueError(f"values must have shape {expected}")
        object.__setattr__(self, "values", v)

    @classmethod
    def zeros(cls, eps_grid: Grid1D, p_grid: Grid1D) -> "ShiftField":
        return cls(eps_grid, p_grid,
                   np.zeros((eps_grid.n_points, p_grid.n_points, 4), complex))


def elementary_solution(branch: str, e: EventKinematics, s: float,
                        eps: float, p: float,
                        with_amplitude: bool = False) -> np.ndarray:
    """One elementary mode evaluated at a single (eps, p) point.

    ``minus_arrival`` is the electron-event mode zeta(x, s) with phase
    exp(-i (eps T + p x)); ``plus_arrival`` is the positron-event mode
    xi(x, s) with the conjugate phase.  ``with_amplitude`` multiplies in
    the p-independent factor (x^2/(x^2 + tau^2))^(1/4) carried by the
    operator-proper-time form of the modes.
    """
    t = e.arrival
    if branch == BRANCH_MINUS_ARRIVAL:
        spinor = electron_event_spinor(e, s)
        phase = np.exp(-1j * (eps * t + p * e.x))
    elif branch == BRANCH_PLUS_ARRIVAL:
        spinor = positron_event_spinor(e, s)
        phase = np.exp(1j * (eps * t + p * e.x))
    else:
        raise ValueError(f"unknown branch {branch!r}")
    out = spinor * (phase / _SQRT_2PI)
    if with_amplitude:
        out = out * (e.x**2 / (e.x**2 + e.tau**2)) ** 0.25
    return out


def sample_elementary(branch: str, e: EventKinematics, s: float,
                      eps_grid: Grid1D, p_grid: Grid1D,
                      with_amplitude: bool = False) -> ShiftField:
    """The elementary mode sampled on a rectangular (eps, p) grid."""
    t = e.arrival
    if branch == BRANCH_MINUS_ARRIVAL:
        spinor = electron_event_spinor(e, s)
        phase = np.exp(-1j * (np.add.outer(eps_grid.points * t, p_grid.points * e.x)))
    elif branch == BRANCH_PLUS_ARRIVAL:
        spinor = positron_event_spinor(e, s)
        phase = np.exp(1j * (np.add.outer(eps_grid.points * t, p_grid.points * e.x)))
    else:
        raise ValueError(f"unknown branch {branch!r}")
    values = (phase / _SQRT_2PI)[:, :, None] * spinor[None, None, :]
    if with_amplitude:
        values = values * (e.x**2 / (e.x**2 + e.tau**2)) ** 0.25
    return ShiftField(eps_grid, p_grid, values)


def shift_equation_residual(field: ShiftField, tau: float) -> float:
    """Interior max norm of -i d_eps phi + (alpha1 xhat + beta tau) phi.

    Both derivatives are second-order central differences; for sampled
    elementary solutions the residual decays as O(h_eps^2 + h_p^2).
    """
    if field.eps_grid.n_points < 3 or field.p_grid.n_points < 3:
        raise ValueError("field too small for the interior stencil")
    he = field.eps_grid.spacing
    hp = field.p_grid.spacing
    if _kernels.USING_NUMBA:
        return float(_kernels.shift_stencil_residual(field.values, he, hp, tau))
    return _kernels.shift_stencil_residual_numpy(field.values, he, hp, tau)


def evolve(field: SpinorField, generator: GridOperator, delta_eps: float) -> SpinorField:
    """Advance a field along the energy parameter: exp(+i T delta_eps) field.

    The matrix exponential uses scaling-and-squaring with Pade (well below
    1e-12 backward error at these scales); the norm is preserved whenever
    the generator is Hermitian on the relevant subspace.
    """
    if not np.isfinite(generator.matrix).all():
        raise ValueError("generator contains non-finite entries")
    u = expm(1j * delta_eps * generator.matrix)
    return SpinorField.from_flat(field.grid, u @ field.flat)


@dataclass(frozen=True)
class ActionResult:
    """Action value, densities, and the conserved charge of one field."""

    action: complex
    lagrange_density: np.ndarray      # (n_eps, n_p) complex, edges zeroed
    time_density: np.ndarray          # (n_eps, n_p) real
    charge: np.ndarray                # per interior-eps conserved charge
    charge_eps: np.ndarray            # the eps values the charge is sampled at
    momentum_identity_residual: float # | i phibar gamma0 - i phi^dag |


def action_and_densities(field: ShiftField, tau: float) -> ActionResult:
    """Evaluate the action integral and its densities on the grid.

    The action integrand is phibar [gamma0 i d_eps - gamma1 xhat - tau] phi
    with xhat = +i d/dp; trapezoidal quadrature over the interior region
    (two edge rows/columns dropped, where the stencil is one-sided).  The
    charge is the momentum integral of phi^dag applied to the arrival-time
    generator, constant in eps for eigenmode superpositions of a common
    arrival magnitude.
    """
    v = field.values
    ne, npts, _ = v.shape
    if ne < 5 or npts < 5:
        raise ValueError("grid too small: need at least 5 points per axis")
    he = field.eps_grid.spacing
    hp = field.p_grid.spacing

    d_eps = np.zeros_like(v)
    d_eps[1:-1] = (v[2:] - v[:-2]) / (2.0 * he)
    d_p = np.zeros_like(v)
    d_p[:, 1:-1] = (v[:, 2:] - v[:, :-2]) / (2.0 * hp)
    xhat_v = 1j * d_p

    gamma0 = BASIS.gamma0
    gamma1 = BASIS.gamma1
    vbar = v.conj() @ gamma0        # phibar_a = sum_b conj(phi)_b (gamma0)_ba

    op_v = (1j * d_eps) @ gamma0.T - xhat_v @ gamma1.T - tau * v
    lagrange = np.einsum("epa,epa->ep", vbar, op_v)

    arrival_gen = xhat_v @ BASIS.alpha1.T + tau * (v @ BASIS.beta.T)
    time_density = np.einsum("epa,epa->ep", v.conj(), arrival_gen).real

    interior = np.zeros_like(lagrange)
    interior[2:-2, 2:-2] = lagrange[2:-2, 2:-2]
    action = np.trapezoid(np.trapezoid(lagrange[2:-2, 2:-2], dx=hp, axis=1), dx=he)

    # charge: integral of phi^dag (arrival-time generator) phi over p,
    # i.e. minus the Legendre time density
    charge = -np.trapezoid(time_density[2:-2, 2:-2], dx=hp, axis=1)
    charge_eps = field.eps_grid.points[2:-2]

    pi_from_bar = 1j * (vbar @ gamma0)
    pi_direct = 1j * v.conj()
    mom_res = float(np.abs(pi_from_bar - pi_direct).max())

    return ActionResult(
        action=complex(action),
        lagrange_density=interior,
        time_density=time_density,
        charge=charge,
        charge_eps=charge_eps,
        momentum_identity_residual=mom_res,
    )
