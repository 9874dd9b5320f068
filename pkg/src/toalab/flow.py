"""Classical dual mechanics: flows in the energy parameter.

A time function T(q, k) generates evolution in the energy parameter the
same way a Hamiltonian generates evolution in time, with the roles of the
two Hamilton equations exchanged:

    dq/deps = +dT/dk,    dk/deps = -dT/dq.

T itself is conserved along the flow.  Integration is classical RK4 with
a fixed step; conservation is asserted as an order-4 convergence property
of the measured drift, not as exactness.

The two named generators (the relativistic arrival-time function and a
bilinear toy) run through compiled kernels when numba is active; any
user-supplied TimeFunction runs through the generic Python path, with
finite-difference gradients when analytic ones are not given.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import _kernels


class FlowDomainError(RuntimeError):
    """The trajectory left the domain of the generator (e.g. k reached 0)."""


@dataclass(frozen=True)
class DualFlowState:
    """Energy parameter plus generalized coordinates and momenta (n >= 1)."""

    eps: float
    q: np.ndarray
    k: np.ndarray

    def __post_init__(self):
        q = np.atleast_1d(np.asarray(self.q, dtype=float))
        k = np.atleast_1d(np.asarray(self.k, dtype=float))
        if q.shape != k.shape or q.ndim != 1 or q.size < 1:
            raise ValueError("q and k must be 1-d arrays of equal positive length")
        if not (np.isfinite(q).all() and np.isfinite(k).all() and math.isfinite(self.eps)):
            raise ValueError("state must be finite")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "k", k)


_FD_STEP = 1e-6


@dataclass(frozen=True)
class TimeFunction:
    """Generator of the dual flow with optional analytic gradients.

    ``kernel`` names a compiled fast path ("arrival" or "bilinear"); leave
    it None for custom functions.  Missing gradients fall back to central
    finite differences, which agree with analytic ones to ~1e-6 relative.
    """

    fn: Callable[[np.ndarray, np.ndarray], float]
    grad_q: Optional[Callable[[np.ndarray, np.ndarray], np.ndarray]] = None
    grad_k: Optional[Callable[[np.ndarray, np.ndarray], np.ndarray]] = None
    kernel: Optional[str] = None
    params: tuple = ()

    def value(self, q, k) -> float:
        return float(self.fn(np.asarray(q, float), np.asarray(k, float)))

    def gradients(self, q: np.ndarray, k: np.ndarray, use_fd: bool = False):
        if not use_fd and self.grad_q is not None and self.grad_k is not None:
            return np.asarray(self.grad_q(q, k), float), np.asarray(self.grad_k(q, k), float)
        return self._fd_grad(q, k)

    def _fd_grad(self, q: np.ndarray, k: np.ndarray):
        gq = np.empty_like(q)
        gk = np.empty_like(k)
        for i in range(q.size):
            h = _FD_STEP * max(1.0, abs(q[i]))
            qp, qm = q.copy(), q.copy()
            qp[i] += h
            qm[i] -= h
            gq[i] = (self.fn(qp, k) - self.fn(qm, k)) / (2.0 * h)
            h = _FD_STEP * max(1.0, abs(k[i]))
            kp, km = k.copy(), k.copy()
            kp[i] += h
            km[i] -= h
            gk[i] = (self.fn(q, kp) - self.fn(q, km)) / (2.0 * h)
        return gq, gk


def arrival_time_function(m: float) -> TimeFunction:
    """T(q, k) = -q sqrt(k^2 + m^2)/k, the classical arrival-time generator."""

    def fn(q, k):
        return float(-q[0] * math.hypot(k[0], m) / k[0])

    def grad_q(q, k):
        return np.array([-math.hypot(k[0], m) / k[0]])

    def grad_k(q, k):
        e = math.hypot(k[0], m)
        return np.array([q[0] * m * m / (e * k[0] * k[0])])

    return TimeFunction(fn, grad_q, grad_k, kernel="arrival", params=(m,))


def bilinear_time_function() -> TimeFunction:
    """T(q, k) = q . k: generates the linear flow q -> q e^eps, k -> k e^-eps."""

    def fn(q, k):
        return float(np.dot(q, k))

    def grad_q(q, k):
        return k.copy()

    def grad_k(q, k):
        return q.copy()

    return TimeFunction(fn, grad_q, grad_k, kernel="bilinear")


def constant_time_function(c: float = 0.0) -> TimeFunction:
    """A constant generator: the flow leaves (q, k) untouched."""
    return TimeFunction(
        fn=lambda q, k: c,
        grad_q=lambda q, k: np.zeros_like(q),
        grad_k=lambda q, k: np.zeros_like(k),
    )


def _rhs(t: TimeFunction, q, k, use_fd):
    gq, gk = t.gradients(q, k, use_fd=use_fd)
    if not (np.isfinite(gq).all() and np.isfinite(gk).all()):
        raise FlowDomainError(f"gradient evaluation failed at q={q}, k={k}")
    return gk, -gq  # (dq/deps, dk/deps)


def flow_step(state: DualFlowState, t: TimeFunction, h_eps: float,
              use_fd_gradients: bool = False) -> DualFlowState:
    """One classical RK4 step of the dual flow."""
    if h_eps <= 0:
        raise ValueError("step must be positive")
    q, k = state.q, state.k
    dq1, dk1 = _rhs(t, q, k, use_fd_gradients)
    dq2, dk2 = _rhs(t, q + 0.5 * h_eps * dq1, k + 0.5 * h_eps * dk1, use_fd_gradients)
    dq3, dk3 = _rhs(t, q + 0.5 * h_eps * dq2, k + 0.5 * h_eps * dk2, use_fd_gradients)
    dq4, dk4 = _rhs(t, q + h_eps * dq3, k + h_eps * dk3, use_fd_gradients)
    qn = q + h_eps * (dq1 + 2 * dq2 + 2 * dq3 + dq4) / 6.0
    kn = k + h_eps * (dk1 + 2 * dk2 + 2 * dk3 + dk4) / 6.0
    return DualFlowState(state.eps + h_eps, qn, kn)


@dataclass(frozen=True)
class FlowResult:
    """Sampled trajectory plus the conservation diagnostic."""

    eps: np.ndarray
    q: np.ndarray          # (n_samples, n_dof)
    k: np.ndarray
    values: np.ndarray     # T along the sampled trajectory
    initial_value: float
    max_drift: float       # max |T - T0| over every integration step

    @property
    def relative_drift(self) -> float:
        scale = abs(self.initial_value)
        return self.max_drift / scale if scale > 0 else self.max_drift


def integrate_flow(state0: DualFlowState, t: TimeFunction, eps_span: float,
                   h_eps: float, use_fd_gradients: bool = False,
                   k_exclusion: float = 1e-9) -> FlowResult:
    """Integrate the flow over [eps0, eps0 + span] with a fixed RK4 step.

    The drift is tracked at every step, not only at sampled outputs.  For
    the arrival-time generator the momentum must stay away from zero;
    crossing the exclusion band aborts with a diagnostic.
    """
    if eps_span <= 0 or h_eps <= 0:
        raise ValueError("span and step must be positive")
    n_steps = int(round(eps_span / h_eps))
    if n_steps < 1:
        raise ValueError("span shorter than one step")

    fast = (
        _kernels.USING_NUMBA
        and not use_fd_gradients
        and t.kernel in ("arrival", "bilinear")
        and state0.q.size == 1
    )
    t0_val = t.value(state0.q, state0.k)
    if fast:
        if t.kernel == "arrival":
            qs, ks, drift = _kernels.rk4_arrival_flow(
                state0.q[0], state0.k[0], t.params[0], h_eps, n_steps, t0_val)
        else:
            qs, ks, drift = _kernels.rk4_bilinear_flow(
                state0.q[0], state0.k[0], h_eps, n_steps, t0_val)
        if not math.isfinite(drift):
            raise FlowDomainError("momentum reached zero during integration")
        eps = state0.eps + h_eps * np.arange(n_steps + 1)
        q_arr = qs[:, None]
        k_arr = ks[:, None]
    else:
        q_arr = np.empty((n_steps + 1, state0.q.size))
        k_arr = np.empty_like(q_arr)
        eps = state0.eps + h_eps * np.arange(n_steps + 1)
        q_arr[0], k_arr[0] = state0.q, state0.k
        state = state0
        drift = 0.0
        for i in range(n_steps):
            state = flow_step(state, t, h_eps, use_fd_gradients)
            if t.kernel == "arrival" and abs(state.k[0]) <= k_exclusion:
                raise FlowDomainError(
                    f"momentum entered the exclusion band at eps={state.eps:g}")
            q_arr[i + 1], k_arr[i + 1] = state.q, state.k
            drift = max(drift, abs(t.value(state.q, state.k) - t0_val))

    values = np.array([t.value(q_arr[i], k_arr[i]) for i in range(n_steps + 1)])
    return FlowResult(eps=eps, q=q_arr, k=k_arr, values=values,
                      initial_value=t0_val, max_drift=float(drift))


def gradient_consistency(t: TimeFunction, q, k) -> float:
    """Relative disagreement between analytic and FD gradients at one point."""
    q = np.atleast_1d(np.asarray(q, float))
    k = np.atleast_1d(np.asarray(k, float))
    if t.grad_q is None or t.grad_k is None:
        raise ValueError("time function has no analytic gradients to compare")
    aq, ak = t.gradients(q, k, use_fd=False)
    fq, fk = t._fd_grad(q, k)
    scale = max(np.abs(aq).max(), np.abs(ak).max(), 1e-30)
    return float(max(np.abs(aq - fq).max(), np.abs(ak - fk).max()) / scale)
