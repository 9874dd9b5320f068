"""Hot numeric kernels: numba-compiled with a pure-numpy fallback.

The fallback is selected automatically when numba is unavailable and can
be forced with the environment variable ``TOALAB_NO_NUMBA=1`` (checked at
import time).  Both paths perform the same arithmetic in the same order,
so results agree to the last bit; ``benchmarks/bench_kernels.py`` compares
their throughput.

Only loop-dominated work lives here: the fixed-step RK4 integration of
dual flows (tens of thousands of tiny steps) and the five-point stencil
residual of the energy-shift equation.  Dense linear algebra stays in
numpy/BLAS where numba adds nothing.
"""

from __future__ import annotations

import math
import os

import numpy as np

_DISABLED = os.environ.get("TOALAB_NO_NUMBA", "").strip() in ("1", "true", "yes")

if not _DISABLED:
    try:
        from numba import njit

        USING_NUMBA = True
    except ImportError:  # pragma: no cover - exercised only without numba
        USING_NUMBA = False
else:
    USING_NUMBA = False

if not USING_NUMBA:
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(fn):
            return fn

        return wrap


@njit(cache=True)
def rk4_arrival_flow(q0, k0, m, h, n_steps, t0):
    """RK4 for the arrival-time generator T = -q sqrt(k^2+m^2)/k, 1 DOF.

    Returns the per-step (q, k) trajectory and the largest deviation of
    T(q, k) from ``t0`` seen at any step.  Aborts (drift = inf) if k
    reaches zero.
    """
    qs = np.empty(n_steps + 1)
    ks = np.empty(n_steps + 1)
    qs[0] = q0
    ks[0] = k0
    q = q0
    k = k0
    drift = 0.0
    for i in range(n_steps):
        if k == 0.0:
            return qs[: i + 1], ks[: i + 1], math.inf
        e1 = math.hypot(k, m)
        dq1 = q * m * m / (e1 * k * k)
        dk1 = e1 / k
        qa = q + 0.5 * h * dq1
        ka = k + 0.5 * h * dk1
        e2 = math.hypot(ka, m)
        dq2 = qa * m * m / (e2 * ka * ka)
        dk2 = e2 / ka
        qb = q + 0.5 * h * dq2
        kb = k + 0.5 * h * dk2
        e3 = math.hypot(kb, m)
        dq3 = qb * m * m / (e3 * kb * kb)
        dk3 = e3 / kb
        qc = q + h * dq3
        kc = k + h * dk3
        e4 = math.hypot(kc, m)
        dq4 = qc * m * m / (e4 * kc * kc)
        dk4 = e4 / kc
        q = q + h * (dq1 + 2.0 * dq2 + 2.0 * dq3 + dq4) / 6.0
        k = k + h * (dk1 + 2.0 * dk2 + 2.0 * dk3 + dk4) / 6.0
        qs[i + 1] = q
        ks[i + 1] = k
        dev = abs(-q * math.hypot(k, m) / k - t0)
        if dev > drift:
            drift = dev
    return qs, ks, drift


@njit(cache=True)
def rk4_bilinear_flow(q0, k0, h, n_steps, t0):
    """RK4 for the bilinear generator T = q k (dq/de = q, dk/de = -k)."""
    qs = np.empty(n_steps + 1)
    ks = np.empty(n_steps + 1)
    qs[0] = q0
    ks[0] = k0
    q = q0
    k = k0
    drift = 0.0
    for i in range(n_steps):
        dq1, dk1 = q, -k
        qa, ka = q + 0.5 * h * dq1, k + 0.5 * h * dk1
        dq2, dk2 = qa, -ka
        qb, kb = q + 0.5 * h * dq2, k + 0.5 * h * dk2
        dq3, dk3 = qb, -kb
        qc, kc = q + h * dq3, k + h * dk3
        dq4, dk4 = qc, -kc
        q = q + h * (dq1 + 2.0 * dq2 + 2.0 * dq3 + dq4) / 6.0
        k = k + h * (dk1 + 2.0 * dk2 + 2.0 * dk3 + dk4) / 6.0
        qs[i + 1] = q
        ks[i + 1] = k
        dev = abs(q * k - t0)
        if dev > drift:
            drift = dev
    return qs, ks, drift


@njit(cache=True)
def shift_stencil_residual(values, h_eps, h_p, tau):
    """Interior max norm of -i d/d_eps phi + (alpha1 xhat + beta tau) phi.

    ``values`` is (n_eps, n_p, 4) complex with the spinor blocks of the
    fixed representation hard-wired: alpha1 swaps components (0,2) and
    (1,3) with signs (+,-,-,+) from the diagonal sigma, beta is
    diag(1,1,-1,-1).  xhat = +i d/dp; both derivatives are central.
    """
    ne, npts, _ = values.shape
    worst = 0.0
    for a in range(1, ne - 1):
        for b in range(1, npts - 1):
            acc = 0.0
            for c in range(4):
                de = (values[a + 1, b, c] - values[a - 1, b, c]) / (2.0 * h_eps)
                lhs = -1j * de
                # xhat phi = i * dphi/dp, component c
                if c == 0:
                    src = 2
                    sgn = 1.0
                elif c == 1:
                    src = 3
                    sgn = -1.0
                elif c == 2:
                    src = 0
                    sgn = 1.0
                else:
                    src = 1
                    sgn = -1.0
                dp = (values[a, b + 1, src] - values[a, b - 1, src]) / (2.0 * h_p)
                alpha_term = sgn * (1j * dp)
                beta_sign = 1.0 if c < 2 else -1.0
                res = lhs + alpha_term + tau * beta_sign * values[a, b, c]
                mag = abs(res)
                if mag > acc:
                    acc = mag
            if acc > worst:
                worst = acc
    return worst


def shift_stencil_residual_numpy(values, h_eps, h_p, tau):
    """Vectorized twin of ``shift_stencil_residual`` (pure numpy)."""
    de = (values[2:, 1:-1, :] - values[:-2, 1:-1, :]) / (2.0 * h_eps)
    dp = (values[1:-1, 2:, :] - values[1:-1, :-2, :]) / (2.0 * h_p)
    xhat = 1j * dp
    alpha_term = np.empty_like(xhat)
    alpha_term[..., 0] = xhat[..., 2]
    alpha_term[..., 1] = -xhat[..., 3]
    alpha_term[..., 2] = xhat[..., 0]
    alpha_term[..., 3] = -xhat[..., 1]
    beta_sign = np.array([1.0, 1.0, -1.0, -1.0])
    res = -1j * de + alpha_term + tau * beta_sign * values[1:-1, 1:-1, :]
    return float(np.abs(res).max())
