import math

import numpy as np
import pytest

from toalab import _kernels, flow
from toalab.flow import (
    DualFlowState,
    FlowDomainError,
    TimeFunction,
    arrival_time_function,
    bilinear_time_function,
    constant_time_function,
    flow_step,
    gradient_consistency,
    integrate_flow,
)


def state(q=1.0, k=1.0):
    return DualFlowState(0.0, np.array([q]), np.array([k]))


class TestStep:
    def test_constant_generator_leaves_state_fixed(self):
        out = flow_step(state(), constant_time_function(3.0), 0.25)
        assert out.eps == 0.25
        assert np.array_equal(out.q, [1.0])
        assert np.array_equal(out.k, [1.0])

    def test_bilinear_flow_matches_exponentials(self):
        # dq/de = q, dk/de = -k: closed form is e^{+-eps}
        t = bilinear_time_function()
        s = state(1.0, 1.0)
        h = 1e-2
        for _ in range(100):
            s = flow_step(s, t, h)
        assert s.q[0] == pytest.approx(math.e, abs=1e-6)
        assert s.k[0] == pytest.approx(1.0 / math.e, abs=1e-6)

    def test_arrival_gradients_at_unit_point(self):
        t = arrival_time_function(1.0)
        gq, gk = t.gradients(np.array([1.0]), np.array([1.0]))
        assert gk[0] == pytest.approx(1.0 / math.sqrt(2.0), abs=1e-14)   # dq/deps
        assert -gq[0] == pytest.approx(math.sqrt(2.0), abs=1e-14)        # dk/deps

    def test_rejects_nonpositive_step(self):
        with pytest.raises(ValueError):
            flow_step(state(), bilinear_time_function(), 0.0)


class TestIntegration:
    def test_initial_value_is_minus_sqrt_two(self):
        t = arrival_time_function(1.0)
        r = integrate_flow(state(), t, 1.0, 1e-2)
        assert r.initial_value == pytest.approx(-math.sqrt(2.0), abs=1e-12)

    def test_conservation_at_reference_parameters(self):
        t = arrival_time_function(1.0)
        r = integrate_flow(state(), t, 10.0, 1e-3)
        assert r.relative_drift <= 1e-8

    def test_drift_converges_at_fourth_order(self):
        t = arrival_time_function(1.0)
        drifts = []
        hs = [1.6e-2, 8e-3, 4e-3]
        for h in hs:
            drifts.append(integrate_flow(state(), t, 10.0, h).relative_drift)
        assert drifts[0] / drifts[1] == pytest.approx(16.0, rel=0.3)
        slope = np.polyfit(np.log(hs), np.log(drifts), 1)[0]
        assert slope == pytest.approx(4.0, abs=0.3)

    def test_fd_gradients_reproduce_analytic_trajectory(self):
        t = arrival_time_function(1.0)
        a = integrate_flow(state(), t, 2.0, 1e-2)
        b = integrate_flow(state(), t, 2.0, 1e-2, use_fd_gradients=True)
        assert np.abs(a.q - b.q).max() <= 1e-6
        assert np.abs(a.k - b.k).max() <= 1e-6

    def test_gradient_consistency_pointwise(self):
        t = arrival_time_function(1.0)
        assert gradient_consistency(t, [1.0], [1.0]) <= 1e-6

    def test_trajectory_is_recorded(self):
        t = bilinear_time_function()
        r = integrate_flow(state(2.0, 0.5), t, 1.0, 0.1)
        assert len(r.eps) == 11
        assert r.q[0, 0] == 2.0 and r.k[0, 0] == 0.5
        assert r.values[0] == pytest.approx(1.0)

    def test_momentum_exclusion_aborts_with_diagnostic(self):
        # a generator pushing k toward zero: T = +q E/k makes dk/deps = -E/k
        def fn(q, k):
            return float(q[0] * math.hypot(k[0], 1.0) / k[0])

        def grad_q(q, k):
            return np.array([math.hypot(k[0], 1.0) / k[0]])

        def grad_k(q, k):
            e = math.hypot(k[0], 1.0)
            return np.array([-q[0] / (e * k[0] * k[0])])

        t = TimeFunction(fn, grad_q, grad_k, kernel="arrival", params=(1.0,))
        with pytest.raises(FlowDomainError):
            integrate_flow(state(1.0, 0.5), t, 5.0, 1e-2,
                           use_fd_gradients=True, k_exclusion=0.05)

    def test_nonfinite_gradient_raises(self):
        t = TimeFunction(fn=lambda q, k: math.sqrt(k[0] - 2.0) if k[0] >= 2 else float("nan"))
        with pytest.raises(FlowDomainError):
            integrate_flow(state(1.0, 1.0), t, 1.0, 0.1)

    def test_kernel_and_python_paths_agree(self, monkeypatch):
        t = arrival_time_function(1.0)
        fast = integrate_flow(state(), t, 1.0, 1e-2)
        monkeypatch.setattr(_kernels, "USING_NUMBA", False)
        slow = integrate_flow(state(), t, 1.0, 1e-2)
        assert np.abs(fast.q - slow.q).max() <= 1e-13
        assert np.abs(fast.k - slow.k).max() <= 1e-13
        assert fast.max_drift == pytest.approx(slow.max_drift, rel=1e-10, abs=1e-16)


class TestValidation:
    def test_state_shape_mismatch(self):
        with pytest.raises(ValueError):
            DualFlowState(0.0, np.array([1.0, 2.0]), np.array([1.0]))

    def test_state_must_be_finite(self):
        with pytest.raises(ValueError):
            DualFlowState(0.0, np.array([np.inf]), np.array([1.0]))

    def test_span_and_step_positive(self):
        t = bilinear_time_function()
        with pytest.raises(ValueError):
            integrate_flow(state(), t, -1.0, 0.1)
        with pytest.raises(ValueError):
            integrate_flow(state(), t, 1.0, -0.1)
