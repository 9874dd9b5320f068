import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from toalab.dirac import (
    BASIS,
    EventKinematics,
    MomentumKinematics,
    build_dirac_basis,
    dual_eigen_residual,
    electron_event_spinor,
    electron_spinor,
    particle_eigen_residuals,
    positron_event_spinor,
    positron_spinor,
)

finite_mass = st.floats(min_value=0.01, max_value=100.0)
finite_momentum = st.floats(min_value=0.01, max_value=100.0)
finite_position = st.floats(min_value=0.01, max_value=100.0)
spins = st.sampled_from([0.5, -0.5])


class TestBasis:
    def test_clifford_residual_exact_zero(self):
        assert BASIS.clifford_residual() == 0.0

    def test_beta_squared_identity(self):
        assert np.array_equal(BASIS.beta @ BASIS.beta, np.eye(4))

    def test_alpha_beta_anticommute(self):
        anti = BASIS.alpha1 @ BASIS.beta + BASIS.beta @ BASIS.alpha1
        assert np.abs(anti).max() == 0.0

    def test_alpha_squared_identity(self):
        assert np.array_equal(BASIS.alpha1 @ BASIS.alpha1, np.eye(4))

    def test_sigma1_involution_and_eigenvectors(self):
        assert np.array_equal(BASIS.sigma1 @ BASIS.sigma1, np.eye(2))
        assert np.array_equal(BASIS.sigma1 @ BASIS.eta_up, BASIS.eta_up)
        assert np.array_equal(BASIS.sigma1 @ BASIS.eta_down, -BASIS.eta_down)

    def test_alpha1_is_gamma0_gamma1(self):
        assert np.array_equal(BASIS.alpha1, BASIS.gamma0 @ BASIS.gamma1)

    def test_rebuild_matches_shared_instance(self):
        b = build_dirac_basis()
        assert np.array_equal(b.gamma2, BASIS.gamma2)
        assert b.clifford_residual() == 0.0


class TestKinematics:
    def test_energy_is_positive_root(self):
        k = MomentumKinematics(4.0, 3.0)
        assert k.energy == 5.0
        assert k.shell_residual() == 0.0

    def test_rejects_zero_momentum(self):
        with pytest.raises(ValueError):
            MomentumKinematics(1.0, 0.0)

    def test_rejects_nonpositive_mass(self):
        with pytest.raises(ValueError):
            MomentumKinematics(0.0, 1.0)
        with pytest.raises(ValueError):
            MomentumKinematics(-1.0, 1.0)

    def test_event_from_momentum_satisfies_both_relations(self):
        k = MomentumKinematics(4.0, 3.0)
        e = EventKinematics.from_momentum(k, 1.0)
        assert e.tau == pytest.approx(4.0 / 3.0, abs=1e-15)
        assert e.arrival == pytest.approx(5.0 / 3.0, abs=1e-15)
        assert e.arrival == pytest.approx(1.0 * k.energy / k.p, abs=1e-15)
        assert e.shell_residual() <= 1e-15

    def test_event_rejects_zero_position(self):
        with pytest.raises(ValueError):
            EventKinematics(0.0, 1.0)

    def test_mirrored_event(self):
        e = EventKinematics(2.0, 0.5)
        m = e.mirrored()
        assert m.x == -2.0 and m.tau == 0.5 and m.arrival == e.arrival


class TestParticleSpinors:
    def test_frozen_value_m4_p3(self):
        # closed-form evaluation: E = 5, norm 3/sqrt(10), lower block 1/3
        u = electron_spinor(MomentumKinematics(4.0, 3.0), 0.5)
        expected = np.array([3.0, 0.0, 1.0, 0.0]) / math.sqrt(10.0)
        assert np.abs(u - expected).max() <= 1e-15

    def test_unit_norm_closed_form(self):
        # (m+E)^2 + p^2 = 2E(m+E) makes the norm exactly one
        for m, p in [(4.0, 3.0), (0.5, 2.0), (7.0, -1.5)]:
            k = MomentumKinematics(m, p)
            for s in (0.5, -0.5):
                assert abs(np.vdot(electron_spinor(k, s), electron_spinor(k, s)) - 1) <= 1e-15
                assert abs(np.vdot(positron_spinor(k, s), positron_spinor(k, s)) - 1) <= 1e-15

    def test_eigen_relations_frozen_case(self):
        ru, rv = particle_eigen_residuals(MomentumKinematics(4.0, 3.0), 0.5)
        assert ru <= 1e-14
        assert rv <= 1e-14

    def test_rejects_bad_spin(self):
        with pytest.raises(ValueError):
            electron_spinor(MomentumKinematics(1.0, 1.0), 0.3)

    @settings(max_examples=100, deadline=None)
    @given(m=finite_mass, p=finite_momentum, s=spins)
    def test_eigen_relations_property(self, m, p, s):
        k = MomentumKinematics(m, p)
        ru, rv = particle_eigen_residuals(k, s)
        scale = max(1.0, k.energy)
        assert ru <= 1e-12 * scale
        assert rv <= 1e-12 * scale

    @settings(max_examples=100, deadline=None)
    @given(m=finite_mass, p=finite_momentum, s=spins, sp=spins)
    def test_cross_orthogonality_with_reflected_momentum(self, m, p, s, sp):
        u = electron_spinor(MomentumKinematics(m, p), s)
        v = positron_spinor(MomentumKinematics(m, -p), sp)
        assert abs(np.vdot(u, v)) <= 1e-13

    def test_spin_orthonormality(self):
        k = MomentumKinematics(2.0, 1.0)
        u_up = electron_spinor(k, 0.5)
        u_dn = electron_spinor(k, -0.5)
        assert abs(np.vdot(u_up, u_dn)) == 0.0


class TestEventSpinors:
    def test_massless_like_event(self):
        # zero proper time: arrival magnitude equals |x|
        z = electron_event_spinor(EventKinematics(1.0, 0.0), 0.5)
        expected = np.array([1.0, 0.0, 1.0, 0.0]) / math.sqrt(2.0)
        assert np.abs(z - expected).max() <= 1e-15

    def test_duality_matches_particle_spinor(self):
        # tau = x m/p and T = x E/p turn the event spinor into the particle one
        k = MomentumKinematics(4.0, 3.0)
        e = EventKinematics.from_momentum(k, 1.0)
        for s in (0.5, -0.5):
            z = electron_event_spinor(e, s)
            u = electron_spinor(k, s)
            assert np.abs(z - u).max() <= 1e-13
            xi = positron_event_spinor(e, s)
            v = positron_spinor(k, s)
            assert np.abs(xi - v).max() <= 1e-13

    def test_dual_eigen_residual_zero_proper_time(self):
        rz, rx = dual_eigen_residual(EventKinematics(1.0, 0.0), 0.5)
        assert rz == 0.0
        assert rx == 0.0

    def test_dual_eigen_residual_frozen_case(self):
        e = EventKinematics.from_momentum(MomentumKinematics(4.0, 3.0), 1.0)
        rz, rx = dual_eigen_residual(e, 0.5)
        assert rz <= 1e-14
        assert rx <= 1e-14

    @settings(max_examples=100, deadline=None)
    @given(m=finite_mass, p=finite_momentum, x=finite_position, s=spins)
    def test_dual_eigen_residual_property(self, m, p, x, s):
        e = EventKinematics.from_momentum(MomentumKinematics(m, p), x)
        rz, rx = dual_eigen_residual(e, s)
        scale = max(1.0, e.arrival)
        assert rz <= 1e-12 * scale
        assert rx <= 1e-12 * scale

    @settings(max_examples=60, deadline=None)
    @given(m=finite_mass, p=finite_momentum, x=finite_position, s=spins, sp=spins)
    def test_mirror_orthogonality(self, m, p, x, s, sp):
        e = EventKinematics.from_momentum(MomentumKinematics(m, p), x)
        z = electron_event_spinor(e, s)
        xi = positron_event_spinor(e.mirrored(), sp)
        assert abs(np.vdot(z, xi)) <= 1e-13

    def test_mirror_completeness(self):
        # spin-summed outer products of the site-x electron family and the
        # site -x positron family resolve the identity
        e = EventKinematics(1.3, 0.7)
        total = np.zeros((4, 4), dtype=complex)
        for s in (0.5, -0.5):
            z = electron_event_spinor(e, s)
            xi = positron_event_spinor(e.mirrored(), s)
            total += np.outer(z, z.conj()) + np.outer(xi, xi.conj())
        assert np.abs(total - np.eye(4)).max() <= 1e-15
