import math

import numpy as np
import pytest

from toalab import grids
from toalab.dirac import BASIS, MomentumKinematics, electron_spinor
from toalab.grids import (
    Grid1D,
    SpinorField,
    arrival_time_dual,
    arrival_time_momentum,
    commutator_residual,
    conjugate_coordinate_op,
    coordinate_op,
    derivative_op,
    fit_order,
    hamiltonian_dual,
    hamiltonian_momentum,
    hermiticity_defect,
    interior_probe,
    momentum_grid,
    position_grid,
    proper_mass_position,
    proper_time_momentum,
    symmetric_momentum_grid,
    weyl_symmetrize,
)


class TestGrid1D:
    def test_spacing_and_points(self):
        g = momentum_grid(0.5, 4.0, 8)
        assert g.spacing == pytest.approx(0.5)
        assert g.points[0] == 0.5 and g.points[-1] == 4.0
        assert np.all(np.diff(g.points) > 0)

    def test_rejects_grid_through_origin_without_exclusion(self):
        with pytest.raises(ValueError):
            momentum_grid(-1.0, 1.0, 11)

    def test_rejects_point_inside_exclusion(self):
        # 11 points on [-1, 1] include 0 itself
        with pytest.raises(ValueError):
            momentum_grid(-1.0, 1.0, 11, exclusion=0.05)

    def test_symmetric_grid_avoids_origin(self):
        g = symmetric_momentum_grid(4, 0.3)
        assert np.abs(g.points).min() == pytest.approx(0.15)
        assert g.n_points == 8

    def test_energy_axis_may_hold_zero(self):
        g = Grid1D("energy", -1.0, 1.0, 21)
        assert 0.0 in g.points

    def test_too_few_points(self):
        with pytest.raises(ValueError):
            momentum_grid(0.5, 4.0, 2)

    def test_refined_halves_spacing(self):
        g = momentum_grid(0.5, 4.0, 101)
        r = g.refined()
        assert r.n_points == 201
        assert r.spacing == pytest.approx(g.spacing / 2)


class TestDerivative:
    def test_constant_field_killed_on_interior(self):
        g = momentum_grid(0.5, 4.0, 51)
        f = SpinorField(g, np.ones((51, 4), dtype=complex))
        out = derivative_op(g).apply(f)
        assert np.abs(out.values[1:-1]).max() <= 1e-13

    def test_plane_wave_taylor_remainder(self):
        # d/dp of exp(-i p x): central-difference error is |x|^3 h^2 / 6
        x = 1.0
        g = momentum_grid(0.5, 4.0, 351)  # h = 0.01
        assert g.spacing == pytest.approx(0.01)
        wave = np.exp(-1j * g.points * x)
        f = SpinorField(g, np.outer(wave, [1, 0, 0, 0]))
        out = derivative_op(g).apply(f)
        exact = -1j * x * wave
        err = np.abs(out.values[1:-1, 0] - exact[1:-1]).max()
        predicted = abs(x) ** 3 * g.spacing**2 / 6.0
        assert predicted == pytest.approx(1.6667e-5, rel=1e-3)
        assert err == pytest.approx(predicted, rel=0.3)

    def test_halving_shrinks_error_fourfold(self):
        x = 1.0
        errs = []
        for n in (351, 701):
            g = momentum_grid(0.5, 4.0, n)
            wave = np.exp(-1j * g.points * x)
            f = SpinorField(g, np.outer(wave, [1, 0, 0, 0]))
            out = derivative_op(g).apply(f)
            errs.append(np.abs(out.values[1:-1, 0] + 1j * x * wave[1:-1]).max())
        assert errs[0] / errs[1] == pytest.approx(4.0, rel=0.2)

    def test_interior_rows_antisymmetric(self):
        g = momentum_grid(0.5, 4.0, 21)
        d = derivative_op(g).matrix
        inner = d[4:-4, 4:-4]
        assert np.abs(inner + inner.T).max() == 0.0


class TestWeyl:
    def test_idempotent_case(self):
        g = momentum_grid(0.5, 4.0, 11)
        a = conjugate_coordinate_op(g)
        w = weyl_symmetrize(a, a)
        assert np.abs(w.matrix - (a @ a).matrix).max() <= 1e-14

    def test_commuting_diagonals_multiply_entrywise(self):
        g = momentum_grid(0.5, 4.0, 11)
        a = coordinate_op(g)
        b = grids.GridOperator(g, np.diag(np.repeat(g.points**2, 4)).astype(complex))
        w = weyl_symmetrize(a, b)
        expected = np.diag(np.repeat(g.points**3, 4))
        assert np.abs(w.matrix - expected).max() <= 1e-12

    def test_symmetric_in_arguments(self):
        g = momentum_grid(0.5, 4.0, 31)
        a = coordinate_op(g)
        b = conjugate_coordinate_op(g)
        assert np.array_equal(weyl_symmetrize(a, b).matrix,
                              weyl_symmetrize(b, a).matrix)

    def test_coordinate_pair_hermitian_on_interior_entries(self):
        g = position_grid(0.5, 4.0, 101)
        w = weyl_symmetrize(coordinate_op(g), conjugate_coordinate_op(g)).matrix
        inner = w[4:-4, 4:-4]
        assert np.abs(inner - inner.conj().T).max() <= 1e-12

    def test_dimension_mismatch_rejected(self):
        a = coordinate_op(momentum_grid(0.5, 4.0, 11))
        b = coordinate_op(momentum_grid(0.5, 4.0, 13))
        with pytest.raises(ValueError):
            weyl_symmetrize(a, b)


class TestOperatorAssembly:
    def test_hamiltonian_block_diagonal_and_hermitian(self):
        g = momentum_grid(0.5, 4.0, 41)
        h = hamiltonian_momentum(g, 1.0).matrix
        assert np.abs(h - h.conj().T).max() == 0.0
        off = h.copy()
        for j in range(41):
            off[4 * j:4 * j + 4, 4 * j:4 * j + 4] = 0.0
        assert np.abs(off).max() == 0.0

    def test_hamiltonian_acts_pointwise_on_spinor_samples(self):
        m = 1.3
        g = momentum_grid(0.5, 4.0, 41)
        vals = np.array([electron_spinor(MomentumKinematics(m, p), 0.5)
                         for p in g.points])
        f = SpinorField(g, vals)
        out = hamiltonian_momentum(g, m).apply(f)
        energies = np.hypot(g.points, m)
        assert np.abs(out.values - energies[:, None] * vals).max() <= 1e-13

    def test_massless_arrival_time_is_alpha_times_derivative(self):
        g = momentum_grid(0.5, 4.0, 31)
        t = arrival_time_momentum(g, 0.0).matrix
        expected = np.kron(np.eye(31), BASIS.alpha1) @ (-1j * derivative_op(g).matrix)
        assert np.abs(t - expected).max() == 0.0

    def test_massless_proper_time_vanishes(self):
        g = momentum_grid(0.5, 4.0, 31)
        assert np.abs(proper_time_momentum(g, 0.0).matrix).max() == 0.0

    def test_zero_proper_time_mass_op_vanishes(self):
        g = position_grid(0.5, 4.0, 31)
        assert np.abs(proper_mass_position(g, 0.0).matrix).max() == 0.0

    def test_arrival_time_hermitian_in_action(self):
        devs = []
        for n in (101, 201):
            g = momentum_grid(0.5, 4.0, n)
            top = arrival_time_momentum(g, 1.0)
            devs.append(hermiticity_defect(top, interior_probe(g)))
        assert devs[0] / devs[1] == pytest.approx(4.0, rel=0.3)

    def test_rejects_origin_grid(self):
        # 10 points on [-1, 1]: closest points are +-1/9, legal with exclusion
        g = Grid1D("momentum", -1.0, 1.0, 10, exclusion=0.1)
        assert np.abs(g.points).min() == pytest.approx(1.0 / 9.0)
        assert hamiltonian_momentum(g, 1.0) is not None
        with pytest.raises(ValueError):
            momentum_grid(0.0, 4.0, 11)


class TestCommutators:
    def test_self_commutator(self):
        g = position_grid(0.5, 4.0, 101)
        a = coordinate_op(g)
        probe = interior_probe(g)
        assert commutator_residual(a, a, 0.0, probe) == 0.0
        assert commutator_residual(a, a, 1j, probe) == pytest.approx(1.0)

    def test_position_momentum_pair_second_order(self):
        residuals, spacings = [], []
        for n in (151, 301, 601):
            g = position_grid(0.5, 4.0, n)
            r = commutator_residual(coordinate_op(g), conjugate_coordinate_op(g),
                                    1j, interior_probe(g))
            residuals.append(r)
            spacings.append(g.spacing)
        assert residuals[0] / residuals[1] == pytest.approx(4.0, rel=0.2)
        order = fit_order(spacings, residuals)
        assert 1.7 <= order <= 2.3

    def test_arrival_hamiltonian_pair(self):
        residuals, spacings = [], []
        for n in (151, 301, 601):
            g = momentum_grid(0.5, 4.0, n)
            r = commutator_residual(
                hamiltonian_momentum(g, 1.0), arrival_time_momentum(g, 1.0),
                1j, interior_probe(g))
            residuals.append(r)
            spacings.append(g.spacing)
        order = fit_order(spacings, residuals)
        assert 1.7 <= order <= 2.3

    def test_dual_pair_negative_commutator(self):
        residuals, spacings = [], []
        for n in (151, 301, 601):
            g = position_grid(0.5, 4.0, n)
            r = commutator_residual(
                arrival_time_dual(g, 0.7), hamiltonian_dual(g, 0.7),
                -1j, interior_probe(g))
            residuals.append(r)
            spacings.append(g.spacing)
        order = fit_order(spacings, residuals)
        assert 1.7 <= order <= 2.3

    def test_probe_support_precondition(self):
        g = position_grid(0.5, 4.0, 51)
        bad = SpinorField(g, np.ones((51, 4), dtype=complex))
        a = coordinate_op(g)
        with pytest.raises(ValueError):
            commutator_residual(a, a, 0.0, bad)

    def test_dual_hamiltonian_requires_position_axis(self):
        g = momentum_grid(0.5, 4.0, 31)
        with pytest.raises(ValueError):
            hamiltonian_dual(g, 0.5)
