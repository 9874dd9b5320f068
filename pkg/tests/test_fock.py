import itertools
import math

import numpy as np
import pytest

from toalab import fock
from toalab.fock import (
    ELECTRON,
    POSITRON,
    ModeLabel,
    ModeSet,
    basis_state,
    event_mode_set,
    event_statistics,
    field_car_check,
    ladder_operators,
    number_form_arrival_time,
    quadratic_form_arrival_time,
    sorted_spectrum,
    vacuum_state,
)


def paired_modes(lattice_k=(1, 2), n_grid=2, spacing=0.4, tau=0.6, spins=(0.5, -0.5)):
    return event_mode_set(list(lattice_k), n_grid, spacing, tau, spins=spins)


class TestLadders:
    def test_single_mode_matrix(self):
        modes = paired_modes(lattice_k=(1,), spins=(0.5,), n_grid=1, spacing=1.0)
        # one electron + one positron mode; check the first factor shape
        single = event_mode_set([1], 1, 1.0, 0.6, spins=(0.5,),
                                species=(ELECTRON,))
        ops = ladder_operators(single)
        assert len(ops) == 1
        assert np.array_equal(ops[0], np.array([[0, 1], [0, 0]], dtype=complex))
        anti = ops[0] @ ops[0].conj().T + ops[0].conj().T @ ops[0]
        assert np.array_equal(anti, np.eye(2))

    def test_two_mode_mixed_anticommutators_exact(self):
        modes = paired_modes(lattice_k=(1,), spins=(0.5,))
        a, b = ladder_operators(modes)
        assert np.abs(a @ b + b @ a).max() == 0.0
        assert np.abs(a @ b.conj().T + b.conj().T @ a).max() == 0.0

    def test_eight_mode_exhaustive_car(self):
        modes = paired_modes()
        ops = ladder_operators(modes)
        eye = np.eye(modes.dim)
        worst = 0.0
        for i, a in enumerate(ops):
            for j, b in enumerate(ops):
                worst = max(worst, np.abs(a @ b + b @ a).max())
                anti = a @ b.conj().T + b.conj().T @ a
                worst = max(worst, np.abs(anti - (eye if i == j else 0.0)).max())
        assert worst == 0.0

    def test_canonical_ordering_electrons_first(self):
        modes = paired_modes()
        species = [l.species for l in modes.labels]
        assert species == [ELECTRON] * 4 + [POSITRON] * 4
        # lattice order, then spin up before down
        assert modes.labels[0].s == 0.5 and modes.labels[1].s == -0.5
        assert modes.labels[0].x < modes.labels[2].x


class TestModeSetValidation:
    def test_rejects_off_lattice_position(self):
        label = ModeLabel(ELECTRON, 0.123, 0.5, 0.6, math.hypot(0.123, 0.6))
        with pytest.raises(ValueError):
            ModeSet((label,), n_grid=2, spacing=0.4, p_offset=0.2, tau=0.6)

    def test_rejects_zero_lattice_index(self):
        with pytest.raises(ValueError):
            event_mode_set([0], 2, 0.4, 0.6)

    def test_rejects_duplicates(self):
        m = paired_modes(lattice_k=(1,), spins=(0.5,))
        with pytest.raises(ValueError):
            ModeSet(m.labels + m.labels, 2, 0.4, m.p_offset, 0.6)

    def test_mode_cap(self):
        with pytest.raises(ValueError):
            event_mode_set([1, 2, 3, 4], 4, 0.4, 0.6)  # 16 modes

    def test_completeness_flag(self):
        assert paired_modes().is_complete()
        assert not paired_modes(lattice_k=(1,)).is_complete()
        assert not paired_modes(spins=(0.5,)).is_complete()


class TestNumberForm:
    def unit_lattice_modes(self, tau=0.75):
        # n_grid=2, spacing pi: conjugate unit 2 pi/(2 pi) = 1, so x_1 = 1
        return event_mode_set([1], 2, math.pi, tau)

    def test_vacuum_zero_point_value(self):
        modes = self.unit_lattice_modes()
        t35 = number_form_arrival_time(modes)
        # two (x, s) pairs at T = 1.25 each
        assert t35[0, 0].real == pytest.approx(-2.5, abs=1e-15)

    def test_fully_occupied_state(self):
        modes = self.unit_lattice_modes()
        t35 = number_form_arrival_time(modes)
        full = basis_state(modes, range(modes.n_modes))
        mean, var = event_statistics(full, t35)
        assert mean == pytest.approx(2.5, abs=1e-14)
        assert var == pytest.approx(0.0, abs=1e-14)

    def test_single_event_state(self):
        modes = self.unit_lattice_modes()
        t35 = number_form_arrival_time(modes)
        one = basis_state(modes, [0])
        mean, _ = event_statistics(one, t35)
        assert mean == pytest.approx(1.25 - 2.5, abs=1e-14)

    def test_matrix_is_diagonal(self):
        t35 = number_form_arrival_time(paired_modes())
        assert np.abs(t35 - np.diag(np.diagonal(t35))).max() == 0.0

    def test_spectrum_by_exhaustive_enumeration(self):
        modes = paired_modes(lattice_k=(1, 2))
        t35 = number_form_arrival_time(modes)
        pairs = modes.pair_keys()
        t_of = {key: math.hypot(key[0], modes.tau) for key in pairs}
        values = []
        for occ in itertools.product((0, 1), repeat=len(pairs) * 2):
            total = 0.0
            for i, key in enumerate(pairs):
                total += (occ[2 * i] + occ[2 * i + 1] - 1) * t_of[key]
            values.append(total)
        assert np.allclose(np.sort(values), sorted_spectrum(t35), atol=1e-12)

    def test_additivity_over_disjoint_lattice_sites(self):
        # concatenated labels: the occupation diagonal splits as a kron sum
        m1 = paired_modes(lattice_k=(1,))
        m2 = paired_modes(lattice_k=(2,))
        union = ModeSet(m1.labels + m2.labels, 2, 0.4, m1.p_offset, 0.6)
        d1 = np.diagonal(number_form_arrival_time(m1)).real
        d2 = np.diagonal(number_form_arrival_time(m2)).real
        d_union = np.diagonal(number_form_arrival_time(union)).real
        assert np.array_equal(d_union, np.add.outer(d1, d2).reshape(-1))


class TestQuadraticForm:
    def test_two_mode_reconstruction(self):
        modes = paired_modes(lattice_k=(1,), spins=(0.5,))
        r = quadratic_form_arrival_time(modes)
        assert r.residual <= 1e-10
        assert r.sigma in (-1, 1)

    def test_eight_mode_reconstruction_consistent_sigma(self):
        r2 = quadratic_form_arrival_time(paired_modes(lattice_k=(1,), spins=(0.5,)))
        r8 = quadratic_form_arrival_time(paired_modes())
        assert r8.residual <= 1e-10
        assert r8.sigma == r2.sigma

    def test_sign_is_minus_one(self):
        # the empirically determined global sign, frozen after measurement
        r = quadratic_form_arrival_time(paired_modes())
        assert r.sigma == -1

    def test_parameter_shift_leaves_reconstruction_exact(self):
        r = quadratic_form_arrival_time(paired_modes(), eps=0.37)
        assert r.residual <= 1e-10

    def test_empty_mode_set(self):
        modes = event_mode_set([], 2, 0.4, 0.6)
        r = quadratic_form_arrival_time(modes)
        assert r.matrix.shape == (1, 1)
        assert r.residual == 0.0

    def test_unpaired_species_rejected(self):
        modes = event_mode_set([1], 2, 0.4, 0.6, species=(ELECTRON,))
        with pytest.raises(ValueError):
            quadratic_form_arrival_time(modes)


class TestFieldCar:
    def test_complete_lattice_exact(self):
        r = field_car_check(paired_modes())
        assert r.complete
        assert r.phi_pi_residual <= 1e-12
        assert r.phi_phi_residual <= 1e-12
        assert r.note == "complete conjugate lattice"

    def test_incomplete_set_flagged_not_failed(self):
        r = field_car_check(paired_modes(lattice_k=(1,), spins=(0.5,)))
        assert not r.complete
        assert r.note == "incomplete basis"
        assert r.phi_pi_residual > 1e-3

    def test_mode_cap_for_field_check(self):
        modes = event_mode_set([1, 2, 3], 3, 0.4, 0.6)
        with pytest.raises(ValueError):
            field_car_check(modes)


class TestStatistics:
    def test_vacuum_statistics(self):
        modes = paired_modes(lattice_k=(1,))
        t35 = number_form_arrival_time(modes)
        mean, var = event_statistics(vacuum_state(modes), t35)
        expected = -sum(math.hypot(x, modes.tau) for (x, s) in modes.pair_keys())
        assert mean == expected
        assert var == 0.0

    def test_superposition_statistics(self):
        modes = paired_modes(lattice_k=(1,))
        t35 = number_form_arrival_time(modes)
        t_x = modes.labels[0].arrival
        zero_point = -sum(math.hypot(x, modes.tau) for (x, s) in modes.pair_keys())
        psi = vacuum_state(modes) + basis_state(modes, [0])
        mean, var = event_statistics(psi / math.sqrt(2.0), t35)
        assert mean == pytest.approx(zero_point + t_x / 2.0, abs=1e-12)
        assert var == pytest.approx(t_x**2 / 4.0, abs=1e-12)

    def test_occupation_states_have_zero_variance(self):
        modes = paired_modes(lattice_k=(1,))
        t35 = number_form_arrival_time(modes)
        for occ in ([], [0], [1, 2], [0, 1, 2, 3]):
            _, var = event_statistics(basis_state(modes, occ), t35)
            assert abs(var) <= 1e-12

    def test_zero_norm_rejected(self):
        modes = paired_modes(lattice_k=(1,))
        t35 = number_form_arrival_time(modes)
        with pytest.raises(ValueError):
            event_statistics(np.zeros(modes.dim), t35)
