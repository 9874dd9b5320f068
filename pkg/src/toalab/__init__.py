"""toalab: a numerical verification lab for the arrival-time formalism.

Layers, bottom up: exact spinor algebra (``dirac``), discretized operators
and canonical commutators (``grids``), the eigenfunction family of the
arrival-time operator (``spectral``), the energy-shift equation and its
action machinery (``shift``), classical dual flows (``flow``), the
fermionic event-mode Fock space (``fock``), and the check registry with
machine-readable reports (``checks``/``report``) behind the ``toalab``
command-line tool.
"""

from ._kernels import USING_NUMBA
from .dirac import (
    BASIS,
    DiracBasis,
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
from .grids import (
    Grid1D,
    GridOperator,
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
    interior_probe,
    momentum_grid,
    position_grid,
    proper_mass_position,
    proper_time_momentum,
    weyl_symmetrize,
)
from .spectral import (
    ArrivalEigenfunction,
    derivative_identity_check,
    eigen_cancellation_check,
    eigen_residual_profile,
    sample_eigenfunction,
)
from .shift import (
    ShiftField,
    action_and_densities,
    elementary_solution,
    energy_grid,
    evolve,
    sample_elementary,
    shift_equation_residual,
)
from .flow import (
    DualFlowState,
    FlowResult,
    TimeFunction,
    arrival_time_function,
    bilinear_time_function,
    flow_step,
    integrate_flow,
)
from .fock import (
    ModeLabel,
    ModeSet,
    event_mode_set,
    event_statistics,
    field_car_check,
    ladder_operators,
    number_form_arrival_time,
    quadratic_form_arrival_time,
)
from .checks import CheckSpec, VerificationReport, run_suite, specs_for

__version__ = "0.1.0"
