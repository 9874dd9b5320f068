"""Uniform 1D grids that avoid the origin, and dense operators on them.

Grid functions carry four spinor components per point; operators are dense
complex matrices of dimension 4*n in grid-major, spinor-minor ordering
(flat index = 4*j + c).  Derivatives are second-order central differences
with one-sided second-order rows at the two ends, so every identity that
is exact in the continuum shows up here as an O(h^2) residual on probes
supported away from the boundary rows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dirac import BASIS

POSITION = "position"
MOMENTUM = "momentum"
ENERGY = "energy"  # parameter axis: nothing is inverted on it, may hold 0

_BOUNDARY_MARGIN = 5  # rows near an edge where the stencil is not central


@dataclass(frozen=True)
class Grid1D:
    """Uniform grid on [lower, upper] that keeps away from the origin.

    Grids whose interval straddles zero are only legal when an exclusion
    radius is declared and every point clears it; single-sign grids need
    no exclusion.  Inverse-coordinate operators stay well conditioned as
    a consequence.
    """

    axis: str
    lower: float
    upper: float
    n_points: int
    exclusion: float = 0.0
    _points: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.axis not in (POSITION, MOMENTUM, ENERGY):
            raise ValueError(f"axis must be one of {POSITION!r}, {MOMENTUM!r}, {ENERGY!r}")
        if self.n_points < 3:
            raise ValueError("need at least 3 grid points")
        if not (math.isfinite(self.lower) and math.isfinite(self.upper)):
            raise ValueError("grid bounds must be finite")
        if self.upper <= self.lower:
            raise ValueError("upper bound must exceed lower bound")
        pts = np.linspace(self.lower, self.upper, self.n_points)
        if self.axis != ENERGY and self.lower <= 0.0 <= self.upper:
            if self.exclusion <= 0.0:
                raise ValueError(
                    "grid straddles the origin: an exclusion radius > 0 is required"
                )
            if np.abs(pts).min() < self.exclusion:
                raise ValueError(
                    f"grid point at {pts[np.abs(pts).argmin()]:g} violates the "
                    f"origin exclusion radius {self.exclusion:g}"
                )
        pts.flags.writeable = False
        object.__setattr__(self, "_points", pts)

    @property
    def spacing(self) -> float:
        return (self.upper - self.lower) / (self.n_points - 1)

    @property
    def points(self) -> np.ndarray:
        return self._points

    @property
    def dim(self) -> int:
        return 4 * self.n_points

    def refined(self, factor: int = 2) -> "Grid1D":
        """Same interval with the spacing divided by ``factor``."""
        return Grid1D(
            self.axis,
            self.lower,
            self.upper,
            (self.n_points - 1) * factor + 1,
            self.exclusion,
        )


def momentum_grid(lower: float, upper: float, n_points: int, exclusion: float = 0.0) -> Grid1D:
    return Grid1D(MOMENTUM, lower, upper, n_points, exclusion)


def position_grid(lower: float, upper: float, n_points: int, exclusion: float = 0.0) -> Grid1D:
    return Grid1D(POSITION, lower, upper, n_points, exclusion)


def symmetric_momentum_grid(n_half: int, spacing: float) -> Grid1D:
    """Two-branch grid at +-(j + 1/2) h, j = 0..n_half-1; never touches 0."""
    lo = -(n_half - 0.5) * spacing
    hi = (n_half - 0.5) * spacing
    return Grid1D(MOMENTUM, lo, hi, 2 * n_half, exclusion=0.45 * spacing)


@dataclass(frozen=True)
class SpinorField:
    """Four complex components per grid point, stored as an (n, 4) array."""

    grid: Grid1D
    values: np.ndarray

    def __post_init__(self):
        v = np.ascontiguousarray(self.values, dtype=complex)
        if v.shape != (self.grid.n_points, 4):
            raise ValueError(f"values must have shape ({self.grid.n_points}, 4)")
        object.__setattr__(self, "values", v)

    @classmethod
    def zeros(cls, grid: Grid1D) -> "SpinorField":
        return cls(grid, np.zeros((grid.n_points, 4), dtype=complex))

    @classmethod
    def from_flat(cls, grid: Grid1D, flat: np.ndarray) -> "SpinorField":
        return cls(grid, np.asarray(flat, dtype=complex).reshape(grid.n_points, 4))

    @property
    def flat(self) -> np.ndarray:
        return self.values.reshape(-1)

    def max_abs(self) -> float:
        return float(np.abs(self.values).max())


@dataclass(frozen=True)
class GridOperator:
    """Dense operator on spinor fields over one grid."""

    grid: Grid1D
    matrix: np.ndarray

    def __post_init__(self):
        m = np.ascontiguousarray(self.matrix, dtype=complex)
        if m.shape != (self.grid.dim, self.grid.dim):
            raise ValueError(f"matrix must be {self.grid.dim} x {self.grid.dim}")
        object.__setattr__(self, "matrix", m)

    def apply(self, f: SpinorField) -> SpinorField:
        if f.grid is not self.grid and f.grid != self.grid:
            raise ValueError("field lives on a different grid")
        return SpinorField.from_flat(self.grid, self.matrix @ f.flat)

    def dagger(self) -> "GridOperator":
        return GridOperator(self.grid, self.matrix.conj().T)

    def __matmul__(self, other: "GridOperator") -> "GridOperator":
        _same_grid(self, other)
        return GridOperator(self.grid, self.matrix @ other.matrix)

    def __add__(self, other: "GridOperator") -> "GridOperator":
        _same_grid(self, other)
        return GridOperator(self.grid, self.matrix + other.matrix)

    def __sub__(self, other: "GridOperator") -> "GridOperator":
        _same_grid(self, other)
        return GridOperator(self.grid, self.matrix - other.matrix)

    def __mul__(self, scalar) -> "GridOperator":
        return GridOperator(self.grid, self.matrix * scalar)

    __rmul__ = __mul__

    def __neg__(self) -> "GridOperator":
        return GridOperator(self.grid, -self.matrix)


def _same_grid(a: GridOperator, b: GridOperator) -> None:
    if a.grid != b.grid:
        raise ValueError("operator dimensions/grids do not match")


def _scalar_stencil(n: int, h: float) -> np.ndarray:
    """Central first-derivative matrix, one-sided second order at the ends."""
    d = np.zeros((n, n))
    inv = 1.0 / h
    rows = np.arange(1, n - 1)
    d[rows, rows - 1] = -0.5 * inv
    d[rows, rows + 1] = 0.5 * inv
    d[0, :3] = np.array([-1.5, 2.0, -0.5]) * inv
    d[-1, -3:] = np.array([0.5, -2.0, 1.5]) * inv
    return d


def _spinor_kron(m: np.ndarray) -> np.ndarray:
    return np.kron(m, np.eye(4))


def _block_diag(blocks: np.ndarray) -> np.ndarray:
    """(n, 4, 4) stack -> dense block-diagonal (4n, 4n)."""
    n = blocks.shape[0]
    out = np.zeros((n, 4, n, 4), dtype=complex)
    idx = np.arange(n)
    out[idx, :, idx, :] = blocks
    return out.reshape(4 * n, 4 * n)


def _block_diag_times(blocks: np.ndarray, dense: np.ndarray) -> np.ndarray:
    """Product blockdiag(blocks) @ dense without forming the left factor."""
    n = blocks.shape[0]
    d = dense.reshape(n, 4, n, 4)
    return np.einsum("jab,jbkc->jakc", blocks, d).reshape(4 * n, 4 * n)


def _require_origin_excluded(grid: Grid1D) -> None:
    if np.abs(grid.points).min() == 0.0:
        raise ValueError("grid contains a point at the origin")


def coordinate_op(grid: Grid1D) -> GridOperator:
    """Diagonal multiplication by the grid coordinate."""
    return GridOperator(grid, _spinor_kron(np.diag(grid.points)))


def derivative_op(grid: Grid1D) -> GridOperator:
    """Plain d/dcoordinate; antisymmetric on interior rows."""
    return GridOperator(grid, _spinor_kron(_scalar_stencil(grid.n_points, grid.spacing)))


def conjugate_coordinate_op(grid: Grid1D) -> GridOperator:
    """The coordinate conjugate to the grid axis.

    On a momentum grid this is the position operator +i d/dp; on a position
    grid it is the momentum operator -i d/dx.  Either way it pairs with
    ``coordinate_op`` into a canonical commutator equal to i.
    """
    sign = 1j if grid.axis == MOMENTUM else -1j
    return sign * derivative_op(grid)


def weyl_symmetrize(f: GridOperator, g: GridOperator) -> GridOperator:
    """Symmetrized product (FG + GF)/2; exactly symmetric in its arguments."""
    _same_grid(f, g)
    fm, gm = f.matrix, g.matrix
    fd = _diagonal_of(fm)
    if fd is not None:
        prod = 0.5 * (fd[:, None] * gm + gm * fd[None, :])
        return GridOperator(f.grid, prod)
    gd = _diagonal_of(gm)
    if gd is not None:
        prod = 0.5 * (gd[:, None] * fm + fm * gd[None, :])
        return GridOperator(f.grid, prod)
    return GridOperator(f.grid, 0.5 * (fm @ gm + gm @ fm))


def _diagonal_of(m: np.ndarray):
    d = np.diagonal(m)
    if np.count_nonzero(m) == np.count_nonzero(d):
        return d.copy()
    return None


def hamiltonian_momentum(grid: Grid1D, m: float) -> GridOperator:
    """Free Hamiltonian in the momentum representation: exactly block diagonal."""
    _require_origin_excluded(grid)
    p = grid.points
    blocks = BASIS.alpha1[None, :, :] * p[:, None, None] + BASIS.beta[None, :, :] * m
    return GridOperator(grid, _block_diag(blocks))


def arrival_time_momentum(grid: Grid1D, m: float) -> GridOperator:
    """Relativistic arrival-time operator in the momentum representation.

    Assembled literally as (1/p)(alpha1 p + beta m)(-i d/dp) + i beta m/(2 p^2),
    with the same stencil as ``derivative_op``.  Hermitian in the action
    sense on interior-supported probes, up to O(h^2).
    """
    _require_origin_excluded(grid)
    p = grid.points
    n = grid.n_points
    kblocks = BASIS.alpha1[None, :, :] + BASIS.beta[None, :, :] * (m / p)[:, None, None]
    deriv = _spinor_kron(-1j * _scalar_stencil(n, grid.spacing))
    mat = _block_diag_times(kblocks, deriv)
    mat += _block_diag(1j * BASIS.beta[None, :, :] * (m / (2.0 * p**2))[:, None, None])
    return GridOperator(grid, mat)


def proper_time_momentum(grid: Grid1D, m: float) -> GridOperator:
    """Nonrelativistic arrival-time operator: Weyl product of m/p with +i d/dp."""
    _require_origin_excluded(grid)
    inv_p = GridOperator(grid, _spinor_kron(np.diag(m / grid.points)))
    return weyl_symmetrize(inv_p, conjugate_coordinate_op(grid))


def proper_mass_position(grid: Grid1D, tau: float) -> GridOperator:
    """Proper-mass operator on a position grid: Weyl product of tau/x with -i d/dx."""
    _require_origin_excluded(grid)
    inv_x = GridOperator(grid, _spinor_kron(np.diag(tau / grid.points)))
    return weyl_symmetrize(inv_x, conjugate_coordinate_op(grid))


def spinor_matrix_op(grid: Grid1D, m4: np.ndarray) -> GridOperator:
    """Pointwise application of one fixed 4x4 matrix."""
    return GridOperator(grid, np.kron(np.eye(grid.n_points), m4))


def arrival_time_dual(grid: Grid1D, tau: float) -> GridOperator:
    """Arrival-time operator with a c-number proper time: -(alpha1 x + beta tau).

    On a position grid the position factor is diagonal; on a momentum grid
    it is +i d/dp.
    """
    if grid.axis == POSITION:
        xop = coordinate_op(grid)
    else:
        xop = conjugate_coordinate_op(grid)
    a1 = spinor_matrix_op(grid, BASIS.alpha1)
    bt = spinor_matrix_op(grid, BASIS.beta)
    return -(a1 @ xop + tau * bt)


def hamiltonian_dual(grid: Grid1D, tau: float) -> GridOperator:
    """Dual Hamiltonian on a position grid: alpha1 p + beta (proper-mass op)."""
    if grid.axis != POSITION:
        raise ValueError("the dual Hamiltonian lives on a position grid")
    _require_origin_excluded(grid)
    pop = conjugate_coordinate_op(grid)
    a1 = spinor_matrix_op(grid, BASIS.alpha1)
    bt = spinor_matrix_op(grid, BASIS.beta)
    return a1 @ pop + bt @ proper_mass_position(grid, tau)


def interior_probe(grid: Grid1D, rel_margin: float = 0.2,
                   spinor: np.ndarray | None = None) -> SpinorField:
    """Smooth compactly supported probe, identically zero near both ends.

    The profile (1 - t^2)^6 has five continuous bounded derivatives, which
    keeps composite second-order stencils inside their Taylor regime up to
    the very edge of the support.  ``rel_margin`` is the dead fraction of
    the interval at each end and must exceed 5 spacings.
    """
    length = grid.upper - grid.lower
    margin = rel_margin * length
    if margin <= _BOUNDARY_MARGIN * grid.spacing:
        raise ValueError("margin too small: probe would touch boundary rows")
    lo = grid.lower + margin
    hi = grid.upper - margin
    t = (2.0 * grid.points - (lo + hi)) / (hi - lo)
    profile = np.where(np.abs(t) < 1.0, (1.0 - t**2) ** 6, 0.0)
    if spinor is None:
        spinor = np.array([1.0, 0.5, 0.25, -0.3])
    return SpinorField(grid, np.outer(profile, spinor).astype(complex))


def _check_probe_support(probe: SpinorField) -> np.ndarray:
    support = np.abs(probe.values).max(axis=1) > 0.0
    m = _BOUNDARY_MARGIN
    if support[:m].any() or support[-m:].any():
        raise ValueError("probe must vanish within 5 points of each boundary")
    pts = probe.grid.points
    sign_flip = np.flatnonzero(np.sign(pts[:-1]) != np.sign(pts[1:]))
    for j in sign_flip:
        lo, hi = max(0, j - m + 1), min(len(pts), j + m + 1)
        if support[lo:hi].any():
            raise ValueError("probe must vanish within 5 points of the origin gap")
    return support


def commutator_residual(a: GridOperator, b: GridOperator, expected: complex,
                        probe: SpinorField) -> float:
    """Max-norm of ((AB - BA) - expected I) probe over the probe's support.

    Normalized by the sup norm of the probe.  Boundary rows are excluded by
    the support precondition, since one-sided stencils there are a grid
    artifact rather than content.
    """
    _same_grid(a, b)
    support = _check_probe_support(probe)
    v = probe.flat
    w = a.matrix @ (b.matrix @ v) - b.matrix @ (a.matrix @ v) - expected * v
    dev = np.abs(w.reshape(-1, 4)[support]).max()
    return float(dev / probe.max_abs())


def hermiticity_defect(op: GridOperator, probe: SpinorField) -> float:
    """Sup norm of (A - A^dagger) probe over the probe support, normalized."""
    support = _check_probe_support(probe)
    w = (op.matrix - op.matrix.conj().T) @ probe.flat
    return float(np.abs(w.reshape(-1, 4)[support]).max() / probe.max_abs())


def fit_order(spacings, residuals) -> float:
    """Least-squares slope of log(residual) against log(spacing)."""
    h = np.log(np.asarray(spacings, dtype=float))
    r = np.log(np.asarray(residuals, dtype=float))
    slope = np.polyfit(h, r, 1)[0]
    return float(slope)
