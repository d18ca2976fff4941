"""Grid-operator check that time-dependent gauge transformations are not unitary.

The wavefunction map Psi' = U Psi with U = exp(i q Lambda / c) preserves
moduli, but the transformed Hamiltonian does not follow the similarity rule:
H' - U H U^(-1) equals the multiplication operator -(q/c) dLambda/dt, which
vanishes only for time-independent generators. This module discretizes the
minimal-coupling Hamiltonian on a 1D grid and measures both the predicted
defect and the finite-difference discrepancy against it.

The sign convention U = exp(i q Lambda / c) is fixed by requiring that it
reproduce phi' = phi - (1/c) dLambda/dt and, with Lambda = -r.A(t) and
q = -1, the exp(i r.A/c) prefactor relating the two pulsed-field
wavefunctions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import UsageError
from .gauge import SPEED_OF_LIGHT, GaugeGenerator, PotentialConfiguration, apply_gauge
from .grids import GridSpec
from .vectors import Vec3

from .dynamics import ChargedParticle


@dataclass(frozen=True)
class GridOperator:
    """Linear operator acting on complex samples over a 1D grid.

    ``diagonal`` is set for pure multiplication operators and enables exact
    inversion and composition.
    """

    grid: GridSpec
    kind: str  # multiplication | differential | composed
    action: Callable[[np.ndarray], np.ndarray]
    diagonal: np.ndarray | None = None

    def apply(self, psi: np.ndarray) -> np.ndarray:
        psi = np.asarray(psi, dtype=complex)
        if psi.shape != (self.grid.nx,):
            raise UsageError(f"operator expects {self.grid.nx} samples, got shape {psi.shape}")
        return self.action(psi)

    def __call__(self, psi: np.ndarray) -> np.ndarray:
        return self.apply(psi)


def _dirichlet_shifts(psi: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """psi shifted left/right with zero ghost values outside the grid."""
    left = np.empty_like(psi)
    right = np.empty_like(psi)
    left[:-1] = psi[1:]
    left[-1] = 0.0
    right[1:] = psi[:-1]
    right[0] = 0.0
    return left, right


def build_hamiltonian(
    particle: ChargedParticle, pot: PotentialConfiguration, grid: GridSpec, t: float | None = None
) -> GridOperator:
    """Discretize H = (1/2m)(-i d/dx - qA/c)^2 + q*phi at the grid's time.

    Second-order central differences, Dirichlet truncation at the edges. Only
    the x components of position vary on the grid; the full |A|^2 enters the
    multiplication part while the derivative coupling uses A_x.
    """
    t_eval = grid.t if t is None else t
    x = grid.points()
    dx = grid.dx
    q, m = particle.q, particle.m

    phi_vals = np.array([pot.phi(Vec3(xi, 0.0, 0.0), t_eval) for xi in x])
    a_vecs = [pot.A(Vec3(xi, 0.0, 0.0), t_eval) * (q / SPEED_OF_LIGHT) for xi in x]
    ax = np.array([a.x for a in a_vecs])
    a_sq = np.array([a.dot(a) for a in a_vecs])
    if not (np.all(np.isfinite(phi_vals)) and np.all(np.isfinite(a_sq))):
        raise UsageError("potentials must be finite on the grid")
    dax = np.gradient(ax, dx, edge_order=2)

    def action(psi: np.ndarray) -> np.ndarray:
        left, right = _dirichlet_shifts(psi)
        lap = (left - 2.0 * psi + right) / (dx * dx)
        grad = (left - right) / (2.0 * dx)
        kinetic = -lap + 1j * dax * psi + 2j * ax * grad + a_sq * psi
        return kinetic / (2.0 * m) + (q * phi_vals) * psi

    return GridOperator(grid=grid, kind="differential", action=action)


def gauge_unitary_factor(
    gen: GaugeGenerator, q: float, grid: GridSpec, t: float | None = None
) -> GridOperator:
    """Multiplication operator U = exp(i q Lambda(x, t) / c); unit modulus pointwise."""
    t_eval = grid.t if t is None else t
    lam_vals = np.array([gen.lam(Vec3(xi, 0.0, 0.0), t_eval) for xi in grid.points()])
    diag = np.exp(1j * q * lam_vals / SPEED_OF_LIGHT)
    return GridOperator(grid=grid, kind="multiplication", action=lambda psi: diag * psi, diagonal=diag)


def multiplication_operator(grid: GridSpec, values: np.ndarray) -> GridOperator:
    values = np.asarray(values, dtype=complex)
    if values.shape != (grid.nx,):
        raise UsageError(f"diagonal must have {grid.nx} entries, got shape {values.shape}")
    return GridOperator(grid=grid, kind="multiplication", action=lambda psi: values * psi, diagonal=values)


def similarity_transform(H: GridOperator, U: GridOperator) -> GridOperator:
    """Compose U H U^(-1); U must be an invertible multiplication operator."""
    if H.grid != U.grid:
        raise UsageError("operators live on different grids")
    if U.diagonal is None:
        raise UsageError("similarity transform needs a multiplication operator U")
    if np.any(U.diagonal == 0):
        raise UsageError("U has zero diagonal entries and cannot be inverted")
    u = U.diagonal
    u_inv = 1.0 / u
    return GridOperator(grid=H.grid, kind="composed", action=lambda psi: u * H.action(u_inv * psi))


def default_probe(grid: GridSpec) -> np.ndarray:
    """Gaussian centered mid-grid with width an eighth of the extent.

    Keeps the Dirichlet edges negligible in defect measurements.
    """
    x = grid.points()
    center = 0.5 * (grid.x_min + grid.x_max)
    width = (grid.x_max - grid.x_min) / 8.0
    return np.exp(-((x - center) ** 2) / (2.0 * width * width)).astype(complex)


@dataclass(frozen=True)
class DefectReport:
    """Measured nonunitarity of one gauge transformation at one instant.

    ``defect_norm`` is the sup norm of the predicted multiplication operator
    -(q/c) dLambda/dt over the grid; it vanishes exactly when the similarity
    rule holds. ``max_discrepancy`` compares (H' - U H U^(-1)) probe against
    that prediction on interior points and sits at discretization-error scale.
    """

    lambda_name: str
    t: float
    grid: GridSpec
    defect_norm: float
    max_discrepancy: float

    def to_json_dict(self) -> dict:
        return {
            "lambda_name": self.lambda_name,
            "t": self.t,
            "grid": {"nx": self.grid.nx, "dx": self.grid.dx},
            "defect_norm": self.defect_norm,
            "max_discrepancy": self.max_discrepancy,
        }


def unitarity_defect(
    particle: ChargedParticle,
    pot: PotentialConfiguration,
    gen: GaugeGenerator,
    grid: GridSpec,
    t: float | None = None,
    probe: np.ndarray | None = None,
) -> DefectReport:
    """Measure H' - U H U^(-1) against the predicted -(q/c) dLambda/dt.

    H' is built from the transformed potentials. The probe defaults to a
    mid-grid Gaussian; it must not be identically zero.
    """
    t_eval = grid.t if t is None else t
    if probe is None:
        probe = default_probe(grid)
    probe = np.asarray(probe, dtype=complex)
    if probe.shape != (grid.nx,):
        raise UsageError(f"probe must have {grid.nx} samples, got shape {probe.shape}")
    if not np.any(probe):
        raise UsageError("probe must be nonzero")

    q = particle.q
    H = build_hamiltonian(particle, pot, grid, t_eval)
    H_prime = build_hamiltonian(particle, apply_gauge(pot, gen), grid, t_eval)
    U = gauge_unitary_factor(gen, q, grid, t_eval)
    transformed = similarity_transform(H, U)

    x = grid.points()
    # divide by c last so that generators proportional to c cancel exactly
    predicted_diag = -np.array([q * gen.dt_at(Vec3(xi, 0.0, 0.0), t_eval) for xi in x]) / SPEED_OF_LIGHT

    measured = H_prime.apply(probe) - transformed.apply(probe)
    predicted = predicted_diag * probe
    interior = slice(1, -1)
    max_discrepancy = float(np.max(np.abs(measured[interior] - predicted[interior])))

    return DefectReport(
        lambda_name=gen.name,
        t=t_eval,
        grid=grid,
        defect_norm=float(np.max(np.abs(predicted_diag))),
        max_discrepancy=max_discrepancy,
    )


@dataclass(frozen=True)
class DefectConvergence:
    """Defect reports at a grid and its half-spacing refinement."""

    coarse: DefectReport
    fine: DefectReport

    @property
    def ratio(self) -> float:
        return self.coarse.max_discrepancy / self.fine.max_discrepancy

    def to_json_dict(self) -> dict:
        d = self.coarse.to_json_dict()
        d["convergence_ratio"] = self.ratio
        d["fine_grid"] = {"nx": self.fine.grid.nx, "dx": self.fine.grid.dx}
        d["fine_max_discrepancy"] = self.fine.max_discrepancy
        return d


def defect_convergence(
    particle: ChargedParticle,
    pot: PotentialConfiguration,
    gen: GaugeGenerator,
    grid: GridSpec,
    t: float | None = None,
) -> DefectConvergence:
    """Defect measurement at two resolutions; the discrepancy should shrink ~4x."""
    return DefectConvergence(
        coarse=unitarity_defect(particle, pot, gen, grid, t),
        fine=unitarity_defect(particle, pot, gen, grid.refined(), t),
    )
