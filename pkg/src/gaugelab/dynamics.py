"""Charged-particle Hamiltonian dynamics under minimal coupling.

Integrates Hamilton's equations for H = (p - qA/c)^2/(2m) + q*phi in any
gauge, decomposes the energy into kinetic and potential parts (U is defined
as H - T, also for time-dependent Hamiltonians), and compares gauges: the
trajectory, velocity and kinetic energy must agree, while the canonical
momentum, potential energy and Hamiltonian value may not.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DomainError, PreconditionError, ResourceLimitError, UnsupportedMethodError, UsageError
from .gauge import SPEED_OF_LIGHT, PotentialConfiguration, check_field_invariance
from .reports import InvarianceReport, QuantityDeviation, write_csv
from .vectors import Vec3

DEFAULT_DT = 1e-3
DEFAULT_STEP_CAP = 10_000_000

TRAJECTORY_CSV_HEADER = ["t", "x", "y", "z", "px", "py", "pz", "vx", "vy", "vz", "T", "U", "H"]


@dataclass(frozen=True)
class ChargedParticle:
    """Point charge q with mass m, both in atomic units."""

    q: float
    m: float

    def __post_init__(self):
        if not (math.isfinite(self.q) and math.isfinite(self.m)):
            raise UsageError("particle charge and mass must be finite")
        if self.m <= 0:
            raise UsageError(f"particle.m must be > 0, got {self.m}")


@dataclass(frozen=True)
class PhaseSpaceState:
    """Position, canonical momentum and time of one phase-space point."""

    r: Vec3
    p: Vec3
    t: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.t):
            raise UsageError("state time must be finite")


@dataclass
class Trajectory:
    """Time series of a single integration run.

    Arrays are aligned on the first axis; ``r``/``p``/``v`` have shape (n, 3).
    ``v`` is the velocity (kinetic momentum over mass), ``T`` the kinetic
    energy, ``U = H - T`` the potential energy and ``H`` the Hamiltonian value.
    """

    t: np.ndarray
    r: np.ndarray
    p: np.ndarray
    v: np.ndarray
    T: np.ndarray
    U: np.ndarray
    H: np.ndarray

    def __len__(self) -> int:
        return len(self.t)

    def state(self, i: int) -> PhaseSpaceState:
        return PhaseSpaceState(r=Vec3.from_array(self.r[i]), p=Vec3.from_array(self.p[i]), t=float(self.t[i]))

    def validate(self, particle: ChargedParticle, pot: PotentialConfiguration, atol: float = 1e-9):
        """Check the trajectory invariants; raises on violation."""
        if np.any(np.diff(self.t) <= 0):
            raise UsageError("trajectory times must be strictly increasing")
        if np.any(self.T < 0):
            raise UsageError("kinetic energy must be non-negative")
        for i in range(len(self.t)):
            a = pot.A(Vec3.from_array(self.r[i]), float(self.t[i]))
            kin = self.p[i] - (particle.q / SPEED_OF_LIGHT) * a.as_array()
            if np.max(np.abs(self.v[i] - kin / particle.m)) > atol:
                raise UsageError(f"velocity inconsistent with kinetic momentum at sample {i}")

    def write_csv(self, path: Path | str) -> Path:
        rows = (
            [
                float(self.t[i]),
                float(self.r[i, 0]),
                float(self.r[i, 1]),
                float(self.r[i, 2]),
                float(self.p[i, 0]),
                float(self.p[i, 1]),
                float(self.p[i, 2]),
                float(self.v[i, 0]),
                float(self.v[i, 1]),
                float(self.v[i, 2]),
                float(self.T[i]),
                float(self.U[i]),
                float(self.H[i]),
            ]
            for i in range(len(self.t))
        )
        return write_csv(TRAJECTORY_CSV_HEADER, rows, path)


def kinetic_momentum(particle: ChargedParticle, pot: PotentialConfiguration, state: PhaseSpaceState) -> Vec3:
    return state.p - pot.A(state.r, state.t) * (particle.q / SPEED_OF_LIGHT)


def hamiltonian_value(particle: ChargedParticle, pot: PotentialConfiguration, state: PhaseSpaceState) -> float:
    """H = (p - qA/c)^2 / (2m) + q*phi evaluated at one phase-space point."""
    kin = kinetic_momentum(particle, pot, state)
    value = kin.dot(kin) / (2.0 * particle.m) + particle.q * pot.phi(state.r, state.t)
    if not math.isfinite(value):
        raise DomainError(f"Hamiltonian non-finite at r=({state.r.x}, {state.r.y}, {state.r.z}), t={state.t}")
    return value


def hamilton_rhs(
    particle: ChargedParticle, pot: PotentialConfiguration, state: PhaseSpaceState
) -> tuple[Vec3, Vec3]:
    """Hamilton's equations: (dr/dt, dp/dt) from the minimal-coupling form.

    dr/dt = (p - qA/c)/m; dp/dt = -grad H, using analytic derivative
    suppliers when the configuration has them and central differences
    otherwise.
    """
    q, m = particle.q, particle.m
    kin = kinetic_momentum(particle, pot, state)
    drdt = kin * (1.0 / m)
    rows = pot.jac_A_at(state.r, state.t)  # rows[i] = grad A_i
    grad_kin = rows[0] * kin.x + rows[1] * kin.y + rows[2] * kin.z
    dpdt = grad_kin * (q / (m * SPEED_OF_LIGHT)) - pot.grad_phi_at(state.r, state.t) * q
    for v in (drdt, dpdt):
        if not (math.isfinite(v.x) and math.isfinite(v.y) and math.isfinite(v.z)):
            raise DomainError(
                f"equations of motion non-finite at r=({state.r.x}, {state.r.y}, {state.r.z}), t={state.t}"
            )
    return drdt, dpdt


def initial_state(
    particle: ChargedParticle,
    pot: PotentialConfiguration,
    r0: Vec3,
    v0: Vec3,
    t0: float = 0.0,
) -> PhaseSpaceState:
    """Canonical state for given kinetic initial data: p = m*v0 + qA(r0,t0)/c.

    Two gauges describe the same physical start when both are seeded through
    this conversion with identical (r0, v0).
    """
    p0 = v0 * particle.m + pot.A(r0, t0) * (particle.q / SPEED_OF_LIGHT)
    return PhaseSpaceState(r=r0, p=p0, t=t0)


def _rk4_step(particle, pot, r: Vec3, p: Vec3, t: float, h: float) -> tuple[Vec3, Vec3]:
    k1r, k1p = hamilton_rhs(particle, pot, PhaseSpaceState(r, p, t))
    k2r, k2p = hamilton_rhs(particle, pot, PhaseSpaceState(r + k1r * (h / 2), p + k1p * (h / 2), t + h / 2))
    k3r, k3p = hamilton_rhs(particle, pot, PhaseSpaceState(r + k2r * (h / 2), p + k2p * (h / 2), t + h / 2))
    k4r, k4p = hamilton_rhs(particle, pot, PhaseSpaceState(r + k3r * h, p + k3p * h, t + h))
    r_new = r + (k1r + k2r * 2 + k3r * 2 + k4r) * (h / 6)
    p_new = p + (k1p + k2p * 2 + k3p * 2 + k4p) * (h / 6)
    return r_new, p_new


def _leapfrog_step(particle, pot, r: Vec3, p: Vec3, t: float, h: float) -> tuple[Vec3, Vec3]:
    # kick-drift-kick; valid only for separable H (A = 0), where p = m*v
    q = particle.q
    p_half = p - pot.grad_phi_at(r, t) * (q * h / 2)
    r_new = r + p_half * (h / particle.m)
    p_new = p_half - pot.grad_phi_at(r_new, t + h) * (q * h / 2)
    return r_new, p_new


def _vector_potential_is_zero(pot: PotentialConfiguration, r0: Vec3, t0: float, t_end: float) -> bool:
    for t in np.linspace(t0, t_end, 7):
        a = pot.A(r0, float(t))
        if a.x != 0.0 or a.y != 0.0 or a.z != 0.0:
            return False
    return True


def integrate(
    particle: ChargedParticle,
    pot: PotentialConfiguration,
    state0: PhaseSpaceState,
    t_end: float,
    dt: float = DEFAULT_DT,
    method: str = "rk4",
    step_cap: int = DEFAULT_STEP_CAP,
) -> Trajectory:
    """Integrate Hamilton's equations, sampling every dt (last step clamped).

    rk4 is globally O(dt^4). leapfrog is symplectic but applies only to
    separable Hamiltonians (A = 0); requesting it with a vector potential
    raises UnsupportedMethodError.
    """
    if dt <= 0:
        raise UsageError(f"dt must be > 0, got {dt}")
    if t_end <= state0.t:
        raise UsageError(f"t_end must exceed the initial time {state0.t}, got {t_end}")
    if method not in ("rk4", "leapfrog"):
        raise UnsupportedMethodError(f"unknown integration method {method!r}")

    span = t_end - state0.t
    n_steps = int(math.ceil(span / dt - 1e-12))
    if n_steps > step_cap:
        raise ResourceLimitError(f"integration needs {n_steps} steps, cap is {step_cap}")

    if method == "leapfrog" and not _vector_potential_is_zero(pot, state0.r, state0.t, t_end):
        raise UnsupportedMethodError("leapfrog requires A = 0 (separable Hamiltonian); use rk4")

    step = _rk4_step if method == "rk4" else _leapfrog_step

    t_arr = np.empty(n_steps + 1)
    r_arr = np.empty((n_steps + 1, 3))
    p_arr = np.empty((n_steps + 1, 3))

    r, p = state0.r, state0.p
    t_arr[0] = state0.t
    r_arr[0] = r.as_array()
    p_arr[0] = p.as_array()
    for k in range(n_steps):
        t_k = state0.t + k * dt
        h = min(dt, t_end - t_k)
        r, p = step(particle, pot, r, p, t_k, h)
        t_next = t_end if k == n_steps - 1 else state0.t + (k + 1) * dt
        t_arr[k + 1] = t_next
        r_arr[k + 1] = r.as_array()
        p_arr[k + 1] = p.as_array()

    traj = Trajectory(
        t=t_arr,
        r=r_arr,
        p=p_arr,
        v=np.empty_like(r_arr),
        T=np.empty_like(t_arr),
        U=np.empty_like(t_arr),
        H=np.empty_like(t_arr),
    )
    return energy_decomposition(particle, pot, traj)


def energy_decomposition(particle: ChargedParticle, pot: PotentialConfiguration, traj: Trajectory) -> Trajectory:
    """Fill v, T, U, H from the sampled (t, r, p).

    T is built from the kinetic momentum p - qA/c; H adds q*phi to the same
    kinetic term, so in a gauge with phi = 0 the identity U = H - T = 0 holds
    exactly, not merely to rounding.
    """
    q, m = particle.q, particle.m
    for i in range(len(traj.t)):
        r_vec = Vec3.from_array(traj.r[i])
        t_i = float(traj.t[i])
        a = pot.A(r_vec, t_i).as_array()
        kin = traj.p[i] - (q / SPEED_OF_LIGHT) * a
        traj.v[i] = kin / m
        T = float(kin @ kin) / (2.0 * m)
        H = T + q * pot.phi(r_vec, t_i)
        traj.T[i] = T
        traj.H[i] = H
        traj.U[i] = H - T
    return traj


def analytic_constant_field(
    particle: ChargedParticle, E0: float, x0: float, v0: float, t: float
) -> tuple[float, float]:
    """Closed-form 1D motion in a constant field: x(t) and v(t).

    x = (q E0 / 2m) t^2 + v0 t + x0, v = (q E0 / m) t + v0.
    """
    a = particle.q * E0 / particle.m
    return (0.5 * a * t * t + v0 * t + x0, a * t + v0)


@dataclass
class GaugeComparison:
    """Two trajectories under field-equivalent gauges plus their comparison."""

    report: InvarianceReport
    trajectory1: Trajectory
    trajectory2: Trajectory


def _max_abs(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.max(np.abs(a - b)))


def run_gauge_comparison(
    particle: ChargedParticle,
    pot1: PotentialConfiguration,
    pot2: PotentialConfiguration,
    state0: PhaseSpaceState,
    t_end: float,
    dt: float = DEFAULT_DT,
    tolerance: float = 1e-8,
    field_tolerance: float | None = None,
) -> GaugeComparison:
    """Integrate the same physical problem in two gauges and compare.

    ``state0`` is canonical in pot1's gauge; the pot2 run starts from the
    same kinetic data (same r0 and velocity). Gauge equivalence of the two
    configurations is verified on points along the realized trajectory
    before the comparison; a mismatch raises PreconditionError.
    """
    traj1 = integrate(particle, pot1, state0, t_end, dt)

    stride = max(1, len(traj1) // 25)
    samples = [
        (Vec3.from_array(traj1.r[i]), float(traj1.t[i])) for i in range(0, len(traj1), stride)
    ]
    field_tol = tolerance if field_tolerance is None else field_tolerance
    field_report = check_field_invariance(pot1, pot2, samples, tolerance=field_tol)
    if not field_report.passed:
        devs = {q.name: q.max_dev for q in field_report.matched}
        raise PreconditionError(
            f"potentials are not gauge-equivalent: field deviations {devs} exceed {field_tol}"
        )

    v0 = Vec3.from_array(traj1.v[0])
    state0_2 = initial_state(particle, pot2, state0.r, v0, state0.t)
    traj2 = integrate(particle, pot2, state0_2, t_end, dt)

    report = InvarianceReport.from_groups(
        matched=[
            QuantityDeviation("r", _max_abs(traj1.r, traj2.r)),
            QuantityDeviation("v", _max_abs(traj1.v, traj2.v)),
            QuantityDeviation("T", _max_abs(traj1.T, traj2.T)),
        ],
        differed=[
            QuantityDeviation("U", _max_abs(traj1.U, traj2.U)),
            QuantityDeviation("H", _max_abs(traj1.H, traj2.H)),
            QuantityDeviation("p", _max_abs(traj1.p, traj2.p)),
        ],
        tolerance=tolerance,
    )
    return GaugeComparison(report=report, trajectory1=traj1, trajectory2=traj2)


def compare_gauges(
    particle: ChargedParticle,
    pot1: PotentialConfiguration,
    pot2: PotentialConfiguration,
    state0: PhaseSpaceState,
    t_end: float,
    dt: float = DEFAULT_DT,
    tolerance: float = 1e-8,
    field_tolerance: float | None = None,
) -> InvarianceReport:
    """Report which dynamical quantities two gauge-equivalent potentials share."""
    return run_gauge_comparison(
        particle, pot1, pot2, state0, t_end, dt, tolerance, field_tolerance
    ).report
