"""Dipole-approximation wavefunctions of a free electron in a pulsed field.

The velocity-gauge solution is a plane wave times the phase integral
S(t) = (1/2) * integral of (p + A(tau)/c)^2 from pulse onset to t; the
length-gauge solution multiplies it by exp(i r.A(t)/c). A third evaluation
path rebuilds the length-gauge phase from the electric field alone, with the
vector potential eliminated through nested time integrals.

This module hard-codes the electron charge q = -1 (kinetic coupling
(p_hat + A/c)^2); the classical dynamics module keeps q general. p is the
canonical-momentum eigenvalue, equal to the kinetic momentum outside the
pulse. The phase integrals start at the pulse onset t_on, before which A
vanishes identically; after t_off the vector potential holds its final value
so that the electric field (not A) has compact support.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.interpolate import CubicSpline

from .errors import DomainError, UsageError
from .gauge import SPEED_OF_LIGHT
from .grids import SpaceTimeGrid
from .vectors import Vec3

PULSE_FAMILIES = ("zero", "rectangular-sinusoid", "sin2-envelope-sinusoid")

DEFAULT_PHASE_EPSABS = 1e-10

# Dense-grid density for the electric-field antiderivative spline; 2048 nodes
# per carrier period keeps the cubic interpolation error below ~1e-10 for
# fields of atomic-unit strength.
NODES_PER_PERIOD = 2048

WAVEFUNCTION_CSV_HEADER = ["t", "x", "y", "z", "re", "im", "modulus", "phase"]


@dataclass(frozen=True)
class PulseShape:
    """Compact-support vector potential A(t) for the dipole-approximation field.

    ``A0`` is the peak vector-potential magnitude, ``omega`` the carrier
    angular frequency, both in a.u. A(t) vanishes for t <= t_on, follows the
    family formula on [t_on, t_off], and stays frozen at A(t_off) afterwards.
    """

    family: str
    A0: float
    omega: float
    polarization: Vec3 = Vec3(1.0, 0.0, 0.0)
    t_on: float = 0.0
    t_off: float = 0.0

    def __post_init__(self):
        if self.family not in PULSE_FAMILIES:
            raise UsageError(f"pulse family must be one of {PULSE_FAMILIES}, got {self.family!r}")
        if abs(self.polarization.norm() - 1.0) > 1e-9:
            raise UsageError(f"polarization must be a unit vector, norm is {self.polarization.norm()}")
        if self.family != "zero":
            if self.omega <= 0:
                raise UsageError(f"oscillatory pulse needs omega > 0, got {self.omega}")
            if not self.t_off > self.t_on:
                raise UsageError(f"pulse needs t_off > t_on, got [{self.t_on}, {self.t_off}]")

    @classmethod
    def zero(cls, t_on: float = 0.0) -> "PulseShape":
        return cls(family="zero", A0=0.0, omega=0.0, t_on=t_on, t_off=t_on)

    def amplitude(self, t) -> np.ndarray | float:
        """Signed magnitude of A along the polarization axis; array-friendly."""
        t = np.asarray(t, dtype=float)
        if self.family == "zero":
            out = np.zeros_like(t)
        else:
            u = np.clip(t, self.t_on, self.t_off) - self.t_on
            if self.family == "rectangular-sinusoid":
                out = self.A0 * np.sin(self.omega * u)
            else:
                width = self.t_off - self.t_on
                out = self.A0 * np.sin(np.pi * u / width) ** 2 * np.sin(self.omega * u)
            out = np.where(t <= self.t_on, 0.0, out)
        return out if out.ndim else float(out)

    def efield_amplitude(self, t) -> np.ndarray | float:
        """Signed magnitude of E = -(1/c) dA/dt; zero outside [t_on, t_off]."""
        t = np.asarray(t, dtype=float)
        if self.family == "zero":
            out = np.zeros_like(t)
        else:
            u = t - self.t_on
            if self.family == "rectangular-sinusoid":
                dadt = self.A0 * self.omega * np.cos(self.omega * u)
            else:
                width = self.t_off - self.t_on
                env = np.sin(np.pi * u / width) ** 2
                denv = (np.pi / width) * np.sin(2.0 * np.pi * u / width)
                dadt = self.A0 * (denv * np.sin(self.omega * u) + env * self.omega * np.cos(self.omega * u))
            inside = (t >= self.t_on) & (t <= self.t_off)
            out = np.where(inside, -dadt / SPEED_OF_LIGHT, 0.0)
        return out if out.ndim else float(out)


def vector_potential(pulse: PulseShape, t: float) -> Vec3:
    """A(t) of the pulse: polarization times the family amplitude."""
    return pulse.polarization * pulse.amplitude(t)


def electric_field_from_pulse(pulse: PulseShape, t: float) -> Vec3:
    """E(t) = -(1/c) dA/dt, analytic per family."""
    return pulse.polarization * pulse.efield_amplitude(t)


def _phase_integrand(pulse: PulseShape, p: Vec3):
    p_sq = p.dot(p)
    p_par = p.dot(pulse.polarization)
    inv_c = 1.0 / SPEED_OF_LIGHT

    def f(tau: float) -> float:
        a = pulse.amplitude(tau)
        return 0.5 * p_sq + p_par * a * inv_c + 0.5 * (a * inv_c) ** 2

    return f


def _quad_segment(f, a: float, b: float, pulse: PulseShape, epsabs: float) -> tuple[float, float]:
    if b <= a:
        return 0.0, 0.0
    points = [pulse.t_off] if a < pulse.t_off < b else None
    val, err = quad(f, a, b, epsabs=epsabs, epsrel=1e-12, limit=200, points=points)
    return val, err


def volkov_phase_with_estimate(
    p: Vec3, pulse: PulseShape, t: float, epsabs: float = DEFAULT_PHASE_EPSABS
) -> tuple[float, float]:
    """Phase integral S(t) together with the quadrature error estimate."""
    if t < pulse.t_on:
        raise DomainError(f"phase integral starts at pulse onset t_on={pulse.t_on}, got t={t}")
    f = _phase_integrand(pulse, p)
    return _quad_segment(f, pulse.t_on, t, pulse, epsabs)


def volkov_phase_velocity(p: Vec3, pulse: PulseShape, t: float, epsabs: float = DEFAULT_PHASE_EPSABS) -> float:
    """S(t) = (1/2) * integral over [t_on, t] of (p + A(tau)/c)^2 d tau."""
    return volkov_phase_with_estimate(p, pulse, t, epsabs)[0]


def phase_series(
    p: Vec3, pulse: PulseShape, times: np.ndarray, epsabs: float = DEFAULT_PHASE_EPSABS
) -> np.ndarray:
    """S(t) on an ascending grid of times, accumulated segment by segment."""
    times = np.asarray(times, dtype=float)
    if times.size == 0:
        return np.empty(0)
    if np.any(np.diff(times) < 0):
        raise UsageError("phase_series needs ascending times")
    if times[0] < pulse.t_on:
        raise DomainError(f"phase series starts at pulse onset t_on={pulse.t_on}, got t={times[0]}")
    f = _phase_integrand(pulse, p)
    out = np.empty(times.size)
    acc, prev = 0.0, pulse.t_on
    for k, t in enumerate(times):
        acc += _quad_segment(f, prev, float(t), pulse, epsabs)[0]
        out[k] = acc
        prev = float(t)
    return out


def psi_velocity(p: Vec3, pulse: PulseShape, r: Vec3, t: float, C: complex = 1.0) -> complex:
    """Velocity-gauge wavefunction C*exp(i p.r - i S(t)); modulus is |C|."""
    s = volkov_phase_velocity(p, pulse, t)
    return C * cmath.exp(1j * (p.dot(r) - s))


def psi_length(p: Vec3, pulse: PulseShape, r: Vec3, t: float, C: complex = 1.0) -> complex:
    """Length-gauge wavefunction: exp(i r.A(t)/c) times the velocity-gauge one."""
    prefactor = cmath.exp(1j * r.dot(vector_potential(pulse, t)) / SPEED_OF_LIGHT)
    return prefactor * psi_velocity(p, pulse, r, t, C)


def _efield_antiderivative(pulse: PulseShape, t_end: float, nodes_per_period: int = NODES_PER_PERIOD):
    """Cubic-spline antiderivative of the scalar E amplitude on [t_on, t_end].

    Returns a callable F with F(t_on) = 0, constant beyond the pulse end.
    """
    seg_end = min(t_end, pulse.t_off)
    if pulse.family == "zero" or seg_end <= pulse.t_on:
        return lambda tau: np.zeros_like(np.asarray(tau, dtype=float))
    span = seg_end - pulse.t_on
    periods = span * pulse.omega / (2.0 * np.pi)
    n = max(33, int(math.ceil(periods * nodes_per_period)) + 1)
    nodes = np.linspace(pulse.t_on, seg_end, n)
    F = CubicSpline(nodes, pulse.efield_amplitude(nodes)).antiderivative()
    F_end = float(F(seg_end))

    def antiderivative(tau):
        tau = np.asarray(tau, dtype=float)
        return np.where(tau >= seg_end, F_end, F(np.clip(tau, pulse.t_on, seg_end)))

    return antiderivative


def psi_length_scalar_form(
    p: Vec3,
    pulse: PulseShape,
    r: Vec3,
    t: float,
    C: complex = 1.0,
    epsabs: float = DEFAULT_PHASE_EPSABS,
    nodes_per_period: int = NODES_PER_PERIOD,
) -> complex:
    """Length-gauge wavefunction built from the electric field alone.

    Phase = p.r - integral of r.E(tau) - (1/2) integral of (p - integral of E)^2,
    all time integrals starting at t_on. The inner integral of E is tabulated
    on a dense grid and interpolated with cubic pieces; the result must agree
    with :func:`psi_length` within the nested-quadrature tolerance.
    """
    if t < pulse.t_on:
        raise DomainError(f"phase integral starts at pulse onset t_on={pulse.t_on}, got t={t}")
    F = _efield_antiderivative(pulse, t, nodes_per_period)
    p_sq = p.dot(p)
    p_par = p.dot(pulse.polarization)
    r_par = r.dot(pulse.polarization)

    term_field = r_par * float(F(t))

    def g(tau: float) -> float:
        f_val = float(F(tau))
        return 0.5 * p_sq - p_par * f_val + 0.5 * f_val * f_val

    term_drift, _ = _quad_segment(g, pulse.t_on, t, pulse, epsabs)
    phase = p.dot(r) - term_field - term_drift
    return C * cmath.exp(1j * phase)


@dataclass(frozen=True)
class ResidualReport:
    """Finite-difference residual of i dPsi/dt - H Psi over a space-time grid."""

    gauge: str
    max_residual: float
    rms_residual: float
    grid: SpaceTimeGrid

    def to_json_dict(self) -> dict:
        return {
            "gauge": self.gauge,
            "max_residual": self.max_residual,
            "rms_residual": self.rms_residual,
            "grid": {
                "dx": self.grid.dx,
                "dt": self.grid.dt,
                "extent": {
                    "x_min": self.grid.x_min,
                    "x_max": self.grid.x_max,
                    "t_min": self.grid.t_min,
                    "t_max": self.grid.t_max,
                },
            },
        }


def _require_axis_aligned(p: Vec3, pulse: PulseShape):
    if p.y != 0.0 or p.z != 0.0:
        raise UsageError("residual scan is one-dimensional: p must lie along the x axis")
    if pulse.polarization.y != 0.0 or pulse.polarization.z != 0.0:
        raise UsageError("residual scan is one-dimensional: polarization must lie along the x axis")


def _wavefunction_grid(gauge: str, p: Vec3, pulse: PulseShape, x: np.ndarray, ts: np.ndarray, C: complex):
    s = phase_series(p, pulse, ts)
    psi = C * np.exp(1j * (p.x * x[None, :] - s[:, None]))
    if gauge == "length":
        ax = pulse.polarization.x * np.asarray(pulse.amplitude(ts))
        psi = psi * np.exp(1j * x[None, :] * ax[:, None] / SPEED_OF_LIGHT)
    return psi


def schrodinger_residual(
    gauge: str, p: Vec3, pulse: PulseShape, grid: SpaceTimeGrid, C: complex = 1.0
) -> ResidualReport:
    """Max and RMS of |i dPsi/dt - H Psi| with second-order central stencils.

    The exact wavefunctions satisfy the equations, so the residual is pure
    discretization error and must shrink at second order in the grid steps.
    """
    if gauge not in ("velocity", "length"):
        raise UsageError(f"gauge must be 'velocity' or 'length', got {gauge!r}")
    if grid.t_min < pulse.t_on:
        raise DomainError(f"residual grid must stay at or after pulse onset t_on={pulse.t_on}")
    _require_axis_aligned(p, pulse)

    x = grid.x_points()
    ts = grid.t_points()
    dx, dt = grid.dx, grid.dt

    psi = _wavefunction_grid(gauge, p, pulse, x, ts, C)

    inner = psi[1:-1, 1:-1]
    psi_t = (psi[2:, 1:-1] - psi[:-2, 1:-1]) / (2.0 * dt)
    psi_x = (psi[1:-1, 2:] - psi[1:-1, :-2]) / (2.0 * dx)
    psi_xx = (psi[1:-1, 2:] - 2.0 * inner + psi[1:-1, :-2]) / (dx * dx)

    if gauge == "velocity":
        ax = (pulse.polarization.x * np.asarray(pulse.amplitude(ts)))[1:-1, None]
        h_psi = (
            -0.5 * psi_xx
            - 1j * (ax / SPEED_OF_LIGHT) * psi_x
            + (ax * ax / (2.0 * SPEED_OF_LIGHT**2)) * inner
        )
    else:
        ex = (pulse.polarization.x * np.asarray(pulse.efield_amplitude(ts)))[1:-1, None]
        h_psi = -0.5 * psi_xx + (x[None, 1:-1] * ex) * inner

    resid = np.abs(1j * psi_t - h_psi)
    return ResidualReport(
        gauge=gauge,
        max_residual=float(resid.max()),
        rms_residual=float(np.sqrt(np.mean(resid**2))),
        grid=grid,
    )


@dataclass(frozen=True)
class ResidualConvergence:
    """Residual reports at a grid and its half-step refinement."""

    coarse: ResidualReport
    fine: ResidualReport

    @property
    def ratio(self) -> float:
        return self.coarse.max_residual / self.fine.max_residual

    def to_json_dict(self) -> dict:
        return {
            "coarse": self.coarse.to_json_dict(),
            "fine": self.fine.to_json_dict(),
            "convergence_ratio": self.ratio,
        }


def residual_convergence(
    gauge: str, p: Vec3, pulse: PulseShape, grid: SpaceTimeGrid, C: complex = 1.0
) -> ResidualConvergence:
    """Measure second-order convergence by halving both grid steps."""
    return ResidualConvergence(
        coarse=schrodinger_residual(gauge, p, pulse, grid, C),
        fine=schrodinger_residual(gauge, p, pulse, grid.refined(), C),
    )
