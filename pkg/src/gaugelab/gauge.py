"""Electromagnetic potentials, gauge generators and derived fields.

A gauge is a pair (phi, A) of scalar and vector potentials. A generating
function Lambda(r, t) maps one gauge to another while leaving the electric
and magnetic fields untouched:

    phi' = phi - (1/c) dLambda/dt
    A'   = A + grad Lambda

Everything is in Hartree atomic units with Gaussian-convention factors of
1/c on the electromagnetic couplings.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .errors import DomainError, UsageError
from .vectors import Vec3

# Speed of light in Hartree atomic units (inverse fine-structure constant).
SPEED_OF_LIGHT = 137.035999

# Central-difference step for derivative fallbacks, in a.u.
DEFAULT_FD_STEP = 1e-4

# Default absolute tolerance for field-invariance checks when both sides use
# analytic derivatives; finite-difference paths should use fd_tolerance().
DEFAULT_INVARIANCE_TOL = 1e-8

ScalarField = Callable[[Vec3, float], float]
VectorField = Callable[[Vec3, float], Vec3]


def fd_tolerance(h: float = DEFAULT_FD_STEP) -> float:
    """Invariance tolerance for central-difference derivative paths."""
    return 10.0 * h * h


def _zero_scalar(r: Vec3, t: float) -> float:
    return 0.0


def _zero_vector(r: Vec3, t: float) -> Vec3:
    return Vec3(0.0, 0.0, 0.0)


_AXES = (Vec3(1.0, 0.0, 0.0), Vec3(0.0, 1.0, 0.0), Vec3(0.0, 0.0, 1.0))


def grad_scalar_fd(f: ScalarField, r: Vec3, t: float, h: float = DEFAULT_FD_STEP) -> Vec3:
    """Central-difference gradient of a scalar field, O(h^2)."""
    comps = []
    for e in _AXES:
        comps.append((f(r + e * h, t) - f(r - e * h, t)) / (2.0 * h))
    return Vec3(*comps)


def dt_scalar_fd(f: ScalarField, r: Vec3, t: float, h: float = DEFAULT_FD_STEP) -> float:
    return (f(r, t + h) - f(r, t - h)) / (2.0 * h)


def dt_vector_fd(a: VectorField, r: Vec3, t: float, h: float = DEFAULT_FD_STEP) -> Vec3:
    return (a(r, t + h) - a(r, t - h)) * (1.0 / (2.0 * h))


def curl_fd(a: VectorField, r: Vec3, t: float, h: float = DEFAULT_FD_STEP) -> Vec3:
    """Central-difference curl of a vector field, O(h^2)."""
    d = []  # d[j] = dA/dx_j as Vec3
    for e in _AXES:
        d.append((a(r + e * h, t) - a(r - e * h, t)) * (1.0 / (2.0 * h)))
    return Vec3(d[1].z - d[2].y, d[2].x - d[0].z, d[0].y - d[1].x)


def jacobian_fd(a: VectorField, r: Vec3, t: float, h: float = DEFAULT_FD_STEP):
    """Rows jac[i] = gradient of component A_i; returned as three Vec3."""
    cols = []
    for e in _AXES:
        cols.append((a(r + e * h, t) - a(r - e * h, t)) * (1.0 / (2.0 * h)))
    # cols[j] holds dA/dx_j; transpose into per-component gradients
    return (
        Vec3(cols[0].x, cols[1].x, cols[2].x),
        Vec3(cols[0].y, cols[1].y, cols[2].y),
        Vec3(cols[0].z, cols[1].z, cols[2].z),
    )


@dataclass(frozen=True)
class PotentialConfiguration:
    """A scalar potential phi(r, t) and vector potential A(r, t) defining a gauge.

    Analytic derivative suppliers are optional; operations fall back to
    central finite differences with step ``fd_step`` when one is missing.
    Supplied derivatives must agree with the finite-difference ones to O(h^2)
    (see :func:`derivative_consistency`).
    """

    phi: ScalarField = _zero_scalar
    A: VectorField = _zero_vector
    grad_phi: Callable[[Vec3, float], Vec3] | None = None
    dt_A: Callable[[Vec3, float], Vec3] | None = None
    curl_A: Callable[[Vec3, float], Vec3] | None = None
    jac_A: Callable[[Vec3, float], tuple[Vec3, Vec3, Vec3]] | None = None
    fd_step: float = DEFAULT_FD_STEP
    name: str = ""

    def grad_phi_at(self, r: Vec3, t: float) -> Vec3:
        if self.grad_phi is not None:
            return self.grad_phi(r, t)
        return grad_scalar_fd(self.phi, r, t, self.fd_step)

    def dt_A_at(self, r: Vec3, t: float) -> Vec3:
        if self.dt_A is not None:
            return self.dt_A(r, t)
        return dt_vector_fd(self.A, r, t, self.fd_step)

    def curl_A_at(self, r: Vec3, t: float) -> Vec3:
        if self.curl_A is not None:
            return self.curl_A(r, t)
        return curl_fd(self.A, r, t, self.fd_step)

    def jac_A_at(self, r: Vec3, t: float) -> tuple[Vec3, Vec3, Vec3]:
        if self.jac_A is not None:
            return self.jac_A(r, t)
        return jacobian_fd(self.A, r, t, self.fd_step)


@dataclass(frozen=True)
class GaugeGenerator:
    """Generating function Lambda(r, t) with its space and time derivatives.

    ``grad_lambda`` and ``dt_lambda`` default to central differences of
    ``lam``; ``grad_dt_lambda`` (the mixed derivative, used to propagate
    analytic derivatives through a transformation) is optional.
    """

    lam: ScalarField
    grad_lambda: Callable[[Vec3, float], Vec3] | None = None
    dt_lambda: ScalarField | None = None
    grad_dt_lambda: Callable[[Vec3, float], Vec3] | None = None
    fd_step: float = DEFAULT_FD_STEP
    name: str = "lambda"

    def grad_at(self, r: Vec3, t: float) -> Vec3:
        if self.grad_lambda is not None:
            return self.grad_lambda(r, t)
        return grad_scalar_fd(self.lam, r, t, self.fd_step)

    def dt_at(self, r: Vec3, t: float) -> float:
        if self.dt_lambda is not None:
            return self.dt_lambda(r, t)
        return dt_scalar_fd(self.lam, r, t, self.fd_step)

    def negated(self) -> "GaugeGenerator":
        """Generator of the inverse transformation (-Lambda)."""
        lam, gl, dl, gdl = self.lam, self.grad_lambda, self.dt_lambda, self.grad_dt_lambda
        return GaugeGenerator(
            lam=lambda r, t: -lam(r, t),
            grad_lambda=None if gl is None else (lambda r, t: -gl(r, t)),
            dt_lambda=None if dl is None else (lambda r, t: -dl(r, t)),
            grad_dt_lambda=None if gdl is None else (lambda r, t: -gdl(r, t)),
            fd_step=self.fd_step,
            name=f"-({self.name})",
        )

    def combined(self, other: "GaugeGenerator") -> "GaugeGenerator":
        """Generator of the composed transformation (Lambda1 + Lambda2)."""
        mixed = None
        if self.grad_dt_lambda is not None and other.grad_dt_lambda is not None:
            f, g = self.grad_dt_lambda, other.grad_dt_lambda
            mixed = lambda r, t: f(r, t) + g(r, t)
        return GaugeGenerator(
            lam=lambda r, t: self.lam(r, t) + other.lam(r, t),
            grad_lambda=lambda r, t: self.grad_at(r, t) + other.grad_at(r, t),
            dt_lambda=lambda r, t: self.dt_at(r, t) + other.dt_at(r, t),
            grad_dt_lambda=mixed,
            fd_step=min(self.fd_step, other.fd_step),
            name=f"{self.name}+{other.name}",
        )


@dataclass(frozen=True)
class EMFields:
    """Electric and magnetic field evaluators derived from one gauge."""

    E: VectorField
    B: VectorField


def _require_finite_vec(v: Vec3, what: str, r: Vec3, t: float) -> Vec3:
    if not (math.isfinite(v.x) and math.isfinite(v.y) and math.isfinite(v.z)):
        raise DomainError(f"{what} is non-finite at r=({r.x}, {r.y}, {r.z}), t={t}")
    return v


def derive_fields(pot: PotentialConfiguration) -> EMFields:
    """Fields of a gauge: E = -grad(phi) - (1/c) dA/dt, B = curl(A).

    Analytic derivative suppliers are used when the configuration carries
    them; otherwise central differences with the configuration's step.
    """

    def E(r: Vec3, t: float) -> Vec3:
        v = -pot.grad_phi_at(r, t) - pot.dt_A_at(r, t) * (1.0 / SPEED_OF_LIGHT)
        return _require_finite_vec(v, "electric field", r, t)

    def B(r: Vec3, t: float) -> Vec3:
        return _require_finite_vec(pot.curl_A_at(r, t), "magnetic field", r, t)

    return EMFields(E=E, B=B)


def apply_gauge(pot: PotentialConfiguration, gen: GaugeGenerator) -> PotentialConfiguration:
    """Transform a gauge by a generating function.

    Returns the configuration (phi', A') with phi' = phi - (1/c) dLambda/dt
    and A' = A + grad Lambda. The curl supplier survives unchanged (the curl
    of a gradient vanishes); gradients of phi' and dA'/dt stay analytic only
    when the generator supplies its mixed derivative.
    """
    inv_c = 1.0 / SPEED_OF_LIGHT

    def phi_prime(r: Vec3, t: float) -> float:
        return pot.phi(r, t) - gen.dt_at(r, t) * inv_c

    def A_prime(r: Vec3, t: float) -> Vec3:
        return pot.A(r, t) + gen.grad_at(r, t)

    grad_phi_prime = None
    dt_A_prime = None
    if gen.grad_dt_lambda is not None:
        gdl = gen.grad_dt_lambda
        if pot.grad_phi is not None:
            gp = pot.grad_phi
            grad_phi_prime = lambda r, t: gp(r, t) - gdl(r, t) * inv_c
        if pot.dt_A is not None:
            da = pot.dt_A
            dt_A_prime = lambda r, t: da(r, t) + gdl(r, t)

    return PotentialConfiguration(
        phi=phi_prime,
        A=A_prime,
        grad_phi=grad_phi_prime,
        dt_A=dt_A_prime,
        curl_A=pot.curl_A,
        jac_A=None,
        fd_step=min(pot.fd_step, gen.fd_step),
        name=f"{pot.name}+{gen.name}" if pot.name else gen.name,
    )


def check_field_invariance(
    pot1: PotentialConfiguration,
    pot2: PotentialConfiguration,
    samples: list[tuple[Vec3, float]],
    tolerance: float = DEFAULT_INVARIANCE_TOL,
):
    """Compare the fields of two gauges on sample points.

    Returns an :class:`~gaugelab.reports.InvarianceReport` whose matched
    group holds the max deviations of E and B; it passes when both stay
    within ``tolerance``.
    """
    from .reports import InvarianceReport, QuantityDeviation

    if not samples:
        raise UsageError("check_field_invariance needs at least one sample point")
    f1 = derive_fields(pot1)
    f2 = derive_fields(pot2)
    max_e = 0.0
    max_b = 0.0
    for r, t in samples:
        de = f1.E(r, t) - f2.E(r, t)
        db = f1.B(r, t) - f2.B(r, t)
        max_e = max(max_e, abs(de.x), abs(de.y), abs(de.z))
        max_b = max(max_b, abs(db.x), abs(db.y), abs(db.z))
    return InvarianceReport.from_groups(
        matched=[QuantityDeviation("E", max_e), QuantityDeviation("B", max_b)],
        differed=[],
        tolerance=tolerance,
    )


def derivative_consistency(
    pot: PotentialConfiguration,
    samples: list[tuple[Vec3, float]],
    h: float = DEFAULT_FD_STEP,
) -> float:
    """Max deviation between supplied analytic derivatives and central differences.

    Useful for validating hand-written derivative suppliers; returns 0.0 when
    the configuration has no analytic suppliers.
    """
    worst = 0.0
    for r, t in samples:
        if pot.grad_phi is not None:
            d = pot.grad_phi(r, t) - grad_scalar_fd(pot.phi, r, t, h)
            worst = max(worst, abs(d.x), abs(d.y), abs(d.z))
        if pot.dt_A is not None:
            d = pot.dt_A(r, t) - dt_vector_fd(pot.A, r, t, h)
            worst = max(worst, abs(d.x), abs(d.y), abs(d.z))
        if pot.curl_A is not None:
            d = pot.curl_A(r, t) - curl_fd(pot.A, r, t, h)
            worst = max(worst, abs(d.x), abs(d.y), abs(d.z))
    return worst


def generator_consistency(
    gen: GaugeGenerator,
    samples: list[tuple[Vec3, float]],
    h: float = DEFAULT_FD_STEP,
) -> float:
    """Max deviation of a generator's derivative suppliers from central differences."""
    worst = 0.0
    for r, t in samples:
        if gen.grad_lambda is not None:
            d = gen.grad_lambda(r, t) - grad_scalar_fd(gen.lam, r, t, h)
            worst = max(worst, abs(d.x), abs(d.y), abs(d.z))
        if gen.dt_lambda is not None:
            worst = max(worst, abs(gen.dt_lambda(r, t) - dt_scalar_fd(gen.lam, r, t, h)))
    return worst
