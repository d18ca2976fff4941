"""Fixed catalog of potential and generator families loadable from JSON config.

Families are selected by name with numeric parameters; there is no free-form
expression parsing. Config errors carry the full field path so the CLI can
point at the offending entry.
"""

from __future__ import annotations

import json
from pathlib import Path

from .errors import UsageError
from .gauge import SPEED_OF_LIGHT, GaugeGenerator, PotentialConfiguration
from .vectors import UNIT_X, Vec3

POTENTIAL_FAMILIES = ("constant-field-scalar", "constant-field-vector", "sinusoidal-pulse")
GENERATOR_FAMILIES = ("polynomial", "product")


def _require_number(cfg: dict, key: str, path: str) -> float:
    if key not in cfg:
        raise UsageError(f"{path}.{key} is required")
    v = cfg[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise UsageError(f"{path}.{key} must be a number, got {v!r}")
    return float(v)


def _optional_number(cfg: dict, key: str, path: str, default: float) -> float:
    if key not in cfg:
        return default
    return _require_number(cfg, key, path)


def _unit_vec(cfg: dict, key: str, path: str, default: Vec3) -> Vec3:
    if key not in cfg:
        return default
    v = cfg[key]
    if not isinstance(v, (list, tuple)) or len(v) != 3:
        raise UsageError(f"{path}.{key} must be a 3-element list")
    vec = Vec3(float(v[0]), float(v[1]), float(v[2]))
    n = vec.norm()
    if abs(n - 1.0) > 1e-9:
        raise UsageError(f"{path}.{key} must be a unit vector (norm {n})")
    return vec


def constant_field_scalar(E0: float) -> PotentialConfiguration:
    """Longitudinal field from a scalar potential: phi = -E0*x, A = 0."""
    return PotentialConfiguration(
        phi=lambda r, t: -E0 * r.x,
        A=lambda r, t: Vec3(0.0, 0.0, 0.0),
        grad_phi=lambda r, t: Vec3(-E0, 0.0, 0.0),
        dt_A=lambda r, t: Vec3(0.0, 0.0, 0.0),
        curl_A=lambda r, t: Vec3(0.0, 0.0, 0.0),
        jac_A=lambda r, t: (Vec3(0, 0, 0), Vec3(0, 0, 0), Vec3(0, 0, 0)),
        name="constant-field-scalar",
    )


def constant_field_vector(E0: float) -> PotentialConfiguration:
    """Same constant field from a vector potential: phi = 0, A = -e_x c E0 t."""
    c = SPEED_OF_LIGHT
    return PotentialConfiguration(
        phi=lambda r, t: 0.0,
        A=lambda r, t: Vec3(-c * E0 * t, 0.0, 0.0),
        grad_phi=lambda r, t: Vec3(0.0, 0.0, 0.0),
        dt_A=lambda r, t: Vec3(-c * E0, 0.0, 0.0),
        curl_A=lambda r, t: Vec3(0.0, 0.0, 0.0),
        jac_A=lambda r, t: (Vec3(0, 0, 0), Vec3(0, 0, 0), Vec3(0, 0, 0)),
        name="constant-field-vector",
    )


def pulse_potential(pulse) -> PotentialConfiguration:
    """Dipole-approximation transverse field: phi = 0, A = A(t) from a pulse."""
    from .volkov import electric_field_from_pulse, vector_potential

    return PotentialConfiguration(
        phi=lambda r, t: 0.0,
        A=lambda r, t: vector_potential(pulse, t),
        grad_phi=lambda r, t: Vec3(0.0, 0.0, 0.0),
        dt_A=lambda r, t: electric_field_from_pulse(pulse, t) * (-SPEED_OF_LIGHT),
        curl_A=lambda r, t: Vec3(0.0, 0.0, 0.0),
        jac_A=lambda r, t: (Vec3(0, 0, 0), Vec3(0, 0, 0), Vec3(0, 0, 0)),
        name=f"pulse-{pulse.family}",
    )


def polynomial_generator(coefficients: list[float]) -> GaugeGenerator:
    """Time-independent Lambda(x) = sum_k c_k x^k."""
    coeffs = [float(c) for c in coefficients]

    def lam(r: Vec3, t: float) -> float:
        return sum(c * r.x**k for k, c in enumerate(coeffs))

    def grad(r: Vec3, t: float) -> Vec3:
        return Vec3(sum(k * c * r.x ** (k - 1) for k, c in enumerate(coeffs) if k > 0), 0.0, 0.0)

    return GaugeGenerator(
        lam=lam,
        grad_lambda=grad,
        dt_lambda=lambda r, t: 0.0,
        grad_dt_lambda=lambda r, t: Vec3(0.0, 0.0, 0.0),
        name="polynomial",
    )


def product_generator(a: float) -> GaugeGenerator:
    """Lambda = a*x*t; with a = -c*E0 it swaps the constant-field gauges."""
    return GaugeGenerator(
        lam=lambda r, t: a * r.x * t,
        grad_lambda=lambda r, t: Vec3(a * t, 0.0, 0.0),
        dt_lambda=lambda r, t: a * r.x,
        grad_dt_lambda=lambda r, t: Vec3(a, 0.0, 0.0),
        name="product",
    )


def pulse_from_config(cfg: dict, path: str = "pulse"):
    from .volkov import PulseShape

    if not isinstance(cfg, dict):
        raise UsageError(f"{path} must be an object")
    family = cfg.get("family", "rectangular-sinusoid")
    t_on = _optional_number(cfg, "t_on", path, 0.0)
    if family == "zero":
        return PulseShape.zero(t_on=t_on)
    if family not in ("rectangular-sinusoid", "sin2-envelope-sinusoid"):
        raise UsageError(f"{path}.family unknown: {family!r}")
    return PulseShape(
        family=family,
        A0=_require_number(cfg, "A0", path),
        omega=_require_number(cfg, "omega", path),
        polarization=_unit_vec(cfg, "polarization", path, UNIT_X),
        t_on=t_on,
        t_off=_require_number(cfg, "t_off", path),
    )


def potential_from_config(cfg: dict, path: str = "potential") -> PotentialConfiguration:
    """Build a catalog potential from a config mapping."""
    if not isinstance(cfg, dict):
        raise UsageError(f"{path} must be an object")
    family = cfg.get("family")
    if family == "constant-field-scalar":
        return constant_field_scalar(_require_number(cfg, "E0", path))
    if family == "constant-field-vector":
        return constant_field_vector(_require_number(cfg, "E0", path))
    if family == "sinusoidal-pulse":
        return pulse_potential(pulse_from_config(cfg, path))
    raise UsageError(f"{path}.family must be one of {POTENTIAL_FAMILIES}, got {family!r}")


def generator_from_config(cfg: dict, path: str = "generator") -> GaugeGenerator:
    """Build a catalog gauge generator from a config mapping."""
    if not isinstance(cfg, dict):
        raise UsageError(f"{path} must be an object")
    family = cfg.get("family")
    if family == "polynomial":
        coeffs = cfg.get("coefficients")
        if not isinstance(coeffs, (list, tuple)) or not coeffs:
            raise UsageError(f"{path}.coefficients must be a non-empty list of numbers")
        for i, c in enumerate(coeffs):
            if isinstance(c, bool) or not isinstance(c, (int, float)):
                raise UsageError(f"{path}.coefficients[{i}] must be a number, got {c!r}")
        return polynomial_generator(list(coeffs))
    if family == "product":
        return product_generator(_require_number(cfg, "a", path))
    raise UsageError(f"{path}.family must be one of {GENERATOR_FAMILIES}, got {family!r}")


def load_config(path: Path | str) -> dict:
    """Read a JSON config file, mapping parse failures to usage errors."""
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config {p}: {exc}") from exc
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"config {p} is not valid JSON: {exc}") from exc
    if not isinstance(cfg, dict):
        raise UsageError(f"config {p} must contain a JSON object")
    return cfg
