"""Keldysh parameter and ponderomotive energy, with (intensity, frequency) scans.

gamma = sqrt(E_B / (2 U_p)) with U_p = I/(2 omega)^2, all in atomic units.
The same gamma is reached along inequivalent paths (omega -> 0 at fixed I,
or I -> infinity at fixed omega); the scan annotates iso-gamma groups so such
pairs are visible side by side. The module tabulates only: it attaches no
regime labels, since equal gamma does not imply equal physics.

Intensity is accepted in atomic units only; the W/cm^2 conversion constant
lives in the CLI documentation, not here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, UsageError

# 1 atomic unit of intensity in W/cm^2 (for CLI documentation only).
INTENSITY_AU_IN_W_CM2 = 3.50944758e16

SCAN_CSV_HEADER = ["omega", "I", "U_p", "gamma", "iso_group"]

ISO_GAMMA_REL_TOL = 0.01


def _require_positive(**values: float) -> None:
    for name, v in values.items():
        if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
            raise DomainError(f"{name} must be a positive finite number, got {v!r}")


def ponderomotive(I: float, omega: float) -> float:
    """Cycle-averaged quiver energy U_p = I / (2 omega)^2 for linear polarization."""
    _require_positive(I=I, omega=omega)
    return I / (2.0 * omega) ** 2


def keldysh_gamma(E_B: float, U_p: float) -> float:
    """gamma = sqrt(E_B / (2 U_p)) for binding energy E_B."""
    _require_positive(E_B=E_B, U_p=U_p)
    return math.sqrt(E_B / (2.0 * U_p))


def gamma_from_intensity(E_B: float, omega: float, I: float) -> float:
    """gamma = (omega / sqrt(I)) sqrt(2 E_B); algebraically the same route as above."""
    _require_positive(E_B=E_B, omega=omega, I=I)
    return omega / math.sqrt(I) * math.sqrt(2.0 * E_B)


@dataclass(frozen=True)
class KeldyshPoint:
    """One (I, omega) cell of a regime scan."""

    E_B: float
    omega: float
    I: float
    U_p: float
    gamma: float

    def __post_init__(self):
        _require_positive(E_B=self.E_B, omega=self.omega, I=self.I)
        if abs(self.U_p - ponderomotive(self.I, self.omega)) > 1e-12 * max(1.0, self.U_p):
            raise UsageError("U_p inconsistent with intensity and frequency")
        if abs(self.gamma - gamma_from_intensity(self.E_B, self.omega, self.I)) > 1e-12 * max(1.0, self.gamma):
            raise UsageError("gamma inconsistent with E_B, omega and I")

    @classmethod
    def from_intensity(cls, E_B: float, omega: float, I: float) -> "KeldyshPoint":
        U_p = ponderomotive(I, omega)
        return cls(E_B=E_B, omega=omega, I=I, U_p=U_p, gamma=keldysh_gamma(E_B, U_p))


def geometric_grid(start: float, stop: float, num: int) -> np.ndarray:
    _require_positive(start=start, stop=stop)
    if num < 1:
        raise UsageError(f"grid needs at least one point, got num={num}")
    if num == 1:
        return np.array([float(start)])
    return np.geomspace(start, stop, num)


@dataclass(frozen=True)
class RegimeScan:
    """Cartesian (omega, I) table of Keldysh points with iso-gamma annotation.

    Rows iterate omega ascending, then I ascending. ``iso_groups[k]`` is the
    id of the iso-gamma group of point k (cells whose gamma agree within 1%),
    or -1 for cells without a partner.
    """

    E_B: float
    omega_values: np.ndarray
    intensity_values: np.ndarray
    points: tuple[KeldyshPoint, ...]
    iso_groups: tuple[int, ...]

    def rows(self):
        for pt, group in zip(self.points, self.iso_groups):
            yield [pt.omega, pt.I, pt.U_p, pt.gamma, group]

    def to_json_dict(self) -> dict:
        return {
            "E_B": self.E_B,
            "omega_grid": [float(w) for w in self.omega_values],
            "intensity_grid": [float(i) for i in self.intensity_values],
            "iso_gamma_rel_tol": ISO_GAMMA_REL_TOL,
            "n_iso_groups": len({g for g in self.iso_groups if g >= 0}),
            "points": [
                {
                    "omega": pt.omega,
                    "I": pt.I,
                    "U_p": pt.U_p,
                    "gamma": pt.gamma,
                    "iso_group": group,
                }
                for pt, group in zip(self.points, self.iso_groups)
            ],
        }

    def iso_pair_with_intensity_ratio(self, min_ratio: float) -> tuple[KeldyshPoint, KeldyshPoint] | None:
        """Find two iso-gamma cells whose intensities differ by >= min_ratio."""
        by_group: dict[int, list[KeldyshPoint]] = {}
        for pt, group in zip(self.points, self.iso_groups):
            if group >= 0:
                by_group.setdefault(group, []).append(pt)
        for group in sorted(by_group):
            members = sorted(by_group[group], key=lambda pt: pt.I)
            lo, hi = members[0], members[-1]
            if hi.I >= min_ratio * lo.I:
                return lo, hi
        return None


def _iso_gamma_groups(gammas: list[float]) -> list[int]:
    """Greedy grouping of values agreeing within ISO_GAMMA_REL_TOL of the group anchor."""
    order = sorted(range(len(gammas)), key=lambda k: gammas[k])
    groups = [-1] * len(gammas)
    next_id = 0
    i = 0
    while i < len(order):
        anchor = gammas[order[i]]
        j = i + 1
        while j < len(order) and gammas[order[j]] <= anchor * (1.0 + ISO_GAMMA_REL_TOL):
            j += 1
        if j - i > 1:
            for k in order[i:j]:
                groups[k] = next_id
            next_id += 1
        i = j
    return groups


def regime_scan(E_B: float, intensity_values, omega_values) -> RegimeScan:
    """Tabulate gamma and U_p over the Cartesian (omega, I) grid."""
    _require_positive(E_B=E_B)
    omega_values = np.asarray(omega_values, dtype=float)
    intensity_values = np.asarray(intensity_values, dtype=float)
    if omega_values.size == 0 or intensity_values.size == 0:
        raise UsageError("regime scan needs non-empty omega and intensity grids")
    omega_values = np.sort(omega_values)
    intensity_values = np.sort(intensity_values)

    points = tuple(
        KeldyshPoint.from_intensity(E_B, float(w), float(i))
        for w in omega_values
        for i in intensity_values
    )
    groups = _iso_gamma_groups([pt.gamma for pt in points])
    return RegimeScan(
        E_B=E_B,
        omega_values=omega_values,
        intensity_values=intensity_values,
        points=points,
        iso_groups=tuple(groups),
    )
