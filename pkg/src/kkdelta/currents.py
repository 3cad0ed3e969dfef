"""Probability currents of the incident, reflected and transmitted waves.

Points live on the cylinder surface (phi, z); the radial coordinate is frozen at
the compact radius R, so the phi-hat gradient carries a 1/R metric factor.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .core import PhysicalConfig, ScatteringAmplitudes, ScatteringSetup
from .scattering import coefficients

PARTS = ("incident", "reflected", "transmitted")
TWO_PI = 2.0 * math.pi
# |J_i| below this fraction of its scale counts as a node of the angular factor
NODE_RTOL = 1e-14


@dataclass(frozen=True)
class SurfacePoint:
    phi: float
    z: float

    def __post_init__(self):
        object.__setattr__(self, "phi", float(self.phi) % TWO_PI)
        object.__setattr__(self, "z", float(self.z))


@dataclass(frozen=True)
class CurrentVector:
    j_phi: float
    j_z: float

    def __post_init__(self):
        if not (math.isfinite(self.j_phi) and math.isfinite(self.j_z)):
            raise ValueError(f"current components must be finite, got ({self.j_phi}, {self.j_z})")

    @property
    def norm(self) -> float:
        return math.hypot(self.j_phi, self.j_z)


@dataclass(frozen=True)
class CurrentField:
    part: str
    grid: tuple[tuple[SurfacePoint, CurrentVector], ...]
    amplitude_A1: complex = 1.0

    def __post_init__(self):
        if not self.grid:
            raise ValueError("current field grid is empty")
        points = [p for p, _ in self.grid]
        if len(set(points)) != len(points):
            raise ValueError("current field grid has repeated points")


def angular_factor(phi: float, n: int, F1: complex, G1: complex) -> complex:
    return F1 * math.cos(n * phi) + G1 * math.sin(n * phi)


def _check_part(part: str) -> None:
    if part not in PARTS:
        raise ValueError(f"unknown wave part {part!r}; expected one of {PARTS}")


def _amplitudes(setup, amplitudes):
    return amplitudes if amplitudes is not None else coefficients(setup)


def _part_coefficient(part: str, amplitudes: ScatteringAmplitudes, A1: complex) -> complex:
    if part == "incident":
        return A1
    if part == "reflected":
        return A1 * amplitudes.r
    return A1 * amplitudes.t


def _part_psi(part, phi, z, setup, amplitudes, A1) -> complex:
    sign = -1.0 if part == "reflected" else 1.0
    return (
        _part_coefficient(part, amplitudes, A1)
        * cmath.exp(sign * 1j * setup.k1 * z)
        * angular_factor(phi, setup.n, setup.F1, setup.G1)
    )


def wavefunction(region, part, point: SurfacePoint, setup: ScatteringSetup,
                 amplitudes: ScatteringAmplitudes | None = None, A1: complex = 1.0) -> complex:
    """Evaluate one piece of the scattering state.

    Region "I" (z < 0) holds the incident, reflected and total (their sum)
    waves; region "II" (z > 0) holds only the transmitted wave, which is also
    its total.
    """
    amplitudes = _amplitudes(setup, amplitudes)
    if region == "I":
        if part == "total":
            return (_part_psi("incident", point.phi, point.z, setup, amplitudes, A1)
                    + _part_psi("reflected", point.phi, point.z, setup, amplitudes, A1))
        if part in ("incident", "reflected"):
            return _part_psi(part, point.phi, point.z, setup, amplitudes, A1)
    elif region == "II":
        if part in ("transmitted", "total"):
            return _part_psi("transmitted", point.phi, point.z, setup, amplitudes, A1)
    else:
        raise ValueError(f"unknown region {region!r}; expected 'I' or 'II'")
    raise ValueError(f"wave part {part!r} does not exist in region {region}")


def current_closed_form(part, point: SurfacePoint, setup: ScatteringSetup,
                        amplitudes: ScatteringAmplitudes | None = None,
                        A1: complex = 1.0) -> CurrentVector:
    _check_part(part)
    amplitudes = _amplitudes(setup, amplitudes)
    X = _part_coefficient(part, amplitudes, A1)
    F, G, n = setup.F1, setup.G1, setup.n
    prefactor = setup.config.hbar * abs(X) ** 2 / (2.0 * setup.config.mass)

    # i*(F G* - F* G) = -2 Im(F G*), real by construction
    j_phi = prefactor * (n / setup.radius) * (-2.0 * (F * G.conjugate()).imag)

    phi = point.phi
    profile = (abs(F) ** 2 * math.cos(n * phi) ** 2
               + (F * G.conjugate()).real * math.sin(2 * n * phi)
               + abs(G) ** 2 * math.sin(n * phi) ** 2)
    sign = -1.0 if part == "reflected" else 1.0
    j_z = sign * prefactor * 2.0 * setup.k1 * profile
    return CurrentVector(j_phi, j_z)


def probability_current(psi: complex, grad_phi: complex, grad_z: complex,
                        config: PhysicalConfig) -> tuple[complex, complex]:
    """(i hbar/2m)(psi grad psi* - psi* grad psi), component by component.

    Returns complex values so callers can inspect the imaginary residue,
    which is zero for exact gradients.
    """
    c = 1j * config.hbar / (2.0 * config.mass)
    j_phi = c * (psi * grad_phi.conjugate() - psi.conjugate() * grad_phi)
    j_z = c * (psi * grad_z.conjugate() - psi.conjugate() * grad_z)
    return j_phi, j_z


def numerical_current_components(part, point, setup, amplitudes=None, A1=1.0, h=1e-5):
    if not h > 0:
        raise ValueError(f"finite-difference step must be positive, got {h!r}")
    _check_part(part)
    amplitudes = _amplitudes(setup, amplitudes)
    phi, z = point.phi, point.z

    def psi(p, q):
        return _part_psi(part, p, q, setup, amplitudes, A1)

    dpsi_dz = (psi(phi, z + h) - psi(phi, z - h)) / (2.0 * h)
    dpsi_dphi = (psi(phi + h, z) - psi(phi - h, z)) / (2.0 * h)
    return probability_current(psi(phi, z), dpsi_dphi / setup.radius, dpsi_dz, setup.config)


def current_numerical(part, point: SurfacePoint, setup: ScatteringSetup,
                      amplitudes: ScatteringAmplitudes | None = None,
                      A1: complex = 1.0, h: float = 1e-5) -> CurrentVector:
    """Current from central differences of the wavefunction with step ``h``.

    Independent of :func:`current_closed_form`; agreement is O(h^2).
    """
    j_phi, j_z = numerical_current_components(part, point, setup, amplitudes, A1, h)
    return CurrentVector(j_phi.real, j_z.real)


def current_field(part, points, setup, amplitudes=None, A1=1.0) -> CurrentField:
    amplitudes = _amplitudes(setup, amplitudes)
    grid = tuple((p, current_closed_form(part, p, setup, amplitudes, A1)) for p in points)
    return CurrentField(part=part, grid=grid, amplitude_A1=A1)


def surface_grid(n_phi: int, n_z: int, z_min: float, z_max: float) -> list[SurfacePoint]:
    """Uniform phi x z grid, phi in [0, 2pi) and z spanning [z_min, z_max] inclusive."""
    if n_phi < 1 or n_z < 1:
        raise ValueError("grid sizes must be at least 1")
    if n_z > 1 and not z_max > z_min:
        raise ValueError("z range must satisfy z_min < z_max")
    phis = [TWO_PI * i / n_phi for i in range(n_phi)]
    if n_z == 1:
        zs = [z_min]
    else:
        zs = [z_min + (z_max - z_min) * j / (n_z - 1) for j in range(n_z)]
    return [SurfacePoint(p, z) for p in phis for z in zs]


def region_points(part, points):
    """Points where ``part`` physically exists; z = 0 belongs to both regions."""
    _check_part(part)
    if part == "transmitted":
        return [p for p in points if p.z >= 0.0]
    return [p for p in points if p.z <= 0.0]


def coefficients_from_currents(setup: ScatteringSetup, amplitudes=None, A1: complex = 1.0,
                               grid=None) -> tuple[float, float]:
    """R1 = |J_r|/|J_i| and T1 = |J_t|/|J_i| from the current fields.

    The ratios do not depend on the point; the value at the point with the
    largest incident current is returned. Nodal points are skipped.
    """
    amplitudes = _amplitudes(setup, amplitudes)
    if grid is None:
        grid = [SurfacePoint(0.0, 0.0)]
    if len(grid) == 0:
        raise ValueError("current grid is empty")
    cfg = setup.config
    scale = (cfg.hbar * abs(A1) ** 2 / (2.0 * cfg.mass)
             * (abs(setup.F1) ** 2 + abs(setup.G1) ** 2)
             * (2.0 * setup.k1 + abs(setup.n) / setup.radius))
    best = None
    for p in grid:
        j_i = current_closed_form("incident", p, setup, amplitudes, A1).norm
        if j_i > NODE_RTOL * scale and (best is None or j_i > best[0]):
            best = (j_i, p)
    if best is None:
        raise ValueError("degenerate grid on nodal set: incident current vanishes at every point")
    j_i, p = best
    j_r = current_closed_form("reflected", p, setup, amplitudes, A1).norm
    j_t = current_closed_form("transmitted", p, setup, amplitudes, A1).norm
    return j_r / j_i, j_t / j_i
