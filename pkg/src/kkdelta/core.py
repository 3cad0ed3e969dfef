"""Shared physical configuration, compact geometry and scattering setup types.

Every formula in the package keeps hbar and the particle mass explicit, so the
same code runs in natural units (the default, hbar = mass = 1) or in SI.
"""
from __future__ import annotations

import json
import math
import numbers
from dataclasses import dataclass
from pathlib import Path

MAX_COMPACT_DIMS = 6


class SetupError(ValueError):
    """Base class for rejected physical inputs."""


class NonPropagatingError(SetupError):
    pass


class ZeroAngularAmplitudeError(SetupError):
    pass


class GeometryDimensionError(SetupError):
    pass


def _positive_finite(name: str, value) -> float:
    value = float(value)
    if not math.isfinite(value) or value <= 0.0:
        raise SetupError(f"{name} must be positive and finite, got {value!r}")
    return value


@dataclass(frozen=True)
class PhysicalConfig:
    """Unit system: reduced Planck constant and particle mass."""

    hbar: float = 1.0
    mass: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "hbar", _positive_finite("hbar", self.hbar))
        object.__setattr__(self, "mass", _positive_finite("mass", self.mass))

    @property
    def kinetic_scale(self) -> float:
        """hbar^2 / 2m, the factor turning k^2 into an energy."""
        return self.hbar**2 / (2.0 * self.mass)

    def coupling(self, lam: float) -> float:
        """Inverse length m*lambda/hbar^2 set by a delta of strength lambda."""
        return self.mass * lam / self.hbar**2


@dataclass(frozen=True)
class CompactGeometry:
    """Radii of the compact circles, one per extra dimension (1 <= d <= 6)."""

    radii: tuple[float, ...] = (1.0,)

    def __post_init__(self):
        radii = self.radii
        if isinstance(radii, numbers.Real):
            radii = (radii,)
        radii = tuple(_positive_finite("radius", r) for r in radii)
        if not 1 <= len(radii) <= MAX_COMPACT_DIMS:
            raise GeometryDimensionError(
                f"number of compact dimensions must be in [1, {MAX_COMPACT_DIMS}], got {len(radii)}"
            )
        object.__setattr__(self, "radii", radii)

    @property
    def d(self) -> int:
        return len(self.radii)

    @property
    def radius(self) -> float:
        if self.d != 1:
            raise GeometryDimensionError(f"geometry has {self.d} compact dimensions, expected 1")
        return self.radii[0]


@dataclass(frozen=True)
class ScatteringSetup:
    """Incident beam on the delta at z = 0 in one angular mode of the cylinder.

    ``lam`` is the delta strength (positive is a barrier), ``k1`` the axial
    wavenumber and ``(F1, G1)`` the cos/sin amplitudes of the angular mode ``n``.
    Use :func:`make_setup` or construct directly; both validate.
    """

    lam: float
    k1: float
    n: int = 0
    F1: complex = 1.0
    G1: complex = 0.0
    config: PhysicalConfig = PhysicalConfig()
    geometry: CompactGeometry = CompactGeometry()

    def __post_init__(self):
        lam = float(self.lam)
        if not math.isfinite(lam):
            raise SetupError(f"delta strength must be finite, got {lam!r}")
        k1 = float(self.k1)
        if not math.isfinite(k1) or k1 <= 0.0:
            raise NonPropagatingError(f"non-propagating incident wave: k1 must be > 0, got {k1!r}")
        n = self.n
        if isinstance(n, bool) or not isinstance(n, numbers.Integral):
            if isinstance(n, numbers.Real) and float(n).is_integer():
                n = int(n)
            else:
                raise SetupError(f"angular mode n must be an integer, got {n!r}")
        F1, G1 = complex(self.F1), complex(self.G1)
        if F1 == 0 and G1 == 0:
            raise ZeroAngularAmplitudeError("angular amplitudes F1 and G1 are both zero")
        if self.geometry.d != 1:
            raise GeometryDimensionError(
                f"scattering is defined on a single compact circle, got d = {self.geometry.d}"
            )
        for name, value in (("lam", lam), ("k1", k1), ("n", int(n)), ("F1", F1), ("G1", G1)):
            object.__setattr__(self, name, value)

    @property
    def radius(self) -> float:
        return self.geometry.radius

    @property
    def coupling(self) -> float:
        return self.config.coupling(self.lam)


@dataclass(frozen=True)
class ScatteringAmplitudes:
    """Relative amplitudes r = B1/A1, t = C1/A1 and the coefficients R1, T1."""

    r: complex
    t: complex
    R1: float
    T1: float


def make_setup(lam, k1, n=0, F1=1.0, G1=0.0, config=None, geometry=None) -> ScatteringSetup:
    return ScatteringSetup(
        lam=lam,
        k1=k1,
        n=n,
        F1=F1,
        G1=G1,
        config=config if config is not None else PhysicalConfig(),
        geometry=geometry if geometry is not None else CompactGeometry(),
    )


def load_config(path) -> tuple[PhysicalConfig, CompactGeometry]:
    """Read ``{"hbar": .., "mass": .., "radii": [..]}``; missing keys take defaults."""
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(data, dict):
        raise SetupError(f"config file {path} must hold a JSON object")
    config = PhysicalConfig(hbar=data.get("hbar", 1.0), mass=data.get("mass", 1.0))
    geometry = CompactGeometry(tuple(data.get("radii", [1.0])))
    return config, geometry
