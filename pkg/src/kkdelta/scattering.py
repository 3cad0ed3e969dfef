"""Closed-form scattering off lambda*delta(z) for a single angular mode.

The delta does not depend on the angle, so the angular mode only rides along:
every amplitude here depends on k1 and g = m*lambda/hbar^2 alone.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    CompactGeometry,
    PhysicalConfig,
    ScatteringAmplitudes,
    ScatteringSetup,
    SetupError,
    make_setup,
)

CONSISTENCY_TOL = 1e-12


def reflection_amplitude(setup: ScatteringSetup) -> complex:
    g = setup.coupling
    return -1j * g / (setup.k1 + 1j * g)


def transmission_amplitude(setup: ScatteringSetup) -> complex:
    g = setup.coupling
    return setup.k1 / (setup.k1 + 1j * g)


def coefficients(setup: ScatteringSetup) -> ScatteringAmplitudes:
    """Amplitudes plus R1 = g^2/(k1^2+g^2) and T1 = k1^2/(k1^2+g^2).

    The closed forms are cross-checked against |r|^2 and |t|^2.
    """
    r = reflection_amplitude(setup)
    t = transmission_amplitude(setup)
    g2 = setup.coupling**2
    k2 = setup.k1**2
    R1 = g2 / (k2 + g2)
    T1 = k2 / (k2 + g2)
    if abs(R1 - abs(r) ** 2) > CONSISTENCY_TOL or abs(T1 - abs(t) ** 2) > CONSISTENCY_TOL:
        raise ArithmeticError(
            f"coefficient paths disagree: R1={R1!r} vs |r|^2={abs(r) ** 2!r}, "
            f"T1={T1!r} vs |t|^2={abs(t) ** 2!r}"
        )
    return ScatteringAmplitudes(r=r, t=t, R1=R1, T1=T1)


def boundary_residuals(setup: ScatteringSetup, r: complex, t: complex) -> tuple[complex, complex]:
    """Residuals of continuity and of the derivative jump at z = 0, per unit A1.

    Both vanish exactly when (r, t) solve the scattering problem.
    """
    k = setup.k1
    jump = 2.0 * setup.coupling
    continuity = 1.0 + r - t
    derivative = 1j * k * t - 1j * k * (1.0 - r) - jump * t
    return continuity, derivative


@dataclass(frozen=True)
class SweepRow:
    k1: float
    E_axial: float
    R1: float
    T1: float
    r: complex
    t: complex


def sweep_coefficients(lam, k1_grid, config=None, geometry=None) -> list[SweepRow]:
    """Coefficients on a strictly increasing grid of axial wavenumbers."""
    grid = np.asarray(k1_grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise SetupError("k1 grid must be a nonempty 1D sequence")
    if grid.size > 1 and not np.all(np.diff(grid) > 0):
        raise SetupError("k1 grid must be strictly increasing")
    config = config if config is not None else PhysicalConfig()
    geometry = geometry if geometry is not None else CompactGeometry()
    rows = []
    for k1 in grid:
        amps = coefficients(make_setup(lam, float(k1), config=config, geometry=geometry))
        rows.append(
            SweepRow(
                k1=float(k1),
                E_axial=config.kinetic_scale * float(k1) ** 2,
                R1=amps.R1,
                T1=amps.T1,
                r=amps.r,
                t=amps.t,
            )
        )
    return rows
