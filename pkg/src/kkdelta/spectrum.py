"""Energy levels from quantized motion around the compact circles.

A mode vector (n_1, ..., n_d) adds sum_i n_i^2 hbar^2 / (2 m R_i^2) on top of
the axial kinetic energy hbar^2 k1^2 / 2m. Modes are stored with n_i >= 0; the
cos/sin pair of every nonzero index is folded into the degeneracy.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import CompactGeometry, PhysicalConfig, SetupError


@dataclass(frozen=True)
class ClosedChannel:
    """Evanescent channel; the axial wave decays as exp(-kappa |z|)."""

    kappa: float


@dataclass(frozen=True)
class SpectrumLevel:
    modes: tuple[int, ...]
    compact_energy: float
    degeneracy: int
    open: bool


def _modes(modes, geometry: CompactGeometry) -> tuple[int, ...]:
    if isinstance(modes, (int, np.integer)):
        modes = (modes,)
    modes = tuple(int(m) for m in modes)
    if len(modes) != geometry.d:
        raise SetupError(f"mode vector has {len(modes)} entries, geometry has d = {geometry.d}")
    return modes


def compact_energy(modes, config: PhysicalConfig, geometry: CompactGeometry) -> float:
    modes = _modes(modes, geometry)
    scale = config.kinetic_scale
    return sum(scale * n * n / (R * R) for n, R in zip(modes, geometry.radii))


def degeneracy(modes) -> int:
    return 2 ** sum(1 for n in modes if n != 0)


def total_energy(k1, modes, config=None, geometry=None) -> float:
    config = config if config is not None else PhysicalConfig()
    geometry = geometry if geometry is not None else CompactGeometry()
    return config.kinetic_scale * k1 * k1 + compact_energy(modes, config, geometry)


def axial_wavenumber(E, modes, config=None, geometry=None) -> float | ClosedChannel:
    """k1 for the channel ``modes`` at total energy E, or ClosedChannel at/below threshold."""
    config = config if config is not None else PhysicalConfig()
    geometry = geometry if geometry is not None else CompactGeometry()
    excess = E - compact_energy(modes, config, geometry)
    if excess > 0:
        return math.sqrt(2.0 * config.mass * excess) / config.hbar
    return ClosedChannel(kappa=math.sqrt(-2.0 * config.mass * excess) / config.hbar)


def _max_index(E_max, R, config) -> int:
    return math.ceil(R * math.sqrt(2.0 * config.mass * E_max) / config.hbar)


def enumerate_levels(E_max, config=None, geometry=None, energy=None) -> list[SpectrumLevel]:
    """All levels with compact energy <= E_max, ascending, ties ordered by modes.

    ``energy`` is the beam energy used for the open/closed flag; it defaults
    to E_max.
    """
    if not E_max > 0:
        raise SetupError(f"E_max must be positive, got {E_max!r}")
    config = config if config is not None else PhysicalConfig()
    geometry = geometry if geometry is not None else CompactGeometry()
    energy = E_max if energy is None else energy
    scale = config.kinetic_scale
    bounds = [_max_index(E_max, R, config) for R in geometry.radii]

    found = []

    def descend(prefix, budget):
        i = len(prefix)
        if i == geometry.d:
            modes = tuple(prefix)
            e = compact_energy(modes, config, geometry)
            if e <= E_max:
                found.append((e, modes))
            return
        step = scale / geometry.radii[i] ** 2
        n = 0
        # budget check is a prune only; the exact filter is applied at the leaf
        while n <= bounds[i] and step * n * n <= budget + 1e-12 * E_max:
            descend(prefix + [n], budget - step * n * n)
            n += 1

    descend([], E_max)
    found.sort()
    return [SpectrumLevel(modes=m, compact_energy=e, degeneracy=degeneracy(m), open=energy > e)
            for e, m in found]


def check_periodicity(n_value: float, tol: float = 1e-9, samples: int = 64) -> bool:
    """Whether cos(k phi) and sin(k phi) with k = n_value repeat after 2 pi."""
    if not tol > 0:
        raise ValueError(f"tolerance must be positive, got {tol!r}")
    phi = np.linspace(0.0, 2.0 * np.pi, samples, endpoint=False)
    k = float(n_value)
    mismatch = max(
        np.max(np.abs(np.cos(k * (phi + 2 * np.pi)) - np.cos(k * phi))),
        np.max(np.abs(np.sin(k * (phi + 2 * np.pi)) - np.sin(k * phi))),
    )
    return bool(mismatch <= tol)


def channel_table(levels: Sequence[SpectrumLevel], energy, config=None, geometry=None):
    """(level, k1 or kappa) pairs at beam energy ``energy``."""
    config = config if config is not None else PhysicalConfig()
    geometry = geometry if geometry is not None else CompactGeometry()
    rows = []
    for level in levels:
        k = axial_wavenumber(energy, level.modes, config, geometry)
        rows.append((level, k.kappa if isinstance(k, ClosedChannel) else k))
    return rows
