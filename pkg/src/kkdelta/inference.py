"""Recover compactification radii from measured energy offsets.

Each compact circle contributes c_i n_i^2 with c_i = hbar^2 / (2 m R_i^2), so a
ladder of offsets fixes the c_i by least squares through the origin and the
radii follow as R_i = hbar / sqrt(2 m c_i). Offsets are measured from the
n = 0 continuum edge; subtracting the axial kinetic energy is the caller's job.
"""
from __future__ import annotations

import math
import numbers
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .core import PhysicalConfig

MAX_START_MODE = 3


class InferenceError(ValueError):
    pass


class RankDeficiencyError(InferenceError):
    def __init__(self, message, directions):
        super().__init__(message)
        self.directions = directions


@dataclass(frozen=True)
class MeasuredLevel:
    n: int
    delta_E: float
    sigma: float = 0.0

    def __post_init__(self):
        n = self.n
        if isinstance(n, bool) or not isinstance(n, numbers.Integral) or n < 0:
            raise InferenceError(f"mode index must be a nonnegative integer, got {n!r}")
        delta_E, sigma = float(self.delta_E), float(self.sigma)
        if not math.isfinite(delta_E):
            raise InferenceError(f"energy offset must be finite, got {delta_E!r}")
        if n > 0 and delta_E <= 0:
            raise InferenceError(
                f"inconsistent ladder: offset {delta_E!r} for mode n={n} must be positive"
            )
        if not math.isfinite(sigma) or sigma < 0:
            raise InferenceError(f"uncertainty must be nonnegative, got {sigma!r}")
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "delta_E", delta_E)
        object.__setattr__(self, "sigma", sigma)


@dataclass(frozen=True)
class RadiusFit:
    radius: float
    curvature_coeff: float
    rms_residual: float
    intercept: float = 0.0


@dataclass(frozen=True)
class TorusFit:
    radii: tuple[float, ...]
    coeffs: tuple[float, ...]
    rms_residual: float


@dataclass(frozen=True)
class AssignmentFailure:
    """No n_start <= 3 explains the offsets as c n^2 on consecutive integers."""

    offsets: tuple[float, ...]
    tol_rel: float
    attempts: tuple[str, ...] = field(default_factory=tuple)

    def __str__(self):
        return "no consistent n^2 ladder: " + "; ".join(self.attempts)


def _weights(sigmas) -> np.ndarray:
    sigmas = np.asarray(sigmas, dtype=float)
    if np.all(sigmas == 0):
        return np.ones_like(sigmas)
    if np.any(sigmas == 0):
        raise InferenceError("uncertainties must be all zero (exact data) or all positive")
    return 1.0 / sigmas**2


def radius_from_coeff(c: float, config: PhysicalConfig) -> float:
    return config.hbar / math.sqrt(2.0 * config.mass * c)


def fit_radius(levels: Sequence[MeasuredLevel], config: PhysicalConfig | None = None,
               intercept: bool = False) -> RadiusFit:
    """Weighted least-squares fit of delta_E = c n^2 (optionally + b).

    Weights are 1/sigma^2, or uniform when every sigma is zero. The intercept
    is a diagnostic only; with it off the fit goes through the origin.
    """
    config = config if config is not None else PhysicalConfig()
    if not levels:
        raise InferenceError("no levels to fit")
    n2 = np.array([lv.n**2 for lv in levels], dtype=float)
    dE = np.array([lv.delta_E for lv in levels], dtype=float)
    if not np.any(n2 > 0):
        raise InferenceError("all levels have mode n = 0; the radius is unconstrained")
    w = _weights([lv.sigma for lv in levels])

    if intercept:
        if len(np.unique(n2)) < 2:
            raise InferenceError("intercept fit needs at least two distinct modes")
        sw = np.sqrt(w)
        A = np.column_stack([n2, np.ones_like(n2)]) * sw[:, None]
        (c, b), *_ = np.linalg.lstsq(A, dE * sw, rcond=None)
    else:
        c = float(np.sum(w * n2 * dE) / np.sum(w * n2 * n2))
        b = 0.0
    if not c > 0:
        raise InferenceError(f"inconsistent ladder: fitted coefficient {c!r} is not positive")
    resid = dE - (c * n2 + b)
    return RadiusFit(
        radius=radius_from_coeff(c, config),
        curvature_coeff=float(c),
        rms_residual=float(np.sqrt(np.mean(resid**2))),
        intercept=float(b),
    )


def assign_modes(energy_offsets, tol_rel: float = 0.05, sigmas=None):
    """Label sorted offsets with consecutive modes n_start, n_start+1, ...

    The smallest offset is tried as n_start = 1, 2, 3 in turn, and every offset
    must match c n^2 within ``tol_rel``. Returns MeasuredLevel objects for the
    first hypothesis that works, otherwise an AssignmentFailure.
    """
    offsets = [float(x) for x in energy_offsets]
    if not offsets:
        raise InferenceError("no energy offsets given")
    if any(x <= 0 for x in offsets):
        raise InferenceError("inconsistent ladder: energy offsets must be positive")
    if any(b < a for a, b in zip(offsets, offsets[1:])):
        raise InferenceError("energy offsets must be sorted ascending")
    if not 0 < tol_rel < 0.5:
        raise InferenceError(f"tol_rel must lie in (0, 0.5), got {tol_rel!r}")
    if sigmas is None:
        sigmas = [0.0] * len(offsets)
    if len(sigmas) != len(offsets):
        raise InferenceError("sigmas and offsets differ in length")

    attempts = []
    for n_start in range(1, MAX_START_MODE + 1):
        c = offsets[0] / n_start**2
        for j, x in enumerate(offsets):
            n = n_start + j
            expected = c * n * n
            if abs(x / expected - 1.0) > tol_rel:
                attempts.append(
                    f"n_start={n_start}: offset {x:g} at position {j} expected {expected:g} (n={n})"
                )
                break
        else:
            return [MeasuredLevel(n_start + j, x, s) for j, (x, s) in enumerate(zip(offsets, sigmas))]
    return AssignmentFailure(tuple(offsets), tol_rel, tuple(attempts))


def _null_directions(A: np.ndarray, rank: int) -> list[list[float]]:
    _, _, vt = np.linalg.svd(A)
    return [list(map(float, v)) for v in vt[rank:]]


def fit_torus(levels, config: PhysicalConfig | None = None, d: int | None = None) -> TorusFit:
    """Least squares for c_i in delta_E = sum_i c_i n_i^2 over several circles.

    ``levels`` holds (modes, delta_E, sigma) triples.
    """
    config = config if config is not None else PhysicalConfig()
    if not levels:
        raise InferenceError("no levels to fit")
    modes = [tuple(int(n) for n in m) for m, _, _ in levels]
    d = len(modes[0]) if d is None else d
    if any(len(m) != d for m in modes):
        raise InferenceError(f"every mode vector must have length d = {d}")
    X = np.array(modes, dtype=float) ** 2
    dE = np.array([float(e) for _, e, _ in levels])
    w = _weights([s for _, _, s in levels])

    sw = np.sqrt(w)
    A = X * sw[:, None]
    rank = np.linalg.matrix_rank(A)
    if rank < d:
        dirs = _null_directions(A, rank)
        raise RankDeficiencyError(
            f"design matrix has rank {rank} < {d}; coefficients not separable along {dirs}", dirs
        )
    c, *_ = np.linalg.lstsq(A, dE * sw, rcond=None)
    if np.any(c <= 0):
        raise InferenceError(f"inconsistent ladder: fitted coefficients {c.tolist()} not all positive")
    resid = dE - X @ c
    return TorusFit(
        radii=tuple(radius_from_coeff(float(ci), config) for ci in c),
        coeffs=tuple(float(ci) for ci in c),
        rms_residual=float(np.sqrt(np.mean(resid**2))),
    )


def fit_torus_radii(levels, config: PhysicalConfig | None = None, d: int | None = None) -> list[float]:
    return list(fit_torus(levels, config, d).radii)
