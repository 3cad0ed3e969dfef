"""Square-barrier scattering used as an independent check of the delta formulas.

A barrier of height V0 on [-a/2, a/2] with V0*a = lambda tends to lambda*delta(z)
as a -> 0. Its amplitudes come from exact interface matching, so the width is
the only approximation parameter. Amplitudes are referenced to z = 0, matching
the delta convention psi = e^{ikz} + r e^{-ikz} (z < 0), t e^{ikz} (z > 0).
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .core import PhysicalConfig, SetupError, make_setup
from .scattering import coefficients

# beyond this kappa*a the hyperbolic propagator is rescaled by exp(kappa*a)
_SCALE_THRESHOLD = 300.0


class ConvergenceError(RuntimeError):
    pass


@dataclass(frozen=True)
class BarrierSpec:
    height: float
    width: float

    def __post_init__(self):
        width = float(self.width)
        height = float(self.height)
        if not math.isfinite(width) or width <= 0:
            raise SetupError(f"barrier width must be positive, got {width!r}")
        if not math.isfinite(height):
            raise SetupError(f"barrier height must be finite, got {height!r}")
        object.__setattr__(self, "width", width)
        object.__setattr__(self, "height", height)

    @property
    def area(self) -> float:
        return self.height * self.width

    @classmethod
    def from_area(cls, area: float, width: float) -> "BarrierSpec":
        return cls(height=area / width, width=width)


def _propagator(q2: float, a: float) -> tuple[np.ndarray, float]:
    """Transfer matrix of (psi, psi') across a flat region of width a.

    psi'' = -q2 psi inside. Returns (M / s, log s): for deep tunnelling the
    matrix is divided by s = exp(kappa a) to keep it finite.
    """
    if q2 > 0:
        q = math.sqrt(q2)
        c, s = math.cos(q * a), math.sin(q * a)
        return np.array([[c, s / q], [-q * s, c]]), 0.0
    if q2 < 0:
        kappa = math.sqrt(-q2)
        x = kappa * a
        if x < _SCALE_THRESHOLD:
            ch, sh = math.cosh(x), math.sinh(x)
            return np.array([[ch, sh / kappa], [kappa * sh, ch]]), 0.0
        # cosh(x)/e^x and sinh(x)/e^x
        e2 = math.exp(-2.0 * x)
        ch, sh = 0.5 * (1.0 + e2), 0.5 * (1.0 - e2)
        return np.array([[ch, sh / kappa], [kappa * sh, ch]]), x
    return np.array([[1.0, a], [0.0, 1.0]]), 0.0


def barrier_amplitudes(k1: float, barrier: BarrierSpec, config: PhysicalConfig | None = None):
    """Exact (r, t) for a plane wave of wavenumber k1 hitting the barrier."""
    config = config if config is not None else PhysicalConfig()
    if not k1 > 0:
        raise SetupError(f"non-propagating incident wave: k1 must be > 0, got {k1!r}")
    k = float(k1)
    a = barrier.width
    q2 = k * k - 2.0 * config.mass * barrier.height / config.hbar**2
    M, log_scale = _propagator(q2, a)

    # Start from a unit transmitted wave at the right edge and carry
    # (psi, psi') back to the left edge; M has unit determinant, so its
    # inverse is the adjugate. Backward propagation only grows the incident
    # component, which keeps deep tunnelling free of cancellation.
    zl, zr = -0.5 * a, 0.5 * a
    right = np.array([cmath.exp(1j * k * zr), 1j * k * cmath.exp(1j * k * zr)])
    inverse = np.array([[M[1, 1], -M[0, 1]], [-M[1, 0], M[0, 0]]])
    psi, dpsi = inverse @ right
    incident = 0.5 * (psi + dpsi / (1j * k)) * cmath.exp(-1j * k * zl)
    reflected = 0.5 * (psi - dpsi / (1j * k)) * cmath.exp(1j * k * zl)
    r = reflected / incident
    # the rescaled inverse underestimates the incident amplitude by exp(-log_scale)
    t = cmath.exp(-log_scale) / incident if log_scale < 745.0 else 0j
    return complex(r), t


@dataclass(frozen=True)
class ConvergenceRow:
    a: float
    V0: float
    R_barrier: float
    T_barrier: float
    R_delta: float
    T_delta: float
    err: float


def delta_limit_study(k1, lam, widths, config=None, threshold=None,
                      monotone_atol=1e-14) -> list[ConvergenceRow]:
    """Barrier amplitudes at shrinking widths compared against the delta limit.

    ``err`` is |r_barrier - r_delta| + |t_barrier - t_delta|. Raises
    ConvergenceError if the error grows down the table (beyond ``monotone_atol``)
    or if the last error exceeds ``threshold``.
    """
    config = config if config is not None else PhysicalConfig()
    widths = [float(a) for a in widths]
    if not widths:
        raise SetupError("width list is empty")
    if any(a <= 0 for a in widths):
        raise SetupError("widths must be positive")
    if any(b >= a for a, b in zip(widths, widths[1:])):
        raise SetupError("widths must be strictly decreasing")

    exact = coefficients(make_setup(lam, k1, config=config))
    rows = []
    for a in widths:
        barrier = BarrierSpec.from_area(lam, a)
        r, t = barrier_amplitudes(k1, barrier, config)
        rows.append(ConvergenceRow(
            a=a,
            V0=barrier.height,
            R_barrier=abs(r) ** 2,
            T_barrier=abs(t) ** 2,
            R_delta=exact.R1,
            T_delta=exact.T1,
            err=abs(r - exact.r) + abs(t - exact.t),
        ))
    for prev, row in zip(rows, rows[1:]):
        if row.err > prev.err + monotone_atol:
            raise ConvergenceError(
                f"error grew from {prev.err:.3e} (a={prev.a:g}) to {row.err:.3e} (a={row.a:g})"
            )
    if threshold is not None and rows[-1].err > threshold:
        raise ConvergenceError(f"final error {rows[-1].err:.3e} exceeds threshold {threshold:.3e}")
    return rows
