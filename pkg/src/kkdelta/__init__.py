"""Delta-potential scattering on a cylinder with compact extra dimensions."""
from .core import (
    CompactGeometry,
    GeometryDimensionError,
    NonPropagatingError,
    PhysicalConfig,
    ScatteringAmplitudes,
    ScatteringSetup,
    SetupError,
    ZeroAngularAmplitudeError,
    load_config,
    make_setup,
)
from .scattering import (
    boundary_residuals,
    coefficients,
    reflection_amplitude,
    sweep_coefficients,
    transmission_amplitude,
)
from .currents import (
    CurrentField,
    CurrentVector,
    SurfacePoint,
    angular_factor,
    coefficients_from_currents,
    current_closed_form,
    current_field,
    current_numerical,
    wavefunction,
)
from .spectrum import (
    ClosedChannel,
    SpectrumLevel,
    axial_wavenumber,
    check_periodicity,
    compact_energy,
    enumerate_levels,
    total_energy,
)
from .oracle import BarrierSpec, ConvergenceError, barrier_amplitudes, delta_limit_study
from .inference import (
    AssignmentFailure,
    InferenceError,
    MeasuredLevel,
    RadiusFit,
    RankDeficiencyError,
    assign_modes,
    fit_radius,
    fit_torus,
    fit_torus_radii,
)

__version__ = "0.1.0"
