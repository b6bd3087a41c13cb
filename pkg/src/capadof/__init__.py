"""Singular spectrum and spatial degrees of freedom of continuous-aperture
line-of-sight channels, via quadrature discretization of the channel kernel."""

from .capacity import WaterfillResult, water_fill
from .errors import ConfigError, DomainError, NumericalError
from .geometry import (
    ApertureSpec,
    EulerAngles,
    LinkGeometry,
    RotationMatrix,
    projected_submatrix_det,
    rotation_from_euler,
    rx_point_to_global,
)
from .kernels import (
    FREE_SPACE_IMPEDANCE,
    SPEED_OF_LIGHT,
    KernelKind,
    Medium,
    bilinear_phase_kernel,
    exact_distance,
    fresnel_distance,
    kernel_value,
    unimodular_factors,
)
from .landau import DofReport, analyze_polarization, count_edof, dof_closed_form
from .nystrom import (
    DiscretizedOperator,
    QuadratureGrid,
    SingularSpectrum,
    build_operator,
    gauss_legendre_grid,
    refine_until_converged,
    singular_spectrum,
)

__version__ = "0.1.0"

__all__ = [
    "ApertureSpec",
    "ConfigError",
    "DiscretizedOperator",
    "DofReport",
    "DomainError",
    "EulerAngles",
    "FREE_SPACE_IMPEDANCE",
    "KernelKind",
    "LinkGeometry",
    "Medium",
    "NumericalError",
    "QuadratureGrid",
    "RotationMatrix",
    "SingularSpectrum",
    "SPEED_OF_LIGHT",
    "WaterfillResult",
    "analyze_polarization",
    "bilinear_phase_kernel",
    "build_operator",
    "count_edof",
    "dof_closed_form",
    "exact_distance",
    "fresnel_distance",
    "gauss_legendre_grid",
    "kernel_value",
    "projected_submatrix_det",
    "refine_until_converged",
    "rotation_from_euler",
    "rx_point_to_global",
    "singular_spectrum",
    "unimodular_factors",
    "water_fill",
]
