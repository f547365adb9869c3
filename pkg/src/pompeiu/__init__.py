"""Shape optimization of pairwise domain energies for radial kernels.

The library evaluates the energy of a bounded planar domain under a
positive-definite radial kernel, its first and second shape derivatives,
runs the boundary antigradient flow toward zero-energy shapes, and scans
for spheres in frequency space on which the domain's indicator transform
vanishes (failure of the Pompeiu property).
"""

from .specfun import bessel_j, bessel_j_derivative, bessel_zero
from .geometry import (
    DegenerateShapeError,
    StarShape,
    BoundaryGrid,
    InteriorQuadrature,
    sample_boundary,
    interior_quadrature,
    area,
    centroid,
    translate,
    rotate,
    scale,
    fit_radius,
    disk,
    ellipse,
    rounded_square,
    shape_from_radius,
)
from .kernel import (
    RadialKernel,
    BesselKernel,
    GaussianKernel,
    ConstantKernel,
    BochnerMeasure,
    kernel_from_dict,
)
from .energy import (
    EnergyReport,
    FourierSlice,
    potential,
    fourier_indicator,
    fourier_slice,
    energy_spatial,
    energy_spectral,
)
from .shape_calculus import (
    NormalVelocity,
    GradientDensity,
    HessianSpectrum,
    SpectrumEntry,
    gradient_density,
    criticality_residual,
    directional_derivative,
    hessian_form,
    ball_mode_spectrum,
    velocity_from_function,
    cosine_mode,
    sine_mode,
)
from .flow import (
    FlowError,
    FlowDegeneracyError,
    FlowStallError,
    FlowOptions,
    FlowRecord,
    FlowTrajectory,
    StepDiagnostics,
    normal_deform,
    flow_step,
    run_flow,
    energy_value,
    write_trajectory_csv,
)
from .scan import PompeiuScan, scan, detects_failure, scan_summary, write_scan_csv

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
