"""First and second shape derivatives of the pair energy.

Moving the boundary with a velocity field V changes the energy at rate

    dF/dt = 2 * contour-int  u(x) <V, eta>(x) ds,      u = interior potential,

so the boundary density g = 2u is the shape gradient against normal
perturbations.  At a zero-energy critical shape the second derivative
collapses to the boundary-boundary quadratic form

    Q(v, w) = 2 * double contour-int f(|x - y|) v(x) w(y) ds_x ds_y,

whose restriction to the disk diagonalizes over the angular modes
cos(k theta), sin(k theta) with closed-form values in Bessel functions
(Graf's addition theorem); the only flat directions at a critical disk are
the k = 1 modes, i.e. the normal traces of translations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import specfun
from .energy import potential
from .geometry import BoundaryGrid, InteriorQuadrature, StarShape, disk, sample_boundary
from .kernel import BesselKernel, RadialKernel


@dataclass(frozen=True)
class NormalVelocity:
    """Normal velocity samples v_j = <V, eta>(x_j) on a boundary grid."""

    grid: BoundaryGrid
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != (self.grid.n_nodes,):
            raise ValueError(
                f"velocity length {values.shape} does not match grid ({self.grid.n_nodes},)")
        if not np.all(np.isfinite(values)):
            raise ValueError("velocity values must be finite")
        values = values.copy()
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @property
    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.values)))


def velocity_from_function(grid: BoundaryGrid, fn) -> NormalVelocity:
    """Sample a function of the boundary angle as a NormalVelocity."""
    return NormalVelocity(grid=grid, values=np.asarray(fn(grid.theta), dtype=float))


def cosine_mode(grid: BoundaryGrid, k: int) -> NormalVelocity:
    return NormalVelocity(grid=grid, values=np.cos(k * grid.theta))


def sine_mode(grid: BoundaryGrid, k: int) -> NormalVelocity:
    return NormalVelocity(grid=grid, values=np.sin(k * grid.theta))


@dataclass(frozen=True)
class GradientDensity:
    """Shape-gradient boundary density g_j = 2 * potential(x_j)."""

    grid: BoundaryGrid
    values: np.ndarray
    sup_norm: float

    def __post_init__(self):
        self.values.flags.writeable = False


def gradient_density(shape: StarShape, kernel: RadialKernel, grid: BoundaryGrid,
                     quad: InteriorQuadrature) -> GradientDensity:
    """Evaluate g = 2 * Int_Omega f(|x_j - y|) dy on the boundary nodes."""
    u = potential(shape, kernel, grid.points, quad)
    g = 2.0 * u
    return GradientDensity(grid=grid, values=g, sup_norm=float(np.max(np.abs(g))))


def criticality_residual(shape: StarShape, kernel: RadialKernel, grid: BoundaryGrid,
                         quad: InteriorQuadrature) -> float:
    """sup over boundary nodes of |potential|; zero iff the shape is critical
    with zero boundary constant."""
    u = potential(shape, kernel, grid.points, quad)
    return float(np.max(np.abs(u)))


def directional_derivative(shape: StarShape, kernel: RadialKernel, v: NormalVelocity,
                           quad: InteriorQuadrature) -> float:
    """dF/dt in the direction of normal velocity v: sum_j g_j v_j w_j."""
    g = gradient_density(shape, kernel, v.grid, quad)
    return float(np.sum(g.values * v.values * v.grid.weights))


def _same_grid(a: BoundaryGrid, b: BoundaryGrid) -> bool:
    return a is b or (a.n_nodes == b.n_nodes and np.array_equal(a.points, b.points))


def hessian_form(shape: StarShape, kernel: RadialKernel, v: NormalVelocity,
                 w: NormalVelocity) -> float:
    """Second-derivative quadratic form at a zero-energy critical shape.

    Q(v, w) = 2 * sum_{j,j'} f(|x_j - x_{j'}|) v_j w_{j'} ws_j ws_{j'}
    (ws = arclength weights).  The reduction to this boundary form holds
    when the shape is critical with zero energy; use criticality_residual
    to check before interpreting the value as a second derivative.
    """
    if not _same_grid(v.grid, w.grid):
        raise ValueError("velocities live on different boundary grids")
    grid = v.grid
    diff = grid.points[:, None, :] - grid.points[None, :, :]
    r2 = diff[:, :, 0] ** 2 + diff[:, :, 1] ** 2
    fmat = kernel.eval_sq(r2)
    a = v.values * grid.weights
    b = w.values * grid.weights
    return 2.0 * float(a @ (fmat @ b))


@dataclass(frozen=True)
class SpectrumEntry:
    """One angular mode of the disk Hessian: measured and closed-form value."""

    k: int
    parity: str  # "cos" | "sin"
    value: float
    closed_form: float


@dataclass(frozen=True)
class HessianSpectrum:
    """Mode-by-mode Hessian values on a disk of radius R, kernel frequency lam.

    ``critical`` marks |J_1(lam R)| < 1e-6, i.e. the disk carries (numerically)
    zero energy and the quadratic form is a genuine second derivative; when
    False the entries are still the boundary form but lack that meaning.
    Closed forms: Q_0 = 2 (2 pi R)^2 J_0(lam R)^2 and
    Q_k = 4 pi^2 R^2 J_k(lam R)^2 for k >= 1 (cos and sin alike).
    """

    radius: float
    lam: float
    entries: tuple[SpectrumEntry, ...]
    critical: bool

    def value(self, k: int, parity: str = "cos") -> float:
        for e in self.entries:
            if e.k == k and e.parity == parity:
                return e.value
        raise KeyError(f"mode (k={k}, {parity}) not in spectrum")


def ball_mode_spectrum(radius: float, lam: float, k_max: int, n: int) -> HessianSpectrum:
    """Hessian values on the centered disk for modes cos/sin(k theta), k <= k_max.

    Requires k_max <= n/4 so the trapezoid rule resolves the highest mode.
    """
    if radius <= 0 or lam <= 0:
        raise ValueError("radius and lam must be positive")
    if k_max > n // 4:
        raise ValueError(f"k_max={k_max} too large for n={n} boundary nodes")
    shape = disk(radius)
    grid = sample_boundary(shape, n)
    kernel = BesselKernel(lam=lam, dim=2)
    entries = []
    x = lam * radius
    for k in range(0, k_max + 1):
        if k == 0:
            closed = 2.0 * (2.0 * np.pi * radius) ** 2 * specfun.bessel_j(0, x) ** 2
        else:
            closed = 4.0 * np.pi**2 * radius**2 * specfun.bessel_j(k, x) ** 2
        parities = ("cos",) if k == 0 else ("cos", "sin")
        for parity in parities:
            vel = cosine_mode(grid, k) if parity == "cos" else sine_mode(grid, k)
            q = hessian_form(shape, kernel, vel, vel)
            entries.append(SpectrumEntry(k=k, parity=parity, value=q, closed_form=closed))
    critical = abs(specfun.bessel_j(1, x)) < 1e-6
    return HessianSpectrum(radius=float(radius), lam=float(lam),
                           entries=tuple(entries), critical=critical)
