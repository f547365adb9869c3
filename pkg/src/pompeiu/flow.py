"""Boundary antigradient flow of the pair energy.

Each step moves the boundary with normal velocity v = -g, where g = 2u is
the shape-gradient density, converts the normal speed to a radial speed

    dr/dt (theta) = v(theta) * sqrt(r^2 + r'^2) / r,

takes an explicit Euler step, refits the radius to a fixed number of
harmonics (which doubles as curvature smoothing), and optionally recenters
the domain at its mass center.  A backtracking line search halves the step
until the energy strictly decreases, so recorded trajectories are strictly
monotone in energy.  Step size grows again after clean steps, up to dt_max.

For Bessel-type kernels the energy along the flow is evaluated by the
frequency-side route (boundary work only); other kernels fall back to the
interior pair sum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .energy import _pair_sum, fourier_slice
from .geometry import (
    DegenerateShapeError,
    StarShape,
    area,
    centroid,
    fit_radius,
    interior_quadrature,
    sample_boundary,
)
from .kernel import BesselKernel, RadialKernel
from .shape_calculus import GradientDensity, NormalVelocity, gradient_density

_MAX_HALVINGS = 30


class FlowError(RuntimeError):
    """Base class for flow failures; may carry a partial trajectory."""

    def __init__(self, message, trajectory=None, diagnostics=None):
        super().__init__(message)
        self.trajectory = trajectory
        self.diagnostics = diagnostics


class FlowDegeneracyError(FlowError):
    """The flow state left the representable star-shaped class."""


class FlowStallError(FlowError):
    """No energy decrease after the maximum number of step halvings."""


@dataclass(frozen=True)
class FlowOptions:
    """Stepper options: step control, tolerances, resolutions.

    ``k_fit`` is the number of harmonics kept by the per-step refit;
    ``n_boundary``/``m_directions`` drive the spectral energy and gradient
    grids, ``n_theta``/``n_rho`` the interior rule.
    """

    dt0: float = 0.02
    dt_max: float = 1.0
    max_steps: int = 20000
    grad_tol: float = 1e-8
    energy_tol: float = 1e-6
    recenter: bool = True
    k_fit: int = 32
    n_boundary: int = 256
    n_theta: int = 128
    n_rho: int = 16
    m_directions: int = 256

    def __post_init__(self):
        if self.dt0 <= 0 or self.dt_max <= 0:
            raise ValueError("step sizes must be positive")
        if self.grad_tol <= 0 or self.energy_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.max_steps < 1:
            raise ValueError("max_steps must be >= 1")
        if not (1 <= self.k_fit <= 128):
            raise ValueError("k_fit must be in [1, 128]")
        if self.n_boundary < max(16, 2 * self.k_fit + 1):
            raise ValueError("n_boundary too small for the requested refit order")


@dataclass(frozen=True)
class StepDiagnostics:
    accepted: bool
    converged: bool
    dt_used: float
    n_halvings: int
    f_old: float
    f_new: float
    grad_sup: float


@dataclass(frozen=True)
class FlowRecord:
    t: float
    shape: StarShape
    energy: float
    grad_sup: float
    centroid: np.ndarray
    area: float


@dataclass
class FlowTrajectory:
    """Accepted-step history of a flow run; energies strictly decrease."""

    records: list[FlowRecord] = field(default_factory=list)
    reason: str = ""  # "grad_tol" | "energy_tol" | "max_steps"

    @property
    def final_shape(self) -> StarShape:
        return self.records[-1].shape

    @property
    def energies(self) -> np.ndarray:
        return np.array([r.energy for r in self.records])

    @property
    def times(self) -> np.ndarray:
        return np.array([r.t for r in self.records])

    def __len__(self) -> int:
        return len(self.records)


def energy_value(shape: StarShape, kernel: RadialKernel, opts: FlowOptions) -> float:
    """Flow-side energy: spectral for planar Bessel kernels, else pair sum."""
    if isinstance(kernel, BesselKernel) and kernel.dim == 2:
        grid = sample_boundary(shape, opts.n_boundary)
        sl = fourier_slice(shape, kernel.lam, opts.m_directions, grid)
        return math.fsum(np.abs(sl.values) ** 2) / opts.m_directions
    quad = interior_quadrature(shape, opts.n_theta, opts.n_rho)
    return _pair_sum(kernel, quad.nodes, quad.weights)


def normal_deform(shape: StarShape, v: NormalVelocity, t: float, k_fit: int) -> StarShape:
    """Shape moved for time t with normal velocity v, refit to k_fit harmonics.

    Raises DegenerateShapeError if the updated radius is nonpositive
    anywhere or the refit leaves the star-shaped class.
    """
    theta = v.grid.theta
    r, dr, _ = shape.radius_derivatives(theta)
    speed = np.hypot(r, dr)
    r_new = r + t * v.values * speed / r
    if np.any(r_new <= 0.0):
        raise DegenerateShapeError("radius update crossed zero")
    points = shape.center + np.stack(
        [r_new * np.cos(theta), r_new * np.sin(theta)], axis=-1)
    try:
        new_shape, _ = fit_radius(points, shape.center, k_fit)
    except ValueError as exc:
        raise DegenerateShapeError(str(exc)) from exc
    return new_shape


def _recenter(shape: StarShape, opts: FlowOptions) -> StarShape:
    c = centroid(shape, n_theta=max(128, opts.n_theta), n_rho=8)
    n = max(opts.n_boundary, 4 * opts.k_fit)
    theta = np.linspace(0.0, 2.0 * np.pi, n, endpoint=False)
    points = shape.boundary_points(theta) - c
    try:
        new_shape, _ = fit_radius(points, (0.0, 0.0), opts.k_fit)
    except ValueError as exc:
        raise DegenerateShapeError(str(exc)) from exc
    return new_shape


def flow_step(shape: StarShape, kernel: RadialKernel, dt: float, opts: FlowOptions,
              _state=None):
    """One antigradient step with backtracking.

    Returns (new_shape, StepDiagnostics).  If the gradient or the energy is
    already below its tolerance the shape is returned unchanged with
    ``converged=True``.  Raises FlowStallError when 30 halvings of dt fail
    to produce a valid shape with strictly smaller energy.
    """
    if _state is None:
        grid = sample_boundary(shape, opts.n_boundary)
        quad = interior_quadrature(shape, opts.n_theta, opts.n_rho)
        g = gradient_density(shape, kernel, grid, quad)
        f_old = energy_value(shape, kernel, opts)
    else:
        g, f_old = _state
        grid = g.grid

    if g.sup_norm < opts.grad_tol or f_old < opts.energy_tol:
        diag = StepDiagnostics(accepted=False, converged=True, dt_used=0.0,
                               n_halvings=0, f_old=f_old, f_new=f_old,
                               grad_sup=g.sup_norm)
        return shape, diag

    v = NormalVelocity(grid=grid, values=-g.values)
    dt_try = float(dt)
    for halvings in range(_MAX_HALVINGS + 1):
        try:
            candidate = normal_deform(shape, v, dt_try, opts.k_fit)
            if opts.recenter:
                candidate = _recenter(candidate, opts)
        except DegenerateShapeError:
            dt_try *= 0.5
            continue
        f_new = energy_value(candidate, kernel, opts)
        if math.isfinite(f_new) and f_new < f_old:
            diag = StepDiagnostics(accepted=True, converged=False, dt_used=dt_try,
                                   n_halvings=halvings, f_old=f_old, f_new=f_new,
                                   grad_sup=g.sup_norm)
            return candidate, diag
        dt_try *= 0.5
    diag = StepDiagnostics(accepted=False, converged=False, dt_used=dt_try,
                           n_halvings=_MAX_HALVINGS, f_old=f_old, f_new=f_old,
                           grad_sup=g.sup_norm)
    raise FlowStallError(
        f"no descent after {_MAX_HALVINGS} step halvings (F = {f_old:.6e}, "
        f"grad_sup = {g.sup_norm:.3e})", diagnostics=diag)


def _make_record(t: float, shape: StarShape, f: float, grad_sup: float) -> FlowRecord:
    return FlowRecord(t=t, shape=shape, energy=f, grad_sup=grad_sup,
                      centroid=centroid(shape), area=area(shape))


def run_flow(shape0: StarShape, kernel: RadialKernel, opts: FlowOptions) -> FlowTrajectory:
    """Iterate flow_step until a tolerance is met or max_steps is exhausted.

    Every accepted step is recorded.  Flow errors propagate with the
    partial trajectory attached to the exception.
    """
    shape = _recenter(shape0, opts) if opts.recenter else shape0
    traj = FlowTrajectory()
    grid = sample_boundary(shape, opts.n_boundary)
    quad = interior_quadrature(shape, opts.n_theta, opts.n_rho)
    g = gradient_density(shape, kernel, grid, quad)
    f = energy_value(shape, kernel, opts)
    traj.records.append(_make_record(0.0, shape, f, g.sup_norm))

    t = 0.0
    dt = opts.dt0
    for _ in range(opts.max_steps):
        if g.sup_norm < opts.grad_tol:
            traj.reason = "grad_tol"
            return traj
        if f < opts.energy_tol:
            traj.reason = "energy_tol"
            return traj
        try:
            shape, diag = flow_step(shape, kernel, dt, opts, _state=(g, f))
        except FlowError as exc:
            exc.trajectory = traj
            raise
        t += diag.dt_used
        f = diag.f_new
        grid = sample_boundary(shape, opts.n_boundary)
        quad = interior_quadrature(shape, opts.n_theta, opts.n_rho)
        g = gradient_density(shape, kernel, grid, quad)
        traj.records.append(_make_record(t, shape, f, g.sup_norm))
        dt = min(2.0 * diag.dt_used, opts.dt_max)
    traj.reason = "max_steps"
    return traj


def write_trajectory_csv(traj: FlowTrajectory, path) -> None:
    """Write the trajectory as CSV: t, F, grad_sup, centroid, area, coefficients."""
    k = max(r.shape.n_harmonics for r in traj.records) if traj.records else 0
    header = ["t", "F", "grad_sup", "centroid_x", "centroid_y", "area", "a0"]
    header += [f"ak_{j}" for j in range(1, k + 1)]
    header += [f"bk_{j}" for j in range(1, k + 1)]
    lines = [",".join(header)]
    for r in traj.records:
        ak = np.zeros(k)
        bk = np.zeros(k)
        ak[: r.shape.n_harmonics] = r.shape.ak
        bk[: r.shape.n_harmonics] = r.shape.bk
        row = [r.t, r.energy, r.grad_sup, r.centroid[0], r.centroid[1], r.area,
               r.shape.a0, *ak, *bk]
        lines.append(",".join(repr(float(v)) for v in row))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
