"""Scan for frequency circles on which the indicator transform vanishes.

A bounded domain fails the Pompeiu property exactly when chi_hat, the
Fourier transform of its indicator, vanishes on an entire circle
|xi| = lam.  The scanner tracks

    M(lam) = max over directions of |chi_hat(lam * omega(phi))|,

a pointwise certificate for such vanishing, over a frequency window; the
directional max and the minimizing lam are refined by golden-section so
the result is invariant under rigid motions of the domain.  The companion
round trip is energy_spectral: M(lam*) ~ 0 forces the Bessel-kernel energy
at lam* to ~0 and conversely.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .energy import _grid_area, fourier_indicator
from .geometry import BoundaryGrid, StarShape

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def _golden_min(f, a, b, tol, max_iter=120):
    # golden-section minimum of a unimodal f on [a, b]; returns (x, f(x))
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    it = 0
    while (b - a) > tol and it < max_iter:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
        it += 1
    return (c, fc) if fc < fd else (d, fd)


@dataclass(frozen=True)
class PompeiuScan:
    """Directional-max profile M(lam) over a frequency window.

    ``argmin_lambda``/``min_value`` are the golden-section refinement of
    the grid minimizer; ``area`` is the domain area (thresholds for
    failure detection scale with it).
    """

    lambdas: np.ndarray
    values: np.ndarray
    argmin_lambda: float
    min_value: float
    area: float

    def __post_init__(self):
        self.lambdas.flags.writeable = False
        self.values.flags.writeable = False


def _abs_transform(shape, grid, lam, phi):
    xi = np.array([lam * math.cos(phi), lam * math.sin(phi)])
    return abs(fourier_indicator(shape, xi, grid))


def _direction_max(shape, grid, lam, n_dir):
    phi = np.linspace(0.0, 2.0 * np.pi, n_dir, endpoint=False)
    xi = lam * np.stack([np.cos(phi), np.sin(phi)], axis=-1)
    mags = np.abs(fourier_indicator(shape, xi, grid))
    i = int(np.argmax(mags))
    dphi = 2.0 * np.pi / n_dir
    lo, hi = phi[i] - dphi, phi[i] + dphi
    _, neg = _golden_min(lambda p: -_abs_transform(shape, grid, lam, p), lo, hi, 1e-8)
    return max(float(np.max(mags)), -neg)


def scan(shape: StarShape, lambda_min: float, lambda_max: float, n_lambda: int,
         n_dir: int, grid: BoundaryGrid) -> PompeiuScan:
    """Profile M(lam) on a uniform lam grid, then refine around its minimum.

    Parameters
    ----------
    shape, grid
        Domain and its boundary grid (drives the transform accuracy).
    lambda_min, lambda_max : float
        Frequency window, 0 < lambda_min < lambda_max.
    n_lambda : int
        Grid points in lam, >= 2.
    n_dir : int
        Directions per lam before angular refinement, >= 16.
    """
    if not (0.0 < lambda_min < lambda_max):
        raise ValueError("need 0 < lambda_min < lambda_max")
    if n_lambda < 2:
        raise ValueError("n_lambda must be >= 2")
    if n_dir < 16:
        raise ValueError("n_dir must be >= 16")
    lambdas = np.linspace(lambda_min, lambda_max, n_lambda)
    values = np.array([_direction_max(shape, grid, lam, n_dir) for lam in lambdas])

    i = int(np.argmin(values))
    lo = lambdas[max(i - 1, 0)]
    hi = lambdas[min(i + 1, n_lambda - 1)]
    lam_star, m_star = _golden_min(
        lambda lam: _direction_max(shape, grid, lam, n_dir), lo, hi,
        1e-9 * max(1.0, lambda_max))
    if values[i] < m_star:
        lam_star, m_star = lambdas[i], values[i]
    return PompeiuScan(lambdas=lambdas, values=values,
                       argmin_lambda=float(lam_star), min_value=float(m_star),
                       area=_grid_area(shape, grid))


def detects_failure(scan_result: PompeiuScan, tol: float):
    """Return the refined lam* if min M(lam) < tol * area, else None.

    A returned lam* certifies a candidate Pompeiu-property failure; the
    round trip is to confirm energy_spectral(shape, lam*) < tol^2 * area^2.
    """
    if scan_result.min_value < tol * scan_result.area:
        return scan_result.argmin_lambda
    return None


def scan_summary(scan_result: PompeiuScan, tol: float) -> dict:
    """JSON-ready summary {argmin_lambda, min_value, failure}."""
    return {
        "argmin_lambda": scan_result.argmin_lambda,
        "min_value": scan_result.min_value,
        "failure": detects_failure(scan_result, tol) is not None,
    }


def write_scan_csv(scan_result: PompeiuScan, path) -> None:
    """Write the profile as CSV with columns lambda, M_of_lambda."""
    lines = ["lambda,M_of_lambda"]
    for lam, val in zip(scan_result.lambdas, scan_result.values):
        lines.append(f"{float(lam)!r},{float(val)!r}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
