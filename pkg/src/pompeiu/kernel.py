"""Radial kernels f(|.|) with positive-definiteness metadata.

Three families are provided: oscillatory Bessel-type kernels (whose spectral
measure is a single sphere in frequency space), Gaussians, and constants.
The ``bochner_measure`` descriptor fixes the normalization that makes the
spatial pair energy equal to the frequency-side energy; see energy.py.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import specfun


@dataclass(frozen=True)
class BochnerMeasure:
    """Radial spectral measure of a positive-definite radial kernel.

    The normalization convention: the pair energy of a domain equals

        sum over atoms  weight * Int_0^{2pi} |chi_hat(rho * omega(phi))|^2 dphi
        + Int_0^inf density(rho) * Int_0^{2pi} |chi_hat(rho * omega(phi))|^2 dphi drho

    where chi_hat is the Fourier transform of the domain indicator.
    ``kind`` is "atom" (radius, weight set) or "density" (callable set).
    """

    kind: str
    radius: float | None = None
    weight: float | None = None
    density: object | None = None


class RadialKernel:
    """Base interface: eval(r), positive_definite, bochner_measure()."""

    positive_definite: bool

    def eval(self, r):
        raise NotImplementedError

    def eval_sq(self, r2):
        # pair-sum hot path may have squared distances already in hand
        return self.eval(np.sqrt(r2))

    def bochner_measure(self) -> BochnerMeasure:
        raise NotImplementedError

    def to_dict(self) -> dict:
        raise NotImplementedError


def _check_nonneg(r):
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise ValueError("kernel argument must be nonnegative")
    return r


@dataclass(frozen=True)
class BesselKernel(RadialKernel):
    """f(r) = J_{(n-2)/2}(lam r) / r^{(n-2)/2}, the zero-energy family.

    In the plane (dim = 2) this is J_0(lam r); its spectral measure is the
    single circle |xi| = lam, which is what lets bounded domains reach
    energy zero.  Only even ambient dimensions are supported (integer
    Bessel orders).
    """

    lam: float
    dim: int = 2
    positive_definite: bool = True

    def __post_init__(self):
        if not (np.isfinite(self.lam) and self.lam > 0):
            raise ValueError(f"lambda must be positive and finite, got {self.lam}")
        if self.dim < 2 or self.dim % 2 != 0:
            raise ValueError(f"even dim >= 2 required, got {self.dim}")

    def eval(self, r):
        r = _check_nonneg(r)
        p = (self.dim - 2) // 2
        if p == 0:
            return specfun.bessel_j(0, self.lam * r)
        scalar = r.ndim == 0
        ra = np.atleast_1d(r)
        out = np.empty_like(ra)
        tiny = ra < 1e-8
        out[tiny] = (0.5 * self.lam) ** p / math.factorial(p)
        big = ~tiny
        out[big] = specfun.bessel_j(p, self.lam * ra[big]) / ra[big] ** p
        return float(out[0]) if scalar else out.reshape(np.shape(r))

    def eval_sq(self, r2):
        # quadrature-grade path on squared distances: series directly in
        # q = (lam/2)^2 r^2 below the series cut (no square root), exact
        # bessel_j beyond; absolute error <= ~5e-13
        if self.dim != 2:
            return super().eval_sq(r2)
        r2 = np.asarray(r2, dtype=float)
        q = (0.25 * self.lam * self.lam) * r2
        cut = (0.5 * specfun._SERIES_CUT) ** 2
        small = q < cut
        if np.all(small):
            return specfun._j0_from_q(q)
        out = np.empty_like(q)
        out[small] = specfun._j0_from_q(q[small])
        big = ~small
        out[big] = specfun.bessel_j(0, self.lam * np.sqrt(r2[big]))
        return out

    def bochner_measure(self) -> BochnerMeasure:
        if self.dim != 2:
            raise ValueError("spectral measure descriptor implemented for dim=2 only")
        return BochnerMeasure(kind="atom", radius=self.lam, weight=1.0 / (2.0 * np.pi))

    def to_dict(self) -> dict:
        return {"kind": "bessel", "lambda": self.lam, "dim": self.dim}


@dataclass(frozen=True)
class GaussianKernel(RadialKernel):
    """f(r) = exp(-r^2 / (2 sigma^2)); strictly positive spectral density."""

    sigma: float
    positive_definite: bool = True

    def __post_init__(self):
        if not (np.isfinite(self.sigma) and self.sigma > 0):
            raise ValueError(f"sigma must be positive and finite, got {self.sigma}")

    def eval(self, r):
        r = _check_nonneg(r)
        return np.exp(-0.5 * (r / self.sigma) ** 2)

    def eval_sq(self, r2):
        r2 = np.asarray(r2, dtype=float)
        return np.exp(r2 * (-0.5 / (self.sigma * self.sigma)))

    def bochner_measure(self) -> BochnerMeasure:
        s2 = self.sigma * self.sigma

        def density(rho):
            rho = np.asarray(rho, dtype=float)
            return s2 * rho / (2.0 * np.pi) * np.exp(-0.5 * s2 * rho * rho)

        return BochnerMeasure(kind="density", density=density)

    def to_dict(self) -> dict:
        return {"kind": "gaussian", "sigma": self.sigma}


@dataclass(frozen=True)
class ConstantKernel(RadialKernel):
    """f = c; positive definite iff c >= 0 (spectral atom at the origin)."""

    c: float

    def __post_init__(self):
        if not np.isfinite(self.c):
            raise ValueError("constant must be finite")

    @property
    def positive_definite(self) -> bool:
        return self.c >= 0.0

    def eval(self, r):
        r = _check_nonneg(r)
        return np.full_like(r, self.c) if r.ndim else self.c

    def eval_sq(self, r2):
        r2 = np.asarray(r2, dtype=float)
        return np.full_like(r2, self.c) if r2.ndim else self.c

    def bochner_measure(self) -> BochnerMeasure:
        if not self.positive_definite:
            raise ValueError("kernel is not positive definite")
        return BochnerMeasure(kind="atom", radius=0.0, weight=self.c / (2.0 * np.pi))

    def to_dict(self) -> dict:
        return {"kind": "constant", "c": self.c}


def kernel_from_dict(data: dict) -> RadialKernel:
    """Build a kernel from its JSON record {"kind": ..., ...}."""
    try:
        kind = data["kind"]
        if kind == "bessel":
            return BesselKernel(lam=float(data["lambda"]), dim=int(data.get("dim", 2)))
        if kind == "gaussian":
            return GaussianKernel(sigma=float(data["sigma"]))
        if kind == "constant":
            return ConstantKernel(c=float(data["c"]))
    except (KeyError, TypeError) as exc:
        raise ValueError(f"invalid kernel record: {exc}") from exc
    raise ValueError(f"unknown kernel kind {kind!r}")
