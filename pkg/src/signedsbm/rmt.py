"""Random-matrix checks on the noise part of the block model.

Semicircle density and band edge, the resolvent trace f(lambda) in its
numerical and closed forms, root finding for signal eigenvalues, eigenvalue
interlacing under the rank-one contrast update, and the spread of the
first-order eigenvalue shift u_C^T X u_C.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .netgen import BlockParams, contrast_vector, noise_matrix
from .spectral import band_edge

__all__ = [
    "SpectralDensity",
    "TraceFunction",
    "VarianceSample",
    "semicircle_density",
    "semicircle_mass",
    "band_edge",
    "empirical_density",
    "l1_distance",
    "f_numeric",
    "f_analytic",
    "secular_function",
    "trace_function",
    "solve_signal",
    "largest_root",
    "interlacing_check",
    "lambda1_variance_test",
    "write_trace_csv",
    "write_density_csv",
]

POLE_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class SpectralDensity:
    bin_edges: np.ndarray
    bin_mass: np.ndarray
    sigma: float
    n: int

    @property
    def bin_centers(self) -> np.ndarray:
        return 0.5 * (self.bin_edges[:-1] + self.bin_edges[1:])

    def semicircle_mass(self) -> np.ndarray:
        return semicircle_mass(self.sigma, self.n, self.bin_edges)


@dataclass(frozen=True, eq=False)
class TraceFunction:
    lambda_grid: np.ndarray
    f_numeric: np.ndarray
    f_analytic: np.ndarray

    def max_relative_error(self) -> float:
        return float(np.max(np.abs(self.f_numeric - self.f_analytic) / np.abs(self.f_analytic)))


class VarianceSample(NamedTuple):
    variance: float
    mean: float
    samples: np.ndarray


def semicircle_density(sigma: float, n: int, z):
    """Semicircle eigenvalue density with variance parameter sigma for size n."""
    z = np.asarray(z, dtype=float)
    r2 = 4 * n * sigma**2
    if sigma == 0:
        return np.zeros_like(z) if z.ndim else 0.0
    inside = np.clip(r2 - z**2, 0.0, None)
    out = np.sqrt(inside) / (2 * math.pi * n * sigma**2)
    return out if out.ndim else float(out)


def _semicircle_cdf(sigma, n, z):
    radius = 2 * sigma * math.sqrt(n)
    x = np.clip(np.asarray(z, dtype=float) / radius, -1.0, 1.0)
    return 0.5 + (x * np.sqrt(1 - x**2) + np.arcsin(x)) / math.pi


def semicircle_mass(sigma: float, n: int, edges) -> np.ndarray:
    """Exact semicircle probability mass of each bin."""
    return np.diff(_semicircle_cdf(sigma, n, edges))


def empirical_density(eigenvalues, sigma: float, n: int | None = None, bins: int = 50) -> SpectralDensity:
    """Histogram over [-gamma, gamma]; eigenvalues past the edge go to the end bins."""
    w = np.asarray(eigenvalues, dtype=float)
    n = w.size if n is None else n
    gamma = band_edge(sigma, n)
    edges = np.linspace(-gamma, gamma, bins + 1)
    counts, _ = np.histogram(np.clip(w, -gamma, gamma), bins=edges)
    return SpectralDensity(edges, counts / w.size, sigma, n)


def l1_distance(density: SpectralDensity) -> float:
    return float(np.abs(density.bin_mass - density.semicircle_mass()).sum())


def _eigenvalues(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim == 1:
        return x
    return np.linalg.eigvalsh(x)


def f_numeric(x_matrix, lam: float) -> float:
    """Tr (lam - X)^-1. Accepts the matrix or its precomputed eigenvalues."""
    w = _eigenvalues(x_matrix)
    if np.any(np.abs(lam - w) < POLE_TOL):
        raise ValueError(f"lambda={lam!r} lies on an eigenvalue of X")
    return float(np.sum(1.0 / (lam - w)))


def f_analytic(sigma: float, n: int, lam: float) -> float:
    """Closed-form Tr (lam - X)^-1 for a semicircle spectrum, |lam| > gamma."""
    gamma = band_edge(sigma, n)
    if abs(lam) <= gamma:
        raise ValueError(f"f_analytic is only defined outside the band |lambda| > {gamma:g}")
    # branch chosen so that f ~ n / lam for large |lam|
    root = math.sqrt(max(lam * lam - 4 * n * sigma**2, 0.0))
    return (lam - math.copysign(root, lam)) / (2 * sigma**2)


def secular_function(x_matrix, vector, lam: float) -> float:
    """u^T (lam - X)^-1 u, whose root at 1/(nu n) gives eigenvalues of X + nu n u u^T."""
    w, v = np.linalg.eigh(np.asarray(x_matrix, dtype=float))
    if np.any(np.abs(lam - w) < POLE_TOL):
        raise ValueError(f"lambda={lam!r} lies on an eigenvalue of X")
    weights = (v.T @ np.asarray(vector, dtype=float)) ** 2
    return float(np.sum(weights / (lam - w)))


def trace_function(x_matrix, sigma: float, n: int, grid) -> TraceFunction:
    w = _eigenvalues(x_matrix)
    grid = np.asarray(grid, dtype=float)
    num = np.array([f_numeric(w, g) for g in grid])
    ana = np.array([f_analytic(sigma, n, g) for g in grid])
    return TraceFunction(grid, num, ana)


def _bisect(fn, target, lo, hi, rtol=1e-15, maxiter=400):
    """Root of a decreasing function fn(x) = target on [lo, hi]."""
    flo, fhi = fn(lo) - target, fn(hi) - target
    if flo < 0 or fhi > 0:
        raise ValueError("root is not bracketed")
    for _ in range(maxiter):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi) or hi - lo <= rtol * abs(mid):
            break
        if fn(mid) - target > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def solve_signal(sigma: float, n: int, nu: float) -> float:
    """Signal eigenvalue from f_analytic(lam) = 1/nu by bisection outside the band."""
    if nu == 0:
        raise ValueError("nu must be nonzero")
    gamma = band_edge(sigma, n)
    if sigma == 0:
        return nu * n
    sign = 1.0 if nu > 0 else -1.0
    target = 1.0 / abs(nu)
    f = lambda lam: f_analytic(sigma, n, lam)  # noqa: E731
    lo = gamma + 1e-6 * gamma
    if f(lo) < target:
        # signal just above threshold: its root hugs the band edge
        lo = math.nextafter(gamma, math.inf)
    if f(lo) < target:
        raise ValueError(f"|nu|={abs(nu):g} is below the detectability threshold")
    hi = gamma + n * sigma * 10
    while f(hi) > target:
        hi *= 2
    return sign * _bisect(f, target, lo, hi)


def largest_root(fn, target: float, lower: float, scale: float) -> float:
    """Largest root of a function decreasing on (lower, inf) to 0, by bisection."""
    lo = lower + 1e-9 * max(abs(lower), 1.0)
    hi = lower + max(scale, 1.0)
    while fn(hi) > target:
        hi = lower + 2 * (hi - lower)
    return _bisect(fn, target, lo, hi)


def interlacing_check(x_matrix, nu: float, n: int | None = None, tol: float = 1e-9) -> bool:
    """Do the eigenvalues of X + nu n u_C u_C^T interlace those of X?"""
    x = np.asarray(x_matrix, dtype=float)
    n = x.shape[0] if n is None else n
    u = contrast_vector(x.shape[0])
    omega = np.linalg.eigvalsh(x)[::-1]
    z = np.linalg.eigvalsh(x + nu * n * np.outer(u, u))[::-1]
    slack = tol * max(np.abs(omega).max(initial=0.0), 1.0)
    if nu >= 0:
        # z_1 >= w_1 >= z_2 >= w_2 >= ... >= z_n >= w_n
        return bool(np.all(z >= omega - slack) and np.all(z[1:] <= omega[:-1] + slack))
    # w_1 >= z_1 >= w_2 >= ... >= w_n >= z_n
    return bool(np.all(z <= omega + slack) and np.all(z[:-1] >= omega[1:] - slack))


def lambda1_variance_test(params: BlockParams, trials: int) -> VarianceSample:
    """Sample u_C^T X u_C over independent noise draws seeded from params.seed."""
    if trials < 2:
        raise ValueError("need at least two trials")
    u = contrast_vector(params.n)
    children = np.random.SeedSequence(params.seed).generate_state(trials, dtype=np.uint64)
    samples = np.array([u @ noise_matrix(params.replace(seed=int(s))) @ u for s in children])
    return VarianceSample(float(np.var(samples, ddof=1)), float(np.mean(samples)), samples)


def _write_rows(dest, header, rows):
    if not hasattr(dest, "write"):
        with open(dest, "w", newline="") as fh:
            return _write_rows(fh, header, rows)
    writer = csv.writer(dest, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([repr(float(v)) for v in row])


def write_trace_csv(dest, trace: TraceFunction) -> None:
    rows = zip(trace.lambda_grid, trace.f_numeric, trace.f_analytic)
    _write_rows(dest, ["lambda", "f_numeric", "f_analytic"], rows)


def write_density_csv(dest, density: SpectralDensity) -> None:
    rows = zip(density.bin_centers, density.bin_mass, density.semicircle_mass())
    _write_rows(dest, ["bin_center", "empirical_mass", "semicircle_mass"], rows)
