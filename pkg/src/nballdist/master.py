"""Numeric machinery for arbitrary densities: rotation averaging over the lens.

The distance PDF for any density is the rotation average of the product
rho(p1) rho(p2) over the lens-shaped overlap of two balls, times s^(n-1).
Spherically symmetric densities need no rotation average and reduce to a 2-d
quadrature; general densities are estimated by Monte Carlo over rotation
angles and lens coordinates.
"""

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate

from . import rng as rng_mod
from .distributions import BallGeometry
from .errors import ConfigurationError, DegenerateDensityError, NonConvergenceError
from .sampling import _box_muller

_ANGLE_TABLE_KNOTS = 4096


@dataclass(frozen=True)
class RotationAngles:
    """Hyperspherical direction: n-2 polar angles in [0, pi] plus an azimuth."""

    thetas: tuple
    phi: float

    def __post_init__(self):
        thetas = tuple(float(t) for t in self.thetas)
        if any(t < 0.0 or t > math.pi for t in thetas):
            raise ValueError("polar angles must lie in [0, pi]")
        if not 0.0 <= self.phi <= 2.0 * math.pi:
            raise ValueError("azimuth must lie in [0, 2 pi]")
        object.__setattr__(self, "thetas", thetas)
        object.__setattr__(self, "phi", float(self.phi))

    @property
    def dim(self):
        return len(self.thetas) + 2


def unit_vector(dim: int, angles: RotationAngles) -> np.ndarray:
    """Cartesian components of the unit vector with the given angles."""
    if dim < 2:
        raise ValueError("hyperspherical angles need dimension >= 2")
    if len(angles.thetas) != dim - 2:
        raise ValueError(f"need {dim - 2} polar angles for dimension {dim}")
    x = np.empty(dim)
    prod = 1.0
    for i in range(dim, 2, -1):
        theta = angles.thetas[i - 3]
        x[i - 1] = prod * math.cos(theta)
        prod *= math.sin(theta)
    x[1] = prod * math.sin(angles.phi)
    x[0] = prod * math.cos(angles.phi)
    return x


def _batched_rotation_matrices(dim, thetas, phi):
    """(k, dim, dim) rotation matrices R(phi) R(theta_1) ... R(theta_(n-2)).

    theta_1 rotates the (1, 3) coordinate plane; theta_k for k >= 2 rotates
    (k+1, k+2).  The n-th column of the product is the unit vector of the
    angles, so the matrix carries the lens axis e_n onto that direction.
    """
    k = phi.shape[0]
    eye = np.broadcast_to(np.eye(dim), (k, dim, dim))
    out = eye.copy()
    c, s = np.cos(phi), np.sin(phi)
    if dim == 2:
        # Phase-shifted so the direction lands in column 2 like every other
        # dimension; under the full azimuth average this is equivalent to
        # the plain 2-d rotation.
        out[:, 0, 0] = s
        out[:, 0, 1] = c
        out[:, 1, 0] = -c
        out[:, 1, 1] = s
        return out
    out[:, 0, 0] = c
    out[:, 0, 1] = -s
    out[:, 1, 0] = s
    out[:, 1, 1] = c
    for j in range(1, dim - 1):
        p, q = (0, 2) if j == 1 else (j, j + 1)
        fac = eye.copy()
        c, s = np.cos(thetas[:, j - 1]), np.sin(thetas[:, j - 1])
        fac[:, p, p] = c
        fac[:, p, q] = s
        fac[:, q, p] = -s
        fac[:, q, q] = c
        out = out @ fac
    return out


def rotation_matrix(dim: int, angles: RotationAngles) -> np.ndarray:
    """The dim x dim rotation matrix associated with a direction.

    Orthogonal with determinant +1; its last column equals
    ``unit_vector(dim, angles)``, so R maps the n-th basis vector to the
    direction and R^T maps the direction back onto the n-th axis.
    """
    if dim < 2:
        raise ValueError(f"rotation matrices need dimension >= 2, got {dim}")
    if len(angles.thetas) != dim - 2:
        raise ValueError(f"need {dim - 2} polar angles for dimension {dim}")
    thetas = np.array(angles.thetas, dtype=float).reshape(1, -1)
    return _batched_rotation_matrices(dim, thetas, np.array([angles.phi]))[0]


@lru_cache(maxsize=64)
def _sin_power_table(power: int):
    """Inverse-CDF interpolation table for the density sin^power on [0, pi]."""
    theta = np.linspace(0.0, math.pi, _ANGLE_TABLE_KNOTS)
    pdf = np.sin(theta) ** power
    cdf = np.concatenate(([0.0], np.cumsum((pdf[1:] + pdf[:-1]) * 0.5 * np.diff(theta))))
    cdf /= cdf[-1]
    return cdf, theta


def _sample_angles(dim, engine, count):
    """Angle batches with the surface-measure weights sin^k(theta_k).

    Consumes dim-2 variates for the polar angles (in index order) plus one
    for the azimuth, per sample.
    """
    thetas = np.empty((count, dim - 2))
    for j in range(1, dim - 1):
        cdf, grid = _sin_power_table(j)
        thetas[:, j - 1] = np.interp(engine.uniforms(count), cdf, grid)
    phi = engine.uniforms(count) * 2.0 * math.pi
    return thetas, phi


def random_rotation_angles(dim: int, engine) -> RotationAngles:
    """One angle draw distributed by the hyperspherical surface measure."""
    if dim < 2:
        raise ValueError(f"need dimension >= 2, got {dim}")
    thetas, phi = _sample_angles(dim, engine, 1)
    return RotationAngles(thetas=tuple(thetas[0]), phi=float(phi[0]))


# ---------------------------------------------------------------------------
# Spherically symmetric densities: 2-d quadrature
# ---------------------------------------------------------------------------

def _crossing_points(breaks, center, lo, hi):
    """t (or x) values in (lo, hi) where a radius sqrt(t^2 + c^2) hits a break."""
    pts = []
    for b in breaks:
        gap = b * b - center * center
        if gap > 0.0:
            root = math.sqrt(gap)
            if lo < root < hi:
                pts.append(root)
    return pts


def _symmetric_unnormalized(geom, rho_of_r, s, epsabs, epsrel, breaks):
    """s^(n-1) times the lens overlap integral of rho(r1) rho(r2).

    The n-1 transverse coordinates collapse to the radius t, leaving a
    2-d integral over (x_n, t) with the t^(n-2) surface factor.  ``breaks``
    lists radii where the profile is discontinuous so the quadrature can
    split there.  Raises NonConvergenceError when the achieved error stays
    far above anything usable.
    """
    n, big_r = geom.dim, geom.radius
    if s >= 2.0 * big_r:
        return 0.0
    with warnings.catch_warnings():
        # Convergence is judged from the returned error estimate instead.
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        if n == 1:
            pts = [p for b in breaks for p in (b, s - b, s + b)
                   if s / 2.0 < p < big_r]
            val, err = integrate.quad(
                lambda x: rho_of_r(abs(x - s)) * rho_of_r(abs(x)),
                s / 2.0, big_r, epsabs=epsabs, epsrel=epsrel, limit=200,
                points=sorted(set(pts)) or None,
            )
        else:
            def inner_integral(x):
                tmax = math.sqrt(max(big_r**2 - x**2, 0.0))
                if tmax == 0.0:
                    return 0.0
                pts = _crossing_points(breaks, x, 0.0, tmax)
                pts += _crossing_points(breaks, x - s, 0.0, tmax)
                val, _ = integrate.quad(
                    lambda t: t ** (n - 2)
                    * rho_of_r(math.hypot(t, x - s))
                    * rho_of_r(math.hypot(t, x)),
                    0.0, tmax, epsabs=epsabs, epsrel=epsrel, limit=100,
                    points=sorted(set(pts)) or None,
                )
                return val

            xpts = [p for b in breaks for p in (b, s - b, s + b, -b)
                    if s / 2.0 < p < big_r]
            val, err = integrate.quad(
                inner_integral, s / 2.0, big_r, epsabs=epsabs, epsrel=epsrel,
                limit=100, points=sorted(set(xpts)) or None,
            )
    if err > max(100.0 * epsabs, 1e-5 * abs(val)):
        raise NonConvergenceError(
            f"lens quadrature at s={s} achieved error {err:.2e} on value {val:.6e}"
        )
    return (s ** (n - 1) if n > 1 else 1.0) * val


@lru_cache(maxsize=16)
def _symmetric_norm(geom, rho_of_r, epsabs, epsrel, breaks):
    spts = sorted(
        {b1 + b2 for b1 in breaks for b2 in breaks}
        | {abs(b1 - b2) for b1 in breaks for b2 in breaks}
    )
    spts = [p for p in spts if 0.0 < p < 2.0 * geom.radius]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, _ = integrate.quad(
            lambda s: _symmetric_unnormalized(geom, rho_of_r, s, epsabs, epsrel,
                                              breaks),
            0.0, 2.0 * geom.radius, epsabs=epsabs, epsrel=max(epsrel, 1e-9),
            limit=100, points=spts or None,
        )
    if val <= 0.0:
        raise DegenerateDensityError("density overlap has zero total mass")
    return val


def symmetric_pdf(geom: BallGeometry, rho_of_r, s, *, epsabs: float = 1e-11,
                  epsrel: float = 1e-8, radial_breaks=()):
    """Distance PDF for a spherically symmetric density, by quadrature.

    ``rho_of_r`` must be finite and nonnegative on [0, R] and hashable by
    identity (a plain function or bound method); the normalization constant
    is cached per (geometry, density) pair.  Accepts scalar or array s.

    Parameters
    ----------
    geom : BallGeometry
    rho_of_r : callable
        Radial density profile; need not be normalized.
    s : float or ndarray
    epsabs, epsrel : float
        Quadrature tolerances for the overlap integrals.
    radial_breaks : sequence of float
        Radii where the profile jumps (shell boundaries); the quadrature
        subdivides there instead of hunting for the discontinuities.
    """
    breaks = tuple(sorted(float(b) for b in radial_breaks))
    norm = _symmetric_norm(geom, rho_of_r, epsabs, epsrel, breaks)
    arr = np.atleast_1d(np.asarray(s, dtype=float))
    if np.any(arr < 0.0) or np.any(arr > 2.0 * geom.radius):
        raise ValueError("distance s outside [0, 2R]")
    out = np.array(
        [_symmetric_unnormalized(geom, rho_of_r, si, epsabs, epsrel, breaks)
         for si in arr]
    ) / norm
    return float(out[0]) if np.asarray(s).ndim == 0 else out


# ---------------------------------------------------------------------------
# General densities: Monte Carlo over rotations and lens coordinates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NumericPdfEstimate:
    """Monte Carlo PDF estimate on a fixed grid with per-point standard errors."""

    grid: np.ndarray
    values: np.ndarray
    stderr: np.ndarray
    normalization_applied: bool = True

    def mass(self) -> float:
        return float(integrate.trapezoid(self.values, self.grid))


def _transverse_points(engine, count, dim_t, radii):
    """Uniform points in balls of per-sample radius, dim_t >= 1."""
    z = _box_muller(engine, count, dim_t)
    norms = np.linalg.norm(z, axis=1)
    norms[norms == 0.0] = 1.0
    u = engine.uniforms(count)
    r = radii * u ** (1.0 / dim_t)
    return z * (r / norms)[:, None]


def _density_product(rho_of_x, pts1, pts2):
    try:
        v1 = np.asarray(rho_of_x(pts1), dtype=float)
        v2 = np.asarray(rho_of_x(pts2), dtype=float)
        if v1.shape == (pts1.shape[0],) and v2.shape == (pts2.shape[0],):
            return v1 * v2
    except ConfigurationError:
        raise
    except Exception:
        pass  # not vectorized; evaluate row by row
    v1 = np.array([float(np.asarray(rho_of_x(p)).ravel()[0]) for p in pts1])
    v2 = np.array([float(np.asarray(rho_of_x(p)).ravel()[0]) for p in pts2])
    return v1 * v2


def general_pdf_mc(geom: BallGeometry, rho_of_x, grid, samples: int, engine,
                   substreams: int = 1) -> NumericPdfEstimate:
    """Monte Carlo distance PDF for an arbitrary density on the ball.

    For each interior grid point, rotation angles are drawn with the
    sin-power surface weights, the lens coordinates uniformly (axis
    coordinate on [s/2, R], transverse point in the residual ball with its
    radius-to-the-(n-1) volume weight), and rho(p1) rho(p2) is averaged over
    the rotated pair.  Estimates are normalized to unit trapezoid mass over
    the grid, which must run from 0 to 2R inclusive.

    Parameters
    ----------
    geom : BallGeometry
        Requires dim >= 2 (the rotation average is undefined on a segment).
    rho_of_x : callable
        Density of an n-vector; may be vectorized over (k, n) arrays.
    grid : ndarray
        Ascending distances including both endpoints 0 and 2R.
    samples : int
        Total Monte Carlo budget, at least 10^4, split evenly over the
        interior grid points.
    engine : UniformEngine
    substreams : int
        Split the work over this many derived engines; the result depends
        on the split count but not on execution order.
    """
    n, big_r = geom.dim, geom.radius
    if n < 2:
        raise ValueError("general_pdf_mc needs dimension >= 2")
    if samples < 10**4:
        raise ValueError(f"need at least 1e4 samples, got {samples}")
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size < 3 or np.any(np.diff(grid) <= 0.0):
        raise ValueError("grid must be an ascending 1-d array of >= 3 points")
    if grid[0] != 0.0 or abs(grid[-1] - 2.0 * big_r) > 1e-12 * big_r:
        raise ValueError("grid must span [0, 2R] inclusive")
    per_point = max(-(-samples // (grid.size - 2)), 2)

    engines = [engine] if substreams == 1 else rng_mod.split(engine, substreams)
    per = [per_point // len(engines)] * len(engines)
    for i in range(per_point % len(engines)):
        per[i] += 1

    raw = np.zeros(grid.size)
    raw_err = np.zeros(grid.size)
    for gi in range(1, grid.size - 1):
        s = grid[gi]
        count, mean, m2 = 0, 0.0, 0.0
        for sub, quota in zip(engines, per):
            done = 0
            while done < quota:
                k = min(quota - done, 65536)
                vals = _mc_chunk(geom, rho_of_x, s, sub, k)
                mean_b = float(vals.mean())
                m2_b = float(((vals - mean_b) ** 2).sum())
                if count == 0:
                    count, mean, m2 = k, mean_b, m2_b
                else:
                    delta = mean_b - mean
                    tot = count + k
                    mean += delta * k / tot
                    m2 += m2_b + delta * delta * count * k / tot
                    count = tot
                done += k
        raw[gi] = s ** (n - 1) * mean
        raw_err[gi] = s ** (n - 1) * math.sqrt(m2 / (count - 1) / count)

    norm = integrate.trapezoid(raw, grid)
    if norm <= 0.0:
        raise DegenerateDensityError(
            "density product vanished on every Monte Carlo sample"
        )
    return NumericPdfEstimate(
        grid=grid, values=raw / norm, stderr=raw_err / norm,
        normalization_applied=True,
    )


def _mc_chunk(geom, rho_of_x, s, engine, k):
    n, big_r = geom.dim, geom.radius
    thetas, phi = _sample_angles(n, engine, k)
    mats = _batched_rotation_matrices(n, thetas, phi)
    x_axis = s / 2.0 + engine.uniforms(k) * (big_r - s / 2.0)
    trans_r = np.sqrt(np.maximum(big_r**2 - x_axis**2, 0.0))
    lens = np.empty((k, n))
    lens[:, : n - 1] = _transverse_points(engine, k, n - 1, trans_r)
    lens[:, n - 1] = x_axis
    shifted = lens.copy()
    shifted[:, n - 1] -= s
    p2 = np.einsum("kij,kj->ki", mats, lens)
    p1 = np.einsum("kij,kj->ki", mats, shifted)
    dens = _density_product(rho_of_x, p1, p2)
    # Variable-width weights: axis interval length and transverse ball volume.
    return (big_r - s / 2.0) * trans_r ** (n - 1) * dens
