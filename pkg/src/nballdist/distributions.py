"""Closed-form distance distributions for points in n-dimensional balls.

Covers the uniform ball in three equivalent representations (parity closed
form, lens integral, hypergeometric), its CDF and moments, the infinite
Gaussian space, hard-core truncations, and the equal-thickness 2-shell
sphere.  All distances are Euclidean; the pair distance s lives on
[0, 2R] for bounded geometries and [0, inf) for Gaussian space.
"""

import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional, Union

import numpy as np
from scipy import integrate

from . import specfun


@dataclass(frozen=True)
class BallGeometry:
    """Solid n-ball: dimension and radius."""

    dim: int
    radius: float = 1.0

    def __post_init__(self):
        if int(self.dim) != self.dim or self.dim < 1:
            raise ValueError(f"dimension must be an integer >= 1, got {self.dim}")
        if not self.radius > 0.0:
            raise ValueError(f"radius must be positive, got {self.radius}")
        object.__setattr__(self, "dim", int(self.dim))
        object.__setattr__(self, "radius", float(self.radius))


@dataclass(frozen=True)
class UniformDensity:
    """Constant density over the ball."""


@dataclass(frozen=True)
class GaussianDensity:
    """rho(r) proportional to exp(-r^2 / 2 sigma^2); R -> inf unless truncated."""

    sigma: float

    def __post_init__(self):
        if not self.sigma > 0.0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")


@dataclass(frozen=True)
class RadialShellsDensity:
    """Piecewise-constant radial density: shell i spans (breakpoints[i-1], breakpoints[i]].

    The breakpoint list is strictly ascending and its last entry is the ball
    radius; densities are per-shell constants, at least one positive.
    """

    breakpoints: tuple
    densities: tuple

    def __post_init__(self):
        bp = tuple(float(b) for b in self.breakpoints)
        de = tuple(float(d) for d in self.densities)
        if len(bp) != len(de) or not bp:
            raise ValueError("need one density per shell breakpoint")
        if any(b2 <= b1 for b1, b2 in zip(bp, bp[1:])) or bp[0] <= 0.0:
            raise ValueError("breakpoints must be strictly ascending and positive")
        if any(d < 0.0 for d in de) or not any(d > 0.0 for d in de):
            raise ValueError("shell densities must be >= 0 with at least one > 0")
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "densities", de)


@dataclass(frozen=True)
class RadialProfileDensity:
    """Arbitrary radial density rho(r), finite and nonnegative on [0, R].

    ``bound`` is an optional upper bound on rho used by rejection sampling;
    when omitted the samplers scan a fine radial grid for one.
    """

    rho_of_r: Callable[[float], float]
    bound: Optional[float] = None


@dataclass(frozen=True)
class GeneralDensity:
    """Arbitrary density rho(x) over the ball, x an n-vector.

    The callable may be vectorized over an (k, n) array of points.  A finite
    upper bound on rho over the ball is required for rejection sampling.
    """

    rho_of_x: Callable[[np.ndarray], float]
    bound: Optional[float] = None


DensityModel = Union[
    UniformDensity,
    GaussianDensity,
    RadialShellsDensity,
    RadialProfileDensity,
    GeneralDensity,
]


@lru_cache(maxsize=None)
def _log_double_factorial(k):
    """log(k!!) with the conventions (-1)!! = 0!! = 1."""
    if k < -1:
        raise ValueError(f"double factorial undefined for {k}")
    total = 0.0
    j = k
    while j > 1:
        total += math.log(j)
        j -= 2
    return total


def _as_array(s):
    arr = np.asarray(s, dtype=float)
    return arr, arr.ndim == 0


def _check_support(arr, lo, hi, what):
    if np.any(arr < lo) or np.any(arr > hi):
        raise ValueError(f"{what} outside [{lo}, {hi}]")


# ---------------------------------------------------------------------------
# Uniform ball
# ---------------------------------------------------------------------------

def uniform_pdf(geom: BallGeometry, s):
    """PDF of the distance between two uniform random points in the ball.

    Evaluates the parity closed forms: for even n an arccos term plus a
    double-factorial sum, for odd n a terminating binomial sum.  Accepts
    scalar or array s in [0, 2R].

    Parameters
    ----------
    geom : BallGeometry
    s : float or ndarray
        Distance(s) in [0, 2R].

    Returns
    -------
    float or ndarray
        Probability density, normalized so the integral over [0, 2R] is 1.
    """
    n, big_r = geom.dim, geom.radius
    arr, scalar = _as_array(s)
    _check_support(arr, 0.0, 2.0 * big_r, "distance s")
    u = arr / (2.0 * big_r)
    lead = n * arr ** (n - 1) / big_r**n
    if n % 2 == 0:
        total = (2.0 / math.pi) * np.arccos(np.clip(u, -1.0, 1.0))
        half = big_r**2 - arr**2 / 4.0
        half = np.where(half < 0.0, 0.0, half)
        ssum = np.zeros_like(arr)
        for k in range(1, n // 2 + 1):
            logc = (
                _log_double_factorial(n - 2 * k)
                - _log_double_factorial(n - 2 * k + 1)
                + (2 * k - 2 - n) * math.log(big_r)
            )
            ssum = ssum + math.exp(logc) * half ** ((n - 2 * k + 1) / 2.0)
        out = lead * (total - arr / math.pi * ssum)
    else:
        m = (n - 1) // 2
        ratio = math.exp(_log_double_factorial(n) - _log_double_factorial(n - 1))
        ssum = np.zeros_like(arr)
        for k in range(m + 1):
            coeff = (-1.0) ** k / (2 * k + 1) * math.comb(m, k)
            ssum = ssum + coeff * (1.0 - u ** (2 * k + 1))
        out = lead * ratio * ssum
    out = np.where(arr == 2.0 * big_r, 0.0, out)
    out = np.where(out < 0.0, 0.0, out)
    return float(out) if scalar else out


def _lens_integral(geom: BallGeometry, s):
    """int_{s/2}^{R} (R^2 - x^2)^((n-1)/2) dx by adaptive quadrature."""
    n, big_r = geom.dim, geom.radius
    if s >= 2.0 * big_r:
        return 0.0
    power = (n - 1) / 2.0
    val, _ = integrate.quad(
        lambda x: (big_r**2 - x**2) ** power if x < big_r else 0.0,
        s / 2.0,
        big_r,
        epsabs=1e-12 * big_r**n,
        epsrel=1e-12,
        limit=200,
    )
    return val


def uniform_pdf_integral_rep(geom: BallGeometry, s):
    """Uniform-ball PDF via the lens integral representation.

    The numerator integral over the lens cross-section is evaluated by
    adaptive quadrature; the normalization B(n/2+1/2, 1/2) R^(2n) / 2n is
    analytic.  Slower than ``uniform_pdf`` but representation-independent.
    """
    n, big_r = geom.dim, geom.radius
    arr, scalar = _as_array(s)
    _check_support(arr, 0.0, 2.0 * big_r, "distance s")
    norm = specfun.beta(n / 2.0 + 0.5, 0.5) * big_r ** (2 * n) / (2.0 * n)
    out = np.array(
        [si ** (n - 1) * _lens_integral(geom, si) / norm for si in arr.ravel()]
    ).reshape(arr.shape)
    return float(out) if scalar else out


def uniform_pdf_hypergeometric_rep(geom: BallGeometry, s):
    """Uniform-ball PDF via the 2F1(1/2, 1/2-n/2; 3/2; .) representation.

    The bracket 2F1(..., 1) R - (s/2) 2F1(..., s^2/4R^2) cancels
    catastrophically as s approaches 2R, so past s = 1.8R it is evaluated
    through its reflected hypergeometric form, the incomplete beta
    B_(1-beta)((n+1)/2, 1/2) / 2, which targets the small tail directly.
    """
    n, big_r = geom.dim, geom.radius
    arr, scalar = _as_array(s)
    _check_support(arr, 0.0, 2.0 * big_r, "distance s")
    a, b, c = 0.5, 0.5 - n / 2.0, 1.5
    front = 2.0 * n / specfun.beta(n / 2.0 + 0.5, 0.5)
    f_at_1 = specfun.gauss_2f1(a, b, c, 1.0)
    flat = arr.ravel()
    res = np.empty_like(flat)
    for i, si in enumerate(flat):
        if si == 2.0 * big_r:
            res[i] = 0.0
            continue
        beta_arg = si**2 / (4.0 * big_r**2)
        if beta_arg > 0.81:
            bracket = 0.5 * big_r * specfun.incomplete_beta(
                1.0 - beta_arg, n / 2.0 + 0.5, 0.5
            )
        else:
            f_at_beta = specfun.gauss_2f1(a, b, c, beta_arg)
            bracket = f_at_1 * big_r - si / 2.0 * f_at_beta
        res[i] = front * bracket * si ** (n - 1) / big_r ** (n + 1)
    out = res.reshape(arr.shape)
    out = np.where(out < 0.0, 0.0, out)
    return float(out) if scalar else out


def uniform_cdf(geom: BallGeometry, x):
    """CDF of the uniform-ball distance via incomplete beta functions.

    Endpoints are exact: 0 at x = 0 and 1 at x = 2R.
    """
    n, big_r = geom.dim, geom.radius
    arr, scalar = _as_array(x)
    _check_support(arr, 0.0, 2.0 * big_r, "distance x")
    half = n / 2.0 + 0.5
    b_half = specfun.beta(0.5, half)
    flat = arr.ravel()
    res = np.empty_like(flat)
    for i, xi in enumerate(flat):
        if xi == 0.0:
            res[i] = 0.0
            continue
        if xi == 2.0 * big_r:
            res[i] = 1.0
            continue
        alpha = xi**2 / (4.0 * big_r**2)
        ratio = (xi / big_r) ** n
        res[i] = (
            ratio
            - specfun.incomplete_beta(alpha, 0.5, half) / b_half * ratio
            + 2.0**n * specfun.incomplete_beta(alpha, half, half) / b_half
        )
    out = np.clip(res.reshape(arr.shape), 0.0, 1.0)
    return float(out) if scalar else out


def uniform_moment(geom: BallGeometry, m: int):
    """m-th moment <s^m> of the uniform-ball distance, m integer >= -(n-1)."""
    n, big_r = geom.dim, geom.radius
    if int(m) != m:
        raise ValueError(f"moment order must be an integer, got {m}")
    m = int(m)
    if m < -(n - 1):
        raise ValueError(
            f"moment diverges: m must be >= -(n-1) = {-(n - 1)} for n={n}, got {m}"
        )
    if n + m == 0:
        raise ValueError(f"moment undefined at n + m = 0 (n={n}, m={m})")
    half = n / 2.0 + 0.5
    return (
        2.0 ** (n + m)
        * (n / (n + m))
        * specfun.beta(half, half + m / 2.0)
        / specfun.beta(half, 0.5)
        * big_r**m
    )


# ---------------------------------------------------------------------------
# Gaussian space
# ---------------------------------------------------------------------------

def gaussian_pdf(dim: int, sigma: float, s):
    """Distance PDF for points drawn from an isotropic Gaussian in n dims.

    P(s) = s^(n-1) exp(-s^2/4 sigma^2) / (2^(n-1) Gamma(n/2) sigma^n) on
    [0, inf); the mode sits at sqrt(2(n-1)) sigma.
    """
    if dim < 1 or int(dim) != dim:
        raise ValueError(f"dimension must be an integer >= 1, got {dim}")
    if not sigma > 0.0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    arr, scalar = _as_array(s)
    if np.any(arr < 0.0):
        raise ValueError("distance s must be nonnegative")
    n = int(dim)
    norm = 2.0 ** (n - 1) * math.exp(specfun.log_gamma(n / 2.0)) * sigma**n
    out = arr ** (n - 1) * np.exp(-(arr**2) / (4.0 * sigma**2)) / norm
    return float(out) if scalar else out


def gaussian_mode(dim: int, sigma: float):
    """Location of the maximum of the Gaussian-space distance PDF."""
    return math.sqrt(2.0 * (dim - 1)) * sigma


def gaussian_moment(dim: int, sigma: float, m: int):
    """m-th moment of the Gaussian-space distance: (2 sigma)^m Gamma((n+m)/2)/Gamma(n/2)."""
    if int(m) != m:
        raise ValueError(f"moment order must be an integer, got {m}")
    m = int(m)
    if dim + m <= 0:
        raise ValueError(f"moment requires n + m > 0, got n={dim}, m={m}")
    if not sigma > 0.0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    return (
        (2.0 * sigma) ** m
        * math.exp(specfun.log_gamma((dim + m) / 2.0) - specfun.log_gamma(dim / 2.0))
    )


# ---------------------------------------------------------------------------
# Hard-core truncation
# ---------------------------------------------------------------------------

def hardcore_pdf(geom: BallGeometry, r_c: float, s):
    """Uniform-ball distance PDF truncated below the hard-core radius r_c.

    The lens-integral numerator is unchanged; only the normalization shrinks
    to the [r_c, 2R] window, which reduces to
    uniform_pdf(s) / (1 - uniform_cdf(r_c)).
    """
    big_r = geom.radius
    if not 0.0 < r_c < 2.0 * big_r:
        raise ValueError(f"hard-core radius must satisfy 0 < r_c < 2R, got {r_c}")
    arr, scalar = _as_array(s)
    _check_support(arr, r_c, 2.0 * big_r, "distance s")
    tail = 1.0 - uniform_cdf(geom, r_c)
    out = uniform_pdf(geom, arr if not scalar else float(arr)) / tail
    return out


def hardcore_moment(geom: BallGeometry, r_c: float, m: int):
    """m-th moment of the hard-core-truncated distance via incomplete betas.

    Implements the closed form H(R, r_c, m, n) / H(R, r_c, 0, n) with
    x = r_c^2 / 4R^2.  Orders below -(n-1) stay finite thanks to the cutoff
    and are accepted with a warning; m = -n has no closed form here.
    """
    n, big_r = geom.dim, geom.radius
    if not 0.0 < r_c < 2.0 * big_r:
        raise ValueError(f"hard-core radius must satisfy 0 < r_c < 2R, got {r_c}")
    if int(m) != m:
        raise ValueError(f"moment order must be an integer, got {m}")
    m = int(m)
    if n + m == 0:
        raise ValueError(
            f"closed form is singular at m = -n (n={n}); no hard-core moment"
        )
    if m < -(n - 1):
        warnings.warn(
            f"moment order m={m} is below -(n-1); finite only because r_c > 0",
            RuntimeWarning,
            stacklevel=2,
        )
    x = r_c**2 / (4.0 * big_r**2)

    def tail_beta(p, q):
        # int_x^1 t^(p-1)(1-t)^(q-1) dt; finite for any real p since x > 0,
        # but only expressible through B - B_x when p > 0.
        if p > 0.0:
            return specfun.beta(p, q) - specfun.incomplete_beta(x, p, q)
        val, _ = integrate.quad(
            lambda t: t ** (p - 1.0) * (1.0 - t) ** (q - 1.0),
            x, 1.0, epsabs=0.0, epsrel=1e-13, limit=300, points=[1.0],
        )
        return val

    def h_val(order):
        # Integration by parts of s^(order+n-1) against the lens integral;
        # note the incomplete-beta argument order (n+order+1)/2 first.
        half = n / 2.0 + 0.5
        q1 = half + order / 2.0
        first = (2.0 * big_r) ** (n + order) / (n + order) * tail_beta(q1, half)
        second = r_c ** (n + order) / (n + order) * tail_beta(0.5, half)
        return first - second

    return h_val(m) / h_val(0)


# ---------------------------------------------------------------------------
# 2-shell sphere (n = 3)
# ---------------------------------------------------------------------------

def _two_shell_coeffs(big_r, rho1, rho2):
    """Polynomial coefficients {power: coefficient} for the four regions."""
    d = (rho1 + 7.0 * rho2) ** 2
    r = big_r
    return [
        {
            2: 24.0 * (rho1**2 + 7.0 * rho2**2) / (d * r**3),
            3: -36.0 * (rho1**2 - 2.0 * rho1 * rho2 + 5.0 * rho2**2) / (d * r**4),
            5: 12.0 * (rho1**2 - 2.0 * rho1 * rho2 + 2.0 * rho2**2) / (d * r**6),
        },
        {
            1: -81.0 * (rho1 - rho2) * rho2 / (2.0 * d * r**2),
            2: 24.0 * rho1 * (rho1 + 7.0 * rho2) / (d * r**3),
            3: -36.0 * rho1 * (rho1 + 3.0 * rho2) / (d * r**4),
            5: 12.0 * rho1**2 / (d * r**6),
        },
        {
            1: -81.0 * (rho1 - rho2) * rho2 / (2.0 * d * r**2),
            2: 24.0 * (9.0 * rho1 - rho2) * rho2 / (d * r**3),
            3: -36.0 * (5.0 * rho1 - rho2) * rho2 / (d * r**4),
            5: 12.0 * (2.0 * rho1 - rho2) * rho2 / (d * r**6),
        },
        {
            2: 192.0 * rho2**2 / (d * r**3),
            3: -144.0 * rho2**2 / (d * r**4),
            5: 12.0 * rho2**2 / (d * r**6),
        },
    ]


def _two_shell_region(big_r, s):
    # Boundaries belong to the left region, which continuity makes harmless
    # but fixes bitwise determinism.
    if s <= 0.5 * big_r:
        return 0
    if s <= big_r:
        return 1
    if s <= 1.5 * big_r:
        return 2
    return 3


def two_shell_pdf(big_r: float, rho1: float, rho2: float, s):
    """Distance PDF for the 3-d two-shell sphere of equal shell thickness.

    Inner shell [0, R/2] has density rho1, outer shell [R/2, R] rho2.  The
    PDF is piecewise polynomial over four regions of width R/2 and is
    continuous at the three interior boundaries.

    Parameters
    ----------
    big_r : float
        Outer radius R.
    rho1, rho2 : float
        Shell densities, nonnegative, not both zero.
    s : float or ndarray
        Distance(s) in [0, 2R].
    """
    if not big_r > 0.0:
        raise ValueError(f"radius must be positive, got {big_r}")
    if rho1 < 0.0 or rho2 < 0.0 or (rho1 == 0.0 and rho2 == 0.0):
        raise ValueError("shell densities must be nonnegative and not both zero")
    arr, scalar = _as_array(s)
    _check_support(arr, 0.0, 2.0 * big_r, "distance s")
    coeffs = _two_shell_coeffs(big_r, rho1, rho2)
    flat = arr.ravel()
    res = np.empty_like(flat)
    for i, si in enumerate(flat):
        if si == 2.0 * big_r:
            res[i] = 0.0
            continue
        poly = coeffs[_two_shell_region(big_r, si)]
        res[i] = sum(c * si**p for p, c in poly.items())
    out = np.where(res.reshape(arr.shape) < 0.0, 0.0, res.reshape(arr.shape))
    return float(out) if scalar else out


def two_shell_cdf(big_r: float, rho1: float, rho2: float, x):
    """CDF of the two-shell distance by exact piecewise polynomial integration."""
    if not big_r > 0.0:
        raise ValueError(f"radius must be positive, got {big_r}")
    coeffs = _two_shell_coeffs(big_r, rho1, rho2)
    edges = [0.0, 0.5 * big_r, big_r, 1.5 * big_r, 2.0 * big_r]

    def antideriv(poly, s):
        return sum(c / (p + 1.0) * s ** (p + 1) for p, c in poly.items())

    arr, scalar = _as_array(x)
    _check_support(arr, 0.0, 2.0 * big_r, "distance x")
    flat = arr.ravel()
    res = np.empty_like(flat)
    for i, xi in enumerate(flat):
        total = 0.0
        for r_idx in range(4):
            lo, hi = edges[r_idx], edges[r_idx + 1]
            if xi <= lo:
                break
            upper = min(xi, hi)
            total += antideriv(coeffs[r_idx], upper) - antideriv(coeffs[r_idx], lo)
        res[i] = total
    out = np.clip(res.reshape(arr.shape), 0.0, 1.0)
    return float(out) if scalar else out


# ---------------------------------------------------------------------------
# Distribution objects
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DistanceDistribution:
    """Evaluable pair-distance distribution with declared support and method.

    ``method`` is "closed-form" when every evaluation is analytic and
    "numeric" when the PDF comes from quadrature of a density overlap.
    """

    dim: int
    density: DensityModel
    support_max: float
    method: str
    geometry: Optional[BallGeometry] = None
    _pdf: Callable = field(repr=False, default=None)
    _cdf: Callable = field(repr=False, default=None)
    _moment: Callable = field(repr=False, default=None)

    def pdf(self, s):
        return self._pdf(s)

    def cdf(self, x):
        return self._cdf(x)

    def moment(self, m):
        return self._moment(m)


def _numeric_moment(pdf, upper, m):
    val, _ = integrate.quad(
        lambda s: s**m * pdf(s), 0.0 if m >= 0 else 1e-12 * upper, upper,
        epsabs=1e-12, epsrel=1e-10, limit=300,
    )
    return val


def make_distribution(geom: Optional[BallGeometry], density: DensityModel,
                      dim: Optional[int] = None) -> DistanceDistribution:
    """Build the DistanceDistribution for a geometry/density pair.

    Uniform balls, untruncated Gaussian space (``geom=None`` plus ``dim``),
    and the 3-d equal-thickness 2-shell model evaluate in closed form;
    other spherically symmetric densities fall back to quadrature of the
    overlap integral.  General densities are not supported here (their PDF
    is a Monte Carlo estimate; see ``master.general_pdf_mc``).
    """
    if isinstance(density, GaussianDensity) and geom is None:
        if dim is None:
            raise ValueError("Gaussian space needs an explicit dimension")
        sig = density.sigma
        return DistanceDistribution(
            dim=dim, density=density, support_max=math.inf, method="closed-form",
            geometry=None,
            _pdf=lambda s: gaussian_pdf(dim, sig, s),
            _cdf=lambda x: _gaussian_cdf(dim, sig, x),
            _moment=lambda m: gaussian_moment(dim, sig, m),
        )
    if geom is None:
        raise ValueError("bounded densities need a BallGeometry")
    if isinstance(density, UniformDensity):
        return DistanceDistribution(
            dim=geom.dim, density=density, support_max=2.0 * geom.radius,
            method="closed-form", geometry=geom,
            _pdf=lambda s: uniform_pdf(geom, s),
            _cdf=lambda x: uniform_cdf(geom, x),
            _moment=lambda m: uniform_moment(geom, m),
        )
    if (
        isinstance(density, RadialShellsDensity)
        and geom.dim == 3
        and len(density.densities) == 2
        and abs(density.breakpoints[0] - 0.5 * geom.radius) < 1e-12 * geom.radius
        and abs(density.breakpoints[1] - geom.radius) < 1e-12 * geom.radius
    ):
        r1, r2 = density.densities
        return DistanceDistribution(
            dim=3, density=density, support_max=2.0 * geom.radius,
            method="closed-form", geometry=geom,
            _pdf=lambda s: two_shell_pdf(geom.radius, r1, r2, s),
            _cdf=lambda x: two_shell_cdf(geom.radius, r1, r2, x),
            _moment=lambda m: _numeric_moment(
                lambda s: two_shell_pdf(geom.radius, r1, r2, s), 2.0 * geom.radius, m
            ),
        )
    if isinstance(density, (RadialShellsDensity, RadialProfileDensity, GaussianDensity)):
        from . import master  # deferred; master depends on this module

        rho = radial_density_callable(density)
        breaks = (
            density.breakpoints if isinstance(density, RadialShellsDensity) else ()
        )
        pdf = lambda s: master.symmetric_pdf(geom, rho, s, radial_breaks=breaks)  # noqa: E731
        upper = 2.0 * geom.radius
        return DistanceDistribution(
            dim=geom.dim, density=density, support_max=upper, method="numeric",
            geometry=geom,
            _pdf=pdf,
            _cdf=lambda x: integrate.quad(pdf, 0.0, x, epsabs=1e-10, limit=200)[0],
            _moment=lambda m: _numeric_moment(pdf, upper, m),
        )
    raise ValueError(
        f"no distance distribution for density {type(density).__name__}; "
        "general densities are estimated by master.general_pdf_mc"
    )


def _gaussian_cdf(dim, sigma, x):
    """Gaussian-space distance CDF by quadrature, truncated at 40 sigma."""
    arr, scalar = _as_array(x)
    if np.any(arr < 0.0):
        raise ValueError("distance x must be nonnegative")
    cap = 40.0 * sigma
    flat = arr.ravel()
    res = np.empty_like(flat)
    for i, xi in enumerate(flat):
        val, _ = integrate.quad(
            lambda s: gaussian_pdf(dim, sigma, s), 0.0, min(xi, cap),
            epsabs=1e-12, epsrel=1e-10, limit=200,
        )
        res[i] = min(val, 1.0)
    out = res.reshape(arr.shape)
    return float(out) if scalar else out


def radial_density_callable(density: DensityModel) -> Callable:
    """Radial profile rho(r) for any spherically symmetric density model."""
    if isinstance(density, UniformDensity):
        return lambda r: 1.0
    if isinstance(density, GaussianDensity):
        sig = density.sigma
        return lambda r: math.exp(-(r * r) / (2.0 * sig * sig))
    if isinstance(density, RadialShellsDensity):
        bp, de = density.breakpoints, density.densities

        def shells(r):
            for b, d in zip(bp, de):
                if r <= b:
                    return d
            return 0.0

        return shells
    if isinstance(density, RadialProfileDensity):
        return density.rho_of_r
    raise ValueError(f"{type(density).__name__} is not spherically symmetric")
