"""Point samplers over n-balls, distance histograms, and KS goodness of fit.

Samplers consume a caller-supplied uniform engine so that randomness tests
see the raw stream: rejection-in-cube preserves stream defects best and is
the default; the polar method (Box-Muller direction plus a radial power law)
is the fallback for high dimensions where cube rejection stalls.  Every
sampler is a deterministic function of the engine state and the requested
sizes.
"""

import math
from dataclasses import dataclass

import numpy as np

from .distributions import (
    BallGeometry,
    DensityModel,
    GaussianDensity,
    GeneralDensity,
    RadialProfileDensity,
    RadialShellsDensity,
    UniformDensity,
    radial_density_callable,
)
from .errors import ConfigurationError, StreamDefectError

_REJECTION_CAP = 10**6
_CHUNK = 65536
_BOUND_SCAN_KNOTS = 4097


def _box_muller(engine, count, n):
    """``count`` points of ``n`` standard normals each.

    Consumes exactly 2*ceil(n/2) variates per point (two per Box-Muller
    pair); for odd n the second normal of the last pair is discarded.
    Zero uniforms are clamped to 2^-64 to keep the log finite.
    """
    pairs = (n + 1) // 2
    u = engine.uniforms(count * 2 * pairs).reshape(count, 2 * pairs)
    u1 = np.maximum(u[:, 0::2], 2.0**-64)
    u2 = u[:, 1::2]
    r = np.sqrt(-2.0 * np.log(u1))
    z = np.empty((count, 2 * pairs))
    z[:, 0::2] = r * np.cos(2.0 * np.pi * u2)
    z[:, 1::2] = r * np.sin(2.0 * np.pi * u2)
    return z[:, :n]


def _density_values(density, pts):
    """Evaluate a density model on an (k, n) array of points."""
    if isinstance(density, GeneralDensity):
        try:
            vals = np.asarray(density.rho_of_x(pts), dtype=float)
            if vals.shape == (pts.shape[0],):
                return vals
        except ConfigurationError:
            raise
        except Exception:
            pass  # not vectorized; evaluate row by row
        return np.array(
            [float(np.asarray(density.rho_of_x(p)).ravel()[0]) for p in pts]
        )
    rho = radial_density_callable(density)
    radii = np.linalg.norm(pts, axis=1)
    try:
        vals = np.asarray(rho(radii), dtype=float)
        if vals.shape == radii.shape:
            return vals
    except Exception:
        pass
    return np.array([float(rho(r)) for r in radii])


def _rejection_bound(geom, density):
    if density.bound is not None:
        if not density.bound > 0.0:
            raise ConfigurationError(f"density bound must be positive, got {density.bound}")
        return float(density.bound)
    if isinstance(density, GeneralDensity):
        raise ConfigurationError(
            "general densities need an explicit bound for rejection sampling"
        )
    # Radial profiles can be scanned reliably on a fine 1-d grid.
    grid = np.linspace(0.0, geom.radius, _BOUND_SCAN_KNOTS)
    rho = radial_density_callable(density)
    vals = np.array([float(rho(r)) for r in grid])
    if np.any(vals < 0.0) or not np.all(np.isfinite(vals)):
        raise ConfigurationError("radial profile must be finite and nonnegative")
    peak = float(vals.max())
    if peak <= 0.0:
        raise ConfigurationError("radial profile vanishes on the scan grid")
    return peak * 1.01


class BallSampler:
    """Streams points with a chosen density from one uniform engine.

    Keeping the sampler as an object preserves the candidate-to-point
    mapping across calls: rejection candidates are scanned in stream order
    and surplus accepted points are buffered for the next request.
    """

    def __init__(self, geom: BallGeometry, density: DensityModel, engine,
                 method: str = "rejection", truncate: bool = False):
        if method not in ("rejection", "polar"):
            raise ConfigurationError(f"unknown sampling method {method!r}")
        self.geom = geom
        self.density = density
        self.engine = engine
        self.method = method
        self.truncate = truncate
        self._leftover = np.empty((0, geom.dim))
        if isinstance(density, (RadialProfileDensity, GeneralDensity)):
            self._bound = _rejection_bound(geom, density)
        else:
            self._bound = None

    def points(self, count: int) -> np.ndarray:
        """Next ``count`` points as a (count, dim) array."""
        out = np.empty((count, self.geom.dim))
        take = min(self._leftover.shape[0], count)
        if take:
            out[:take] = self._leftover[:take]
            self._leftover = self._leftover[take:]
        got = take
        while got < count:
            chunk = self._next_chunk(count - got)
            use = min(chunk.shape[0], count - got)
            out[got : got + use] = chunk[:use]
            if use < chunk.shape[0]:
                self._leftover = chunk[use:]
            got += use
        return out

    def _next_chunk(self, need):
        density = self.density
        if isinstance(density, UniformDensity):
            if self.method == "polar":
                return self._polar_uniform(min(need, _CHUNK))
            return self._rejection(min(max(need, 1024), _CHUNK), None)
        if isinstance(density, GaussianDensity):
            return self._gaussian(min(max(need, 256), _CHUNK))
        if isinstance(density, RadialShellsDensity):
            return self._shells(min(need, _CHUNK))
        return self._rejection(min(max(need, 1024), _CHUNK), self._bound)

    def _rejection(self, want, bound):
        n, big_r = self.geom.dim, self.geom.radius
        rejected_run = 0
        while True:
            k = want if bound is None else max(want, 4096)
            u = self.engine.uniforms(k * n).reshape(k, n)
            pts = (2.0 * u - 1.0) * big_r
            ok = np.einsum("ij,ij->i", pts, pts) <= big_r * big_r
            if bound is not None:
                # One more variate per candidate decides density acceptance.
                accept_u = self.engine.uniforms(k)
                vals = np.zeros(k)
                if np.any(ok):
                    vals[ok] = _density_values(self.density, pts[ok])
                if np.any(vals > bound * (1.0 + 1e-12)):
                    raise ConfigurationError(
                        "density exceeds its declared rejection bound; "
                        f"observed {vals.max():g} > {bound:g}"
                    )
                ok &= accept_u * bound < vals
            if np.any(ok):
                return pts[ok]
            rejected_run += k
            if rejected_run > _REJECTION_CAP:
                raise StreamDefectError(
                    f"no acceptance in {rejected_run} candidates; "
                    "the variate stream looks defective"
                )

    def _polar_uniform(self, count):
        n, big_r = self.geom.dim, self.geom.radius
        z = _box_muller(self.engine, count, n)
        u = self.engine.uniforms(count)
        norms = np.linalg.norm(z, axis=1)
        norms[norms == 0.0] = 1.0
        radii = big_r * u ** (1.0 / n)
        return z * (radii / norms)[:, None]

    def _gaussian(self, count):
        sigma = self.density.sigma
        big_r = self.geom.radius
        rejected_run = 0
        while True:
            pts = sigma * _box_muller(self.engine, count, self.geom.dim)
            if not self.truncate:
                return pts
            ok = np.einsum("ij,ij->i", pts, pts) <= big_r * big_r
            if np.any(ok):
                return pts[ok]
            rejected_run += count
            if rejected_run > _REJECTION_CAP:
                raise StreamDefectError(
                    f"no acceptance in {rejected_run} truncated-Gaussian draws"
                )

    def _shells(self, count):
        n, big_r = self.geom.dim, self.geom.radius
        bp = np.concatenate(([0.0], self.density.breakpoints))
        masses = np.array(self.density.densities) * np.diff(bp**n)
        cum = np.cumsum(masses) / masses.sum()
        # Per point: one uniform picks the shell, 2*ceil(n/2) make the
        # direction, one more sets the radius inside the shell.
        shell_u = self.engine.uniforms(count)
        idx = np.searchsorted(cum, shell_u, side="right").clip(0, len(masses) - 1)
        z = _box_muller(self.engine, count, n)
        norms = np.linalg.norm(z, axis=1)
        norms[norms == 0.0] = 1.0
        radius_u = self.engine.uniforms(count)
        lo = bp[idx] ** n
        hi = bp[idx + 1] ** n
        radii = (lo + radius_u * (hi - lo)) ** (1.0 / n)
        return z * (radii / norms)[:, None]


def sample_ball_uniform(geom: BallGeometry, engine, method: str = "rejection",
                        size: int = 1) -> np.ndarray:
    """Uniform points in the ball; (size, dim) array.

    ``rejection`` draws dim uniforms in the bounding cube until the point
    falls inside the ball (cap 10^6 candidates); ``polar`` scales an
    isotropic Box-Muller direction by R * U^(1/dim).
    """
    return BallSampler(geom, UniformDensity(), engine, method=method).points(size)


def sample_density(geom: BallGeometry, density: DensityModel, engine,
                   size: int = 1, truncate: bool = False) -> np.ndarray:
    """Points distributed proportionally to ``density`` over the ball.

    Gaussian densities are drawn directly from normals (untruncated by
    default, matching the infinite-space convention; pass ``truncate=True``
    to clip at the ball); shell densities pick a shell by mass then place
    the point uniformly inside it; profile and general densities use
    rejection against their declared or scanned bound.
    """
    return BallSampler(geom, density, engine, truncate=truncate).points(size)


@dataclass(frozen=True)
class HistogramEstimate:
    """Counts of pair distances over fixed bins."""

    bin_edges: np.ndarray
    counts: np.ndarray
    total: int

    def __post_init__(self):
        if self.counts.sum() != self.total:
            raise ValueError("histogram counts do not add up to the total")
        if np.any(np.diff(self.bin_edges) <= 0.0):
            raise ValueError("bin edges must be strictly ascending")

    def density_values(self):
        """Per-bin PDF estimates and their multinomial standard errors."""
        widths = np.diff(self.bin_edges)
        p = self.counts / self.total
        dens = p / widths
        err = np.sqrt(p * (1.0 - p) / self.total) / widths
        return dens, err

    def to_csv(self, path_or_file):
        """Write bin_lo, bin_hi, count rows."""
        close = False
        if isinstance(path_or_file, (str, bytes)):
            fh = open(path_or_file, "w")
            close = True
        else:
            fh = path_or_file
        try:
            fh.write("bin_lo,bin_hi,count\n")
            for lo, hi, c in zip(self.bin_edges[:-1], self.bin_edges[1:], self.counts):
                fh.write(f"{float(lo)!r},{float(hi)!r},{int(c)}\n")
        finally:
            if close:
                fh.close()


def pair_distance_histogram(geom: BallGeometry, density: DensityModel,
                            pairs: int, bins: int, engine,
                            method: str = "rejection") -> HistogramEstimate:
    """Histogram of |p2 - p1| over independent point pairs.

    The bin range is [0, 2R] for bounded densities and [0, 8 sigma] for
    Gaussian space.
    """
    if pairs < 1:
        raise ValueError("need at least one pair")
    if isinstance(density, GaussianDensity):
        top = 8.0 * density.sigma
    else:
        top = 2.0 * geom.radius
    edges = np.linspace(0.0, top, bins + 1)
    counts = np.zeros(bins, dtype=np.int64)
    sampler = BallSampler(geom, density, engine, method=method)
    done = 0
    while done < pairs:
        k = min(pairs - done, _CHUNK)
        pts = sampler.points(2 * k).reshape(k, 2, geom.dim)
        dist = np.linalg.norm(pts[:, 1] - pts[:, 0], axis=1)
        counts += np.histogram(dist, bins=edges)[0]
        done += k
    return HistogramEstimate(bin_edges=edges, counts=counts, total=int(counts.sum()))


@dataclass(frozen=True)
class KsResult:
    statistic: float
    n_eff: int
    alpha: float
    critical: float
    passed: bool


def _ks_critical(alpha):
    # Asymptotic one-sample critical coefficient: c(0.01)=1.628, c(0.05)=1.358.
    return math.sqrt(-0.5 * math.log(alpha / 2.0))


def ks_test(data, analytic_cdf, alpha: float = 0.01) -> KsResult:
    """One-sample Kolmogorov-Smirnov test against an analytic CDF.

    ``data`` may be a 1-d array of samples or a HistogramEstimate (then the
    comparison runs on the bin edges).  Passes iff D <= c(alpha)/sqrt(N).
    """
    if isinstance(data, HistogramEstimate):
        n_eff = data.total
        if n_eff < 2:
            raise ValueError("degenerate sample set")
        ecdf = np.concatenate(([0.0], np.cumsum(data.counts))) / n_eff
        model = np.array([float(analytic_cdf(x)) for x in data.bin_edges])
        stat = float(np.max(np.abs(ecdf - model)))
    else:
        samples = np.sort(np.asarray(data, dtype=float).ravel())
        n_eff = samples.size
        if n_eff < 2 or samples[0] == samples[-1]:
            raise ValueError("degenerate sample set")
        model = np.asarray(analytic_cdf(samples), dtype=float)
        if model.shape != samples.shape:
            model = np.array([float(analytic_cdf(x)) for x in samples])
        grid = np.arange(1, n_eff + 1) / n_eff
        stat = float(max(np.max(grid - model), np.max(model - (grid - 1.0 / n_eff))))
    crit = _ks_critical(alpha) / math.sqrt(n_eff)
    return KsResult(statistic=stat, n_eff=n_eff, alpha=alpha, critical=crit,
                    passed=stat <= crit)


def ks_two_sample(first, second, alpha: float = 0.01) -> KsResult:
    """Two-sample KS distance with the asymptotic critical value."""
    a = np.sort(np.asarray(first, dtype=float).ravel())
    b = np.sort(np.asarray(second, dtype=float).ravel())
    if a.size < 2 or b.size < 2:
        raise ValueError("degenerate sample set")
    merged = np.concatenate((a, b))
    cdf_a = np.searchsorted(a, merged, side="right") / a.size
    cdf_b = np.searchsorted(b, merged, side="right") / b.size
    stat = float(np.max(np.abs(cdf_a - cdf_b)))
    n_eff = a.size * b.size // (a.size + b.size)
    crit = _ks_critical(alpha) * math.sqrt((a.size + b.size) / (a.size * b.size))
    return KsResult(statistic=stat, n_eff=int(n_eff), alpha=alpha, critical=crit,
                    passed=stat <= crit)


def radial_mass_cdf(geom: BallGeometry, density: DensityModel, r):
    """Mass-weighted radial CDF int_0^r rho t^(n-1) dt / int_0^R, by quadrature."""
    from scipy import integrate

    rho = radial_density_callable(density)
    n, big_r = geom.dim, geom.radius
    total, _ = integrate.quad(lambda t: rho(t) * t ** (n - 1), 0.0, big_r, limit=200)
    arr = np.atleast_1d(np.asarray(r, dtype=float))
    out = np.empty_like(arr)
    for i, ri in enumerate(arr):
        val, _ = integrate.quad(
            lambda t: rho(t) * t ** (n - 1), 0.0, min(ri, big_r), limit=200
        )
        out[i] = val / total
    return float(out[0]) if np.isscalar(r) or np.asarray(r).ndim == 0 else out
