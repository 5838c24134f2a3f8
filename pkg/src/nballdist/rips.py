"""RIPS: the random-inner-product randomness test and its exact constants.

The statistic is the sample mean of (r2 - r1).(r3 - r2) over independent
point triples in an n-ball.  For ideal uniform sampling it equals
-n R^2 / (n + 2); for an isotropic Gaussian cloud it equals -n sigma^2.
A generator fails when its empirical mean sits many standard errors away
from the exact constant.
"""

import csv
import io
import json
from dataclasses import dataclass, asdict
from typing import Optional, Sequence

import numpy as np

from . import rng as rng_mod
from .distributions import BallGeometry, GaussianDensity, UniformDensity
from .sampling import BallSampler

_TRIPLE_CHUNK = 32768


def rips_exact_uniform(dim: int, radius: float = 1.0) -> float:
    """Exact <r12.r23> = -n R^2/(n+2) for the uniform n-ball."""
    if dim < 1 or int(dim) != dim:
        raise ValueError(f"dimension must be an integer >= 1, got {dim}")
    if not radius > 0.0:
        raise ValueError(f"radius must be positive, got {radius}")
    return -dim * radius**2 / (dim + 2.0)


def rips_exact_gaussian(dim: int, sigma: float = 1.0) -> float:
    """Exact <r12.r23> = -n sigma^2 for isotropic Gaussian space."""
    if dim < 1 or int(dim) != dim:
        raise ValueError(f"dimension must be an integer >= 1, got {dim}")
    if not sigma > 0.0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    return -float(dim) * sigma**2


@dataclass(frozen=True)
class RipsReport:
    """Outcome of one RIPS run, serializable to JSON or a CSV row."""

    dim: int
    density: str
    scale: float  # radius for uniform, sigma for gaussian
    n_triples: int
    empirical_mean: float
    stderr: float
    exact_value: float
    z_score: float
    verdict: str
    rng: dict
    mapping: str
    shards: int
    variates_drawn: int
    z_threshold: float
    error: Optional[str] = None

    CSV_HEADER = (
        "algorithm,dim,density,scale,n_triples,empirical_mean,stderr,"
        "exact_value,z_score,verdict,mapping,shards,variates_drawn,error"
    )

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    def csv_row(self) -> str:
        buf = io.StringIO()
        csv.writer(buf, lineterminator="").writerow([
            self.rng.get("algorithm"), self.dim, self.density, repr(self.scale),
            self.n_triples, repr(self.empirical_mean), repr(self.stderr),
            repr(self.exact_value), repr(self.z_score), self.verdict,
            self.mapping, self.shards, self.variates_drawn, self.error or "",
        ])
        return buf.getvalue()


def _merge_stats(stats_a, stats_b):
    # Chan's pairwise combination of (count, mean, M2); stable across 10^6
    # terms and across shard merges.
    n_a, mean_a, m2_a = stats_a
    n_b, mean_b, m2_b = stats_b
    if n_b == 0:
        return stats_a
    if n_a == 0:
        return stats_b
    n = n_a + n_b
    delta = mean_b - mean_a
    mean = mean_a + delta * (n_b / n)
    m2 = m2_a + m2_b + delta * delta * (n_a * n_b / n)
    return n, mean, m2


def _run_shard(dim, density_tag, scale, engine, n_triples, mapping):
    geom = BallGeometry(dim, scale if density_tag == "uniform" else 1.0)
    if density_tag == "uniform":
        sampler = BallSampler(geom, UniformDensity(), engine, method=mapping)
    else:
        sampler = BallSampler(geom, GaussianDensity(scale), engine)
    stats = (0, 0.0, 0.0)
    done = 0
    while done < n_triples:
        k = min(n_triples - done, _TRIPLE_CHUNK)
        pts = sampler.points(3 * k).reshape(k, 3, dim)
        dots = np.einsum(
            "ij,ij->i", pts[:, 1] - pts[:, 0], pts[:, 2] - pts[:, 1]
        )
        mean_b = float(dots.mean())
        m2_b = float(((dots - mean_b) ** 2).sum())
        stats = _merge_stats(stats, (k, mean_b, m2_b))
        done += k
    return stats


def rips_run(dim: int, engine, n_triples: int, *, density: str = "uniform",
             radius: float = 1.0, sigma: float = 1.0,
             mapping: str = "rejection", z_threshold: float = 4.0,
             shards: int = 1) -> RipsReport:
    """Run RIPS with a given engine and return the report.

    Draws 3 * n_triples points (``mapping`` selects the uniform-ball point
    construction; Gaussian densities always use Box-Muller draws), then
    accumulates the inner-product mean and variance in a stable single pass.
    Verdict is "pass" iff |z| <= z_threshold.  With ``shards`` > 1 the
    triples are split over that many derived substream engines and pooled;
    the result depends on the shard count but not on execution order.
    """
    if n_triples < 2:
        raise ValueError("need at least 2 triples")
    if density not in ("uniform", "gaussian"):
        raise ValueError(f"density must be 'uniform' or 'gaussian', got {density!r}")
    scale = radius if density == "uniform" else sigma
    exact = (
        rips_exact_uniform(dim, radius)
        if density == "uniform"
        else rips_exact_gaussian(dim, sigma)
    )
    engines = [engine] if shards == 1 else rng_mod.split(engine, shards)
    per = [n_triples // shards] * shards
    for i in range(n_triples % shards):
        per[i] += 1
    stats = (0, 0.0, 0.0)
    error = None
    try:
        for sub, count in zip(engines, per):
            if count:
                stats = _merge_stats(
                    stats, _run_shard(dim, density, scale, sub, count, mapping)
                )
    except Exception as exc:  # report sampler/stream failures, do not hide them
        error = f"{type(exc).__name__}: {exc}"
    count, mean, m2 = stats
    if error is not None or count < 2:
        return RipsReport(
            dim=dim, density=density, scale=scale, n_triples=count,
            empirical_mean=float("nan"), stderr=float("nan"),
            exact_value=exact, z_score=float("nan"), verdict="fail",
            rng=engine.describe(), mapping=mapping, shards=shards,
            variates_drawn=sum(e.draws for e in engines),
            z_threshold=z_threshold, error=error or "insufficient samples",
        )
    stderr = float(np.sqrt(m2 / (count - 1) / count))
    z = (mean - exact) / stderr
    return RipsReport(
        dim=dim, density=density, scale=scale, n_triples=count,
        empirical_mean=mean, stderr=stderr, exact_value=exact,
        z_score=z, verdict="pass" if abs(z) <= z_threshold else "fail",
        rng=engine.describe(), mapping=mapping, shards=shards,
        variates_drawn=sum(e.draws for e in engines),
        z_threshold=z_threshold,
    )


def default_mapping(dim: int) -> str:
    """Rejection below dimension 8; polar above, where cube acceptance collapses."""
    return "rejection" if dim < 8 else "polar"


@dataclass(frozen=True)
class RipsTable:
    """Reports for a generator-by-dimension comparison grid."""

    dims: tuple
    reports: tuple  # reports[i][j] for engine i, dimension j
    radius: float

    def format_table(self) -> str:
        """Fixed-width text table mirroring the generator-comparison layout."""
        lines = []
        header = ["RNG"] + [f"n={d}" + " " * 14 + "Result" for d in self.dims]
        lines.append(" | ".join(f"{h:<24}" if i else f"{h:<10}"
                                for i, h in enumerate(header)))
        for row in self.reports:
            cells = [f"{row[0].rng.get('algorithm', '?'):<10}"]
            for rep in row:
                if rep.error is not None:
                    cells.append(f"{'error: ' + rep.error:<24}")
                    continue
                val = f"{rep.empirical_mean:.5f} +/- {rep.stderr:.5f}"
                cells.append(f"{val:<17} {rep.verdict:<6}")
            lines.append(" | ".join(cells))
        exact = [f"{rips_exact_uniform(d, self.radius):.5f}" for d in self.dims]
        lines.append(" | ".join([f"{'Exact':<10}"] + [f"{e:<24}" for e in exact]))
        return "\n".join(lines)

    def to_csv(self, path_or_file):
        close = False
        if isinstance(path_or_file, (str, bytes)):
            fh = open(path_or_file, "w")
            close = True
        else:
            fh = path_or_file
        try:
            fh.write(RipsReport.CSV_HEADER + "\n")
            for row in self.reports:
                for rep in row:
                    fh.write(rep.csv_row() + "\n")
        finally:
            if close:
                fh.close()

    def all_pass(self) -> bool:
        return all(rep.verdict == "pass" for row in self.reports for rep in row)


def table1_harness(engines: Sequence, dims: Sequence[int] = (3, 5, 10),
                   n_triples: int = 10**6, mapping: Optional[str] = None,
                   radius: float = 1.0, z_threshold: float = 4.0) -> RipsTable:
    """Run every engine at every dimension and tabulate the comparison.

    ``mapping=None`` picks the per-dimension default (rejection for low n,
    polar for n >= 8).  Per-cell failures are recorded in the report rather
    than aborting the table.
    """
    if not engines:
        raise ValueError("need at least one engine")
    rows = []
    for engine in engines:
        row = []
        for dim in dims:
            cell_mapping = mapping or default_mapping(dim)
            row.append(
                rips_run(dim, engine, n_triples, density="uniform",
                         radius=radius, mapping=cell_mapping,
                         z_threshold=z_threshold)
            )
        rows.append(tuple(row))
    return RipsTable(dims=tuple(dims), reports=tuple(rows), radius=radius)
