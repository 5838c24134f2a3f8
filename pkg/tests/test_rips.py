import io
import json
import math

import numpy as np
import pytest
from scipy import integrate

from nballdist import rips, rng


class NumpyEngine:
    """High-quality reference engine (PCG64) behind the uniform interface."""

    algorithm = "numpy-pcg64"

    def __init__(self, seed):
        self._gen = np.random.default_rng(seed)
        self._drawn = 0

    def uniforms(self, count):
        self._drawn += count
        return self._gen.random(count)

    @property
    def draws(self):
        return self._drawn

    def describe(self):
        return {"algorithm": self.algorithm, "draws": self.draws}


def test_exact_uniform_values():
    assert rips.rips_exact_uniform(3, 1.0) == pytest.approx(-0.60000, abs=5e-6)
    assert rips.rips_exact_uniform(5, 1.0) == pytest.approx(-0.71429, abs=5e-6)
    assert rips.rips_exact_uniform(10, 1.0) == pytest.approx(-0.83333, abs=5e-6)
    assert rips.rips_exact_uniform(3, 2.0) == pytest.approx(-2.4, rel=1e-14)


def test_exact_uniform_equals_negative_radial_second_moment():
    # <r^2> for the uniform ball radial law n r^(n-1)/R^n, by quadrature
    for n in [1, 2, 3, 7, 12]:
        for big_r in [1.0, 2.5]:
            val, _ = integrate.quad(
                lambda r: r**2 * n * r ** (n - 1) / big_r**n, 0.0, big_r
            )
            assert rips.rips_exact_uniform(n, big_r) == pytest.approx(
                -val, rel=1e-12
            )


def test_exact_uniform_monotone_and_bounded():
    vals = [rips.rips_exact_uniform(n, 1.0) for n in range(1, 60)]
    assert all(b < a for a, b in zip(vals, vals[1:]))
    assert all(v > -1.0 for v in vals)


def test_exact_gaussian_values():
    assert rips.rips_exact_gaussian(3, 1.0) == -3.0
    assert rips.rips_exact_gaussian(1, 2.0) == -4.0


def test_exact_domain():
    with pytest.raises(ValueError):
        rips.rips_exact_uniform(0, 1.0)
    with pytest.raises(ValueError):
        rips.rips_exact_uniform(3, -1.0)
    with pytest.raises(ValueError):
        rips.rips_exact_gaussian(3, 0.0)


def test_inner_product_equals_negative_r2_identity():
    # For any zero-mean isotropic cloud, <r12.r23> = -<r^2>; check the two
    # empirical estimates against each other with a reference engine.
    for dim in [2, 3, 5]:
        eng = NumpyEngine(dim)
        n_triples = 10**5
        from nballdist.distributions import BallGeometry, UniformDensity
        from nballdist.sampling import BallSampler

        sampler = BallSampler(BallGeometry(dim, 1.0), UniformDensity(), eng)
        pts = sampler.points(3 * n_triples).reshape(n_triples, 3, dim)
        dots = np.einsum("ij,ij->i", pts[:, 1] - pts[:, 0], pts[:, 2] - pts[:, 1])
        r2 = np.einsum("ijk,ijk->ij", pts, pts).ravel()
        se = math.hypot(dots.std(ddof=1) / math.sqrt(dots.size),
                        r2.std(ddof=1) / math.sqrt(r2.size))
        assert abs(dots.mean() + r2.mean()) <= 4 * se


def test_rips_run_uniform_passes_for_good_engine():
    rep = rips.rips_run(3, rng.Ran0Engine(1), 10**5)
    assert rep.verdict == "pass"
    assert abs(rep.empirical_mean - (-0.6)) <= 4 * rep.stderr
    assert rep.exact_value == pytest.approx(-0.6, rel=1e-14)
    assert rep.n_triples == 10**5
    assert rep.rng["algorithm"] == "ran0"
    assert rep.variates_drawn > 3 * 10**5


def test_rips_run_gaussian_density():
    rep = rips.rips_run(3, rng.Ran0Engine(2), 10**5, density="gaussian", sigma=1.0)
    assert rep.exact_value == -3.0
    assert rep.verdict == "pass"


def test_rips_run_nws_fails_decisively():
    rep = rips.rips_run(3, rng.NwsEngine(0), 10**5)
    assert rep.verdict == "fail"
    assert abs(rep.z_score) > 10


def test_rips_report_determinism():
    a = rips.rips_run(2, rng.Ran0Engine(5), 10**4).to_json()
    b = rips.rips_run(2, rng.Ran0Engine(5), 10**4).to_json()
    assert a == b


def test_rips_sharded_run():
    rep = rips.rips_run(3, rng.Ran0Engine(9), 4 * 10**4, shards=4)
    assert rep.shards == 4
    assert rep.n_triples == 4 * 10**4
    assert rep.verdict == "pass"
    rep2 = rips.rips_run(3, rng.Ran0Engine(9), 4 * 10**4, shards=4)
    assert rep.to_json() == rep2.to_json()


def test_rips_error_recorded_not_raised():
    words = np.arange(1, 50_000, dtype="<u8")
    eng = rng.ExternalStreamEngine(io.BytesIO(words.tobytes()), label="short")
    rep = rips.rips_run(3, eng, 10**5)
    assert rep.error is not None
    assert "exhausted" in rep.error
    assert rep.verdict == "fail"


def test_rips_validation():
    with pytest.raises(ValueError):
        rips.rips_run(3, rng.Ran0Engine(1), 1)
    with pytest.raises(ValueError):
        rips.rips_run(3, rng.Ran0Engine(1), 10**4, density="lognormal")


def test_report_serialization_roundtrip():
    rep = rips.rips_run(2, rng.Ran0Engine(4), 10**4)
    payload = json.loads(rep.to_json())
    assert payload["dim"] == 2
    assert payload["verdict"] == rep.verdict
    row = rep.csv_row()
    assert row.startswith("ran0,2,uniform,")
    assert len(row.split(",")) == len(rips.RipsReport.CSV_HEADER.split(","))


def test_default_mapping_switchover():
    assert rips.default_mapping(3) == "rejection"
    assert rips.default_mapping(5) == "rejection"
    assert rips.default_mapping(10) == "polar"


def test_table_harness_layout():
    engines = [rng.Ran0Engine(1), rng.R31Engine.from_seed(1), rng.NwsEngine(0)]
    table = rips.table1_harness(engines, dims=(3, 5), n_triples=2 * 10**4)
    assert len(table.reports) == 3
    assert all(len(row) == 2 for row in table.reports)
    text = table.format_table()
    assert "-0.60000" in text and "-0.71429" in text
    assert "Exact" in text
    assert not table.all_pass()  # the nested Weyl rows fail
    buf = io.StringIO()
    table.to_csv(buf)
    lines = buf.getvalue().strip().splitlines()
    assert lines[0] == rips.RipsReport.CSV_HEADER
    assert len(lines) == 1 + 6


def test_table_harness_needs_engines():
    with pytest.raises(ValueError):
        rips.table1_harness([], dims=(3,))


def test_rips_sharded_all_engine_kinds():
    for make in [lambda: rng.Ran0Engine(9), lambda: rng.R31Engine.from_seed(9),
                 lambda: rng.NwsEngine(9)]:
        a = rips.rips_run(3, make(), 10**4, shards=3)
        b = rips.rips_run(3, make(), 10**4, shards=3)
        assert a.to_json() == b.to_json()
        assert a.shards == 3
