"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines; the heavy Monte Carlo criteria use the frozen default seeds recorded
here so reruns are bit-identical.
"""

import math

import numpy as np
import pytest
from scipy import integrate

from nballdist import master, physics, rips, rng, sampling
from nballdist import distributions as d

G3 = d.BallGeometry(3, 1.0)


def report(num, name, ok, detail=""):
    status = "PASS" if ok else "FAIL"
    print(f"ACCEPTANCE {num:02d} [{name}]: {status}{detail}")
    assert ok, f"criterion {num} ({name}) failed{detail}"


# ---------------------------------------------------------------------------
# 1. Generator-comparison table for RAN0 and R31 at N = 10^6
# ---------------------------------------------------------------------------

def test_criterion_01_table_ran0_r31():
    exact = {3: -0.60000, 5: -0.71429, 10: -0.83333}
    details = []
    ok = True
    for algorithm in ("ran0", "r31"):
        for dim in (3, 5, 10):
            engine = rng.make_engine(algorithm, 1)
            mapping = "polar" if dim == 10 else "rejection"
            rep = rips.rips_run(dim, engine, 10**6, mapping=mapping)
            dev = abs(rep.empirical_mean - rips.rips_exact_uniform(dim, 1.0))
            cell_ok = (
                dev <= 4.0 * rep.stderr
                and abs(rep.exact_value - exact[dim]) <= 5e-6
                and rep.verdict == "pass"
            )
            if dim == 3:
                cell_ok &= 4e-4 <= rep.stderr <= 9e-4  # the +/-0.00065 scale
            ok &= cell_ok
            details.append(
                f"{algorithm} n={dim}: {rep.empirical_mean:+.5f}+/-{rep.stderr:.5f}"
                f" (z={rep.z_score:+.2f})"
            )
    report(1, "generator table RAN0/R31", ok, "\n    " + "\n    ".join(details))


# ---------------------------------------------------------------------------
# 2. NWS decisive failure at N = 10^6
# ---------------------------------------------------------------------------

def test_criterion_02_table_nws_failure():
    details = []
    ok = True
    for dim in (3, 5, 10):
        engine = rng.NwsEngine(0)  # alpha = sqrt(2) - 1
        mapping = "polar" if dim == 10 else "rejection"
        rep = rips.rips_run(dim, engine, 10**6, mapping=mapping)
        cell_ok = abs(rep.z_score) > 10.0 and rep.verdict == "fail"
        ok &= cell_ok
        details.append(f"nws n={dim}: z={rep.z_score:+.1f} {rep.verdict}")
    report(2, "NWS fails decisively", ok, "  " + "; ".join(details))


# ---------------------------------------------------------------------------
# 3. Representation equivalence on a 64-point grid, n = 1..8
# ---------------------------------------------------------------------------

def test_criterion_03_representation_equivalence():
    worst = 0.0
    for n in range(1, 9):
        geom = d.BallGeometry(n, 1.0)
        grid = 2.0 * np.arange(1, 65) / 65.0
        base = d.uniform_pdf(geom, grid)
        for other in (
            d.uniform_pdf_integral_rep(geom, grid),
            d.uniform_pdf_hypergeometric_rep(geom, grid),
        ):
            diff = np.abs(other - base)
            scale = np.where(base > 1e-6, base, 1.0)
            worst = max(worst, float(np.max(diff / scale)))
    report(3, "representation equivalence", worst <= 1e-8,
           f"  worst relative deviation {worst:.2e}")


# ---------------------------------------------------------------------------
# 4. Normalization, exact CDF endpoint, CDF-PDF consistency
# ---------------------------------------------------------------------------

def test_criterion_04_normalization_and_cdf():
    ok = True
    worst_norm = 0.0
    for n in range(1, 9):
        geom = d.BallGeometry(n, 1.0)
        val, _ = integrate.quad(lambda s: d.uniform_pdf(geom, s), 0, 2, limit=200)
        worst_norm = max(worst_norm, abs(val - 1.0))
        val, _ = integrate.quad(lambda s: d.gaussian_pdf(n, 1.0, s), 0, 40,
                                limit=300)
        worst_norm = max(worst_norm, abs(val - 1.0))
        ok &= d.uniform_cdf(geom, 2.0) == 1.0 and d.uniform_cdf(geom, 0.0) == 0.0
    for geom, r_c in [(G3, 0.5), (d.BallGeometry(5, 2.0), 1.0)]:
        val, _ = integrate.quad(lambda s: d.hardcore_pdf(geom, r_c, s), r_c,
                                2 * geom.radius, limit=200)
        worst_norm = max(worst_norm, abs(val - 1.0))
    for rho1, rho2 in [(2.0, 1.0), (1.0, 3.0)]:
        val, _ = integrate.quad(lambda s: d.two_shell_pdf(1.0, rho1, rho2, s),
                                0, 2, points=[0.5, 1.0, 1.5], limit=200)
        worst_norm = max(worst_norm, abs(val - 1.0))
    ok &= worst_norm <= 1e-8
    worst_deriv = 0.0
    h = 1e-5
    for n in (2, 3, 5, 8):
        geom = d.BallGeometry(n, 1.0)
        for x in np.linspace(0.15, 1.85, 12):
            deriv = (d.uniform_cdf(geom, x + h) - d.uniform_cdf(geom, x - h)) / (2 * h)
            worst_deriv = max(worst_deriv, abs(deriv - d.uniform_pdf(geom, x)))
    ok &= worst_deriv <= 1e-6
    report(4, "normalization and CDF", ok,
           f"  worst |mass-1| {worst_norm:.2e}, worst |dCDF-pdf| {worst_deriv:.2e}")


# ---------------------------------------------------------------------------
# 5. Coulomb constant 6/5
# ---------------------------------------------------------------------------

def test_criterion_05_coulomb_constant():
    dist = d.make_distribution(G3, d.UniformDensity())
    closed = physics.pairwise_expectation(dist, lambda s: 1.0 / s,
                                          potential_power=-1)
    closed_ok = abs(closed - 1.2) <= 1e-10
    sampler = sampling.BallSampler(G3, d.UniformDensity(), rng.Ran0Engine(8))
    pairs = 10**6
    total = 0.0
    done = 0
    while done < pairs:
        k = min(pairs - done, 10**5)
        pts = sampler.points(2 * k).reshape(k, 2, 3)
        total += float(np.sum(1.0 / np.linalg.norm(pts[:, 1] - pts[:, 0], axis=1)))
        done += k
    mc = total / pairs
    mc_ok = abs(mc - 1.2) / 1.2 <= 0.005
    report(5, "Coulomb 6/5 constant", closed_ok and mc_ok,
           f"  closed {closed:.12f}, MC {mc:.5f}")


# ---------------------------------------------------------------------------
# 6. Moments <s> = 36R/35 and <s^2> = 2 n sigma^2
# ---------------------------------------------------------------------------

def test_criterion_06_moments():
    m1 = d.uniform_moment(G3, 1)
    quad1, _ = integrate.quad(lambda s: s * d.uniform_pdf(G3, s), 0, 2, limit=200)
    ok = abs(m1 - 36.0 / 35.0) <= 1e-12 and abs(m1 - quad1) <= 1e-9

    n, sigma = 3, 1.0
    m2 = d.gaussian_moment(n, sigma, 2)
    quad2, _ = integrate.quad(lambda s: s**2 * d.gaussian_pdf(n, sigma, s), 0, 40,
                              limit=300)
    ok &= abs(m2 - 2 * n * sigma**2) <= 1e-12 and abs(m2 - quad2) <= 1e-9

    sampler = sampling.BallSampler(G3, d.UniformDensity(), rng.Ran0Engine(66))
    pts = sampler.points(2 * 10**6).reshape(10**6, 2, 3)
    dist = np.linalg.norm(pts[:, 1] - pts[:, 0], axis=1)
    se = dist.std(ddof=1) / math.sqrt(dist.size)
    z1 = (dist.mean() - m1) / se
    ok &= abs(z1) <= 4.0

    gs = sampling.BallSampler(G3, d.GaussianDensity(sigma), rng.Ran0Engine(67))
    gpts = gs.points(2 * 10**6).reshape(10**6, 2, 3)
    g2 = np.einsum("ij,ij->i", gpts[:, 1] - gpts[:, 0], gpts[:, 1] - gpts[:, 0])
    se2 = g2.std(ddof=1) / math.sqrt(g2.size)
    z2 = (g2.mean() - m2) / se2
    ok &= abs(z2) <= 4.0
    report(6, "moments vs quadrature and MC", ok,
           f"  z(<s>)={z1:+.2f}, z(<s^2>)={z2:+.2f}")


# ---------------------------------------------------------------------------
# 7. Gaussian mode location
# ---------------------------------------------------------------------------

def test_criterion_07_gaussian_mode():
    step = 1e-4
    grid = np.arange(0.0, 6.0, step)
    worst = 0.0
    for n in range(2, 11):
        vals = d.gaussian_pdf(n, 1.0, grid)
        peak = grid[int(np.argmax(vals))]
        worst = max(worst, abs(peak - math.sqrt(2.0 * (n - 1))))
    report(7, "Gaussian mode sqrt(2(n-1)) sigma", worst <= step + 1e-12,
           f"  worst offset {worst:.2e} (step {step})")


# ---------------------------------------------------------------------------
# 8. Two-shell model
# ---------------------------------------------------------------------------

def test_criterion_08_two_shell():
    big_r, rho1, rho2 = 1.0, 2.0, 1.0
    coeffs = d._two_shell_coeffs(big_r, rho1, rho2)
    cont = max(
        abs(
            sum(c * b**p for p, c in coeffs[i].items())
            - sum(c * b**p for p, c in coeffs[i + 1].items())
        )
        for i, b in [(0, 0.5), (1, 1.0), (2, 1.5)]
    )
    ok = cont <= 1e-12

    s = np.linspace(0.0, 2.0, 101)
    collapse = float(np.max(np.abs(d.two_shell_pdf(1.0, 0.7, 0.7, s)
                                   - d.uniform_pdf(G3, s))))
    ok &= collapse <= 1e-12

    norm, _ = integrate.quad(lambda t: d.two_shell_pdf(big_r, rho1, rho2, t),
                             0, 2, points=[0.5, 1.0, 1.5], limit=200)
    ok &= abs(norm - 1.0) <= 1e-9

    dens = d.RadialShellsDensity(breakpoints=(0.5, 1.0), densities=(rho1, rho2))
    hist = sampling.pair_distance_histogram(G3, dens, 10**5, 64,
                                            rng.Ran0Engine(27))
    ks = sampling.ks_test(hist, lambda x: d.two_shell_cdf(big_r, rho1, rho2, x),
                          alpha=0.01)
    ok &= ks.passed
    report(8, "two-shell model", ok,
           f"  continuity {cont:.1e}, collapse {collapse:.1e}, "
           f"|mass-1| {abs(norm - 1.0):.1e}, KS D={ks.statistic:.4f} "
           f"(crit {ks.critical:.4f})")


# ---------------------------------------------------------------------------
# 9. Master-formula Monte Carlo vs sampling histogram (x^4 y^4 disk)
# ---------------------------------------------------------------------------

def _bin_mass_z(est, edges, target_mass, target_var):
    # trapezoid mass of the estimate over each bin (grid is 8x finer than
    # the bins) and its stderr from the independent per-point errors
    z = np.empty(len(edges) - 1)
    for b in range(len(edges) - 1):
        mask = (est.grid >= edges[b] - 1e-12) & (est.grid <= edges[b + 1] + 1e-12)
        gs = est.grid[mask]
        vs = est.values[mask]
        es = est.stderr[mask]
        w = np.diff(gs)
        mass = float(np.sum(0.5 * (vs[1:] + vs[:-1]) * w))
        coeff = np.zeros_like(gs)
        coeff[:-1] += 0.5 * w
        coeff[1:] += 0.5 * w
        var = float(np.sum((coeff * es) ** 2))
        z[b] = (mass - target_mass[b]) / math.sqrt(var + target_var[b])
    return z


def test_criterion_09_master_formula_monte_carlo():
    g2 = d.BallGeometry(2, 1.0)
    bins = 32
    edges = np.linspace(0.0, 2.0, bins + 1)
    grid = np.linspace(0.0, 2.0, 8 * bins + 1)
    total_samples = 10**6

    def x4y4(p):
        return p[:, 0] ** 4 * p[:, 1] ** 4

    est = master.general_pdf_mc(g2, x4y4, grid, total_samples,
                                rng.Ran0Engine(12))
    dens = d.GeneralDensity(rho_of_x=x4y4, bound=1.0 / 16.0)
    hist = sampling.pair_distance_histogram(g2, dens, 10**6, bins,
                                            rng.Ran0Engine(13))
    p = hist.counts / hist.total
    z1 = _bin_mass_z(est, edges, p, p * (1.0 - p) / hist.total)
    ok = float(np.max(np.abs(z1))) <= 3.0

    est_u = master.general_pdf_mc(g2, lambda q: np.ones(q.shape[0]), grid,
                                  total_samples, rng.Ran0Engine(5))
    exact_mass = np.diff([d.uniform_cdf(g2, x) for x in edges])
    z2 = _bin_mass_z(est_u, edges, exact_mass, np.zeros(bins))
    ok &= float(np.max(np.abs(z2))) <= 3.0
    report(9, "master-formula Monte Carlo", ok,
           f"  max|z| vs histogram {np.max(np.abs(z1)):.2f}, "
           f"vs closed form {np.max(np.abs(z2)):.2f}")


# ---------------------------------------------------------------------------
# 10. Rotation matrices
# ---------------------------------------------------------------------------

def test_criterion_10_rotation_matrices():
    eng = rng.Ran0Engine(31)
    worst = 0.0
    for dim in range(2, 9):
        e_n = np.zeros(dim)
        e_n[-1] = 1.0
        for _ in range(1000):
            ang = master.random_rotation_angles(dim, eng)
            mat = master.rotation_matrix(dim, ang)
            shat = master.unit_vector(dim, ang)
            worst = max(
                worst,
                float(np.max(np.abs(mat.T @ mat - np.eye(dim)))),
                abs(np.linalg.det(mat) - 1.0),
                float(np.max(np.abs(mat.T @ shat - e_n))),
                float(np.max(np.abs(mat @ e_n - shat))),
            )
    report(10, "rotation matrices", worst <= 1e-10, f"  worst deviation {worst:.2e}")


# ---------------------------------------------------------------------------
# 11. Hard-core neutrino energies, closed form vs quadrature
# ---------------------------------------------------------------------------

def test_criterion_11_neutrino_energies():
    worst = 0.0
    for big_r in [0.7, 1.0, 1.6, 2.5, 4.0]:
        for frac in [0.05, 0.2, 0.5, 0.9, 1.5]:
            system = physics.NeutrinoSystem(3, 2.0, frac * big_r,
                                            d.UniformDensity(), radius=big_r)
            a = physics.neutrino_self_energy_uniform(system)
            b = physics.neutrino_energy_by_quadrature(system)
            worst = max(worst, abs(a - b) / abs(a))
    for sigma in [0.6, 1.0, 1.7, 2.5, 5.0]:
        for frac in [0.2, 0.7, 1.3, 2.5, 6.0]:
            system = physics.NeutrinoSystem(4, 1.5, frac * sigma,
                                            d.GaussianDensity(sigma), sigma=sigma)
            a = physics.neutrino_self_energy_gaussian(system)
            b = physics.neutrino_energy_by_quadrature(system)
            worst = max(worst, abs(a - b) / abs(a))
    report(11, "neutrino self-energies", worst <= 1e-8,
           f"  worst relative deviation {worst:.2e}")


# ---------------------------------------------------------------------------
# 12. RNG bit-exactness against independent oracles
# ---------------------------------------------------------------------------

def test_criterion_12_rng_bit_exactness():
    m, a = 2**31 - 1, 16807
    us = rng.Ran0Engine(1).uniforms(10**4)
    ran0_ok = round(us[-1] * m) == (pow(a, 10**4, m)) % m

    table = rng._ran0_table_words(2024, 31)
    words = list(table)
    for i in range(31, 31 + 10**4):
        words.append(words[i - 31] ^ words[i - 3])
    got = np.round(rng.R31Engine(table).uniforms(10**4) * 2**32).astype(np.int64)
    r31_ok = got.tolist() == words[31:]

    mask = (1 << 128) - 1
    alpha_bits = rng.NWS_ALPHA_SQRT2_BITS
    nws_us = rng.NwsEngine(0).uniforms(10**4)
    nws_ok = all(
        nws_us[n - 1] == (((n * ((n * alpha_bits) & mask)) & mask) >> 75) * 2.0**-53
        for n in range(1, 10**4 + 1)
    )
    report(12, "RNG bit-exactness", ran0_ok and r31_ok and nws_ok,
           f"  ran0 {ran0_ok}, r31 {r31_ok}, nws {nws_ok}")
