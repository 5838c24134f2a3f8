import math

import numpy as np
import pytest
from scipy import integrate, special

from nballdist import specfun

SQRT_PI = math.sqrt(math.pi)


def test_log_gamma_values():
    assert specfun.log_gamma(1.0) == pytest.approx(0.0, abs=1e-15)
    assert specfun.log_gamma(0.5) == pytest.approx(math.log(SQRT_PI), rel=1e-14)
    # Gamma(4.5) by the product recurrence down to Gamma(1/2).
    gamma_4p5 = 3.5 * 2.5 * 1.5 * 0.5 * SQRT_PI
    assert specfun.log_gamma(4.5) == pytest.approx(math.log(gamma_4p5), rel=1e-14)


def test_log_gamma_accuracy_window():
    for x in np.linspace(0.5, 50.0, 397):
        ref = special.gammaln(x)
        assert abs(specfun.log_gamma(x) - ref) <= 1e-13 * max(1.0, abs(ref))


def test_log_gamma_domain():
    with pytest.raises(ValueError):
        specfun.log_gamma(0.0)
    with pytest.raises(ValueError):
        specfun.log_gamma(-2.5)


def test_beta_values():
    assert specfun.beta(1.0, 1.0) == pytest.approx(1.0, rel=1e-14)
    assert specfun.beta(2.0, 0.5) == pytest.approx(4.0 / 3.0, rel=1e-12)
    assert specfun.beta(2.0, 2.5) == pytest.approx(4.0 / 35.0, rel=1e-12)


def test_beta_symmetry_grid():
    grid = np.linspace(0.25, 10.0, 40)
    for p in grid:
        for q in grid:
            assert specfun.beta(p, q) == pytest.approx(specfun.beta(q, p), rel=1e-12)


def test_beta_domain():
    for bad in [(0.0, 1.0), (1.0, 0.0), (-1.0, 2.0)]:
        with pytest.raises(ValueError):
            specfun.beta(*bad)


def test_incomplete_beta_endpoints():
    assert specfun.incomplete_beta(0.0, 3.0, 4.0) == 0.0
    assert specfun.incomplete_beta(1.0, 2.0, 2.5) == pytest.approx(
        specfun.beta(2.0, 2.5), rel=1e-12
    )


def test_incomplete_beta_quadrature_oracle():
    def oracle(x, p, q):
        val, _ = integrate.quad(
            lambda t: t ** (p - 1.0) * (1.0 - t) ** (q - 1.0), 0.0, x,
            epsabs=1e-14, epsrel=1e-12, limit=200,
        )
        return val

    assert specfun.incomplete_beta(0.25, 0.5, 2.0) == pytest.approx(
        oracle(0.25, 0.5, 2.0), rel=1e-10
    )
    rng = np.random.default_rng(42)
    for _ in range(25):
        p, q = rng.uniform(0.1, 8.0, 2)
        x = rng.uniform(0.05, 0.95)
        assert specfun.incomplete_beta(x, p, q) == pytest.approx(
            oracle(x, p, q), rel=1e-10
        )


def test_incomplete_beta_reflection_identity():
    for p, q in [(0.5, 2.0), (3.0, 1.2), (7.5, 0.7), (2.2, 2.2)]:
        full = specfun.beta(p, q)
        for x in np.arange(0.1, 0.95, 0.1):
            lhs = specfun.incomplete_beta(x, p, q) + specfun.incomplete_beta(
                1.0 - x, q, p
            )
            assert lhs == pytest.approx(full, rel=1e-10)


def test_incomplete_beta_monotone():
    xs = np.linspace(0.0, 1.0, 41)
    vals = [specfun.incomplete_beta(x, 1.7, 0.4) for x in xs]
    assert all(b >= a for a, b in zip(vals, vals[1:]))


def test_incomplete_beta_domain():
    with pytest.raises(ValueError):
        specfun.incomplete_beta(-0.1, 1.0, 1.0)
    with pytest.raises(ValueError):
        specfun.incomplete_beta(1.1, 1.0, 1.0)
    with pytest.raises(ValueError):
        specfun.incomplete_beta(0.5, 0.0, 1.0)


def test_upper_gamma_closed_form_a1():
    for x in [0.1, 1.0, 3.7, 20.0]:
        assert specfun.upper_incomplete_gamma(1.0, x) == pytest.approx(
            math.exp(-x), rel=1e-12
        )


def test_upper_gamma_e1_value():
    # E1(1), frozen from the series/continued-fraction oracle and checked
    # against quadrature.
    val = specfun.upper_incomplete_gamma(0.0, 1.0)
    assert val == pytest.approx(0.2193839344, abs=5e-11)
    quad_val, _ = integrate.quad(lambda t: math.exp(-t) / t, 1.0, np.inf, limit=200)
    assert val == pytest.approx(quad_val, rel=1e-10)


def test_upper_gamma_half_erfc_identity():
    # Gamma(1/2, x) = sqrt(pi) erfc(sqrt(x)); erfc from the math library.
    val = specfun.upper_incomplete_gamma(0.5, 0.25)
    assert val == pytest.approx(SQRT_PI * math.erfc(0.5), rel=1e-12)


def test_upper_gamma_quadrature_grid():
    for a in [0.0, 0.5, 1.0, 2.0]:
        for x in [0.1, 1.0, 5.0]:
            ref, _ = integrate.quad(
                lambda t: t ** (a - 1.0) * math.exp(-t), x, np.inf, limit=300
            )
            assert specfun.upper_incomplete_gamma(a, x) == pytest.approx(
                ref, rel=1e-8
            )


def test_upper_gamma_domain():
    with pytest.raises(ValueError):
        specfun.upper_incomplete_gamma(1.0, 0.0)
    with pytest.raises(ValueError):
        specfun.upper_incomplete_gamma(-0.5, 1.0)


def test_2f1_trivial_and_polynomial():
    assert specfun.gauss_2f1(0.5, -1.0, 1.5, 0.0) == 1.0
    for z in np.linspace(0.0, 1.0, 11):
        assert specfun.gauss_2f1(0.5, -1.0, 1.5, z) == pytest.approx(
            1.0 - z / 3.0, rel=1e-14, abs=1e-14
        )


def test_2f1_gauss_summation():
    # 2F1(1/2, -1/2; 3/2; 1) = Gamma(3/2)^2 / (Gamma(1) Gamma(2)) = pi/4,
    # cross-checked by the series just inside the radius.
    val = specfun.gauss_2f1(0.5, -0.5, 1.5, 1.0)
    assert val == pytest.approx(math.pi / 4.0, rel=1e-12)
    near = specfun.gauss_2f1(0.5, -0.5, 1.5, 1.0 - 1e-6)
    assert near == pytest.approx(val, abs=1e-5)


def test_2f1_polynomial_termination():
    # b a nonpositive integer: exactly 1-b terms, equal to the direct
    # polynomial evaluation.
    for n in [1, 3, 5, 7, 9]:
        b = 0.5 - n / 2.0
        m = int(-b)
        for z in [0.2, 0.7, 1.0]:
            direct = 0.0
            for k in range(m + 1):
                num = math.prod(0.5 + j for j in range(k)) * math.prod(
                    b + j for j in range(k)
                )
                den = math.prod(1.5 + j for j in range(k)) * math.factorial(k)
                direct += num / den * z**k
            assert specfun.gauss_2f1(0.5, b, 1.5, z) == pytest.approx(
                direct, rel=1e-15
            )


def test_2f1_series_against_scipy():
    for n in [2, 4, 6, 8]:
        b = 0.5 - n / 2.0
        for z in [0.1, 0.5, 0.9, 0.99]:
            assert specfun.gauss_2f1(0.5, b, 1.5, z) == pytest.approx(
                float(special.hyp2f1(0.5, b, 1.5, z)), rel=1e-11
            )


def test_2f1_family_restriction():
    with pytest.raises(ValueError):
        specfun.gauss_2f1(0.3, -0.5, 1.5, 0.5)
    with pytest.raises(ValueError):
        specfun.gauss_2f1(0.5, -0.5, 2.0, 0.5)
    with pytest.raises(ValueError):
        specfun.gauss_2f1(0.5, -0.7, 1.5, 0.5)
    with pytest.raises(ValueError):
        specfun.gauss_2f1(0.5, -0.5, 1.5, 1.2)
    with pytest.raises(ValueError):
        specfun.gauss_2f1(0.5, -0.5, 1.5, -0.1)
