"""Special-function kernel behind the analytic distance-distribution formulas.

Scalar routines only: beta and (unregularized) incomplete beta, upper
incomplete gamma including the a=0 exponential-integral case, and the Gauss
hypergeometric series on the restricted parameter family (1/2, 1/2-n/2; 3/2)
that the closed-form ball PDFs use.  Everything is plain double precision.
"""

import math

import numpy as np

from .errors import NonConvergenceError

_EULER_GAMMA = 0.5772156649015328606
_MAX_CF_ITER = 400
_MAX_SERIES_ITER = 50_000_000


def log_gamma(x):
    """Natural log of Gamma(x) for x > 0."""
    if not x > 0.0:
        raise ValueError(f"log_gamma requires x > 0, got {x}")
    return math.lgamma(x)


def beta(p, q):
    """Beta function B(p, q) = Gamma(p)Gamma(q)/Gamma(p+q), p, q > 0."""
    if not (p > 0.0 and q > 0.0):
        raise ValueError(f"beta requires positive arguments, got ({p}, {q})")
    return math.exp(math.lgamma(p) + math.lgamma(q) - math.lgamma(p + q))


def _beta_cf(x, p, q):
    """Continued fraction for the incomplete beta, modified Lentz scheme.

    Converges quickly for x < (p+1)/(p+q+2); callers reflect otherwise.
    """
    tiny = 1e-300
    qab = p + q
    qap = p + 1.0
    qam = p - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < tiny:
        d = tiny
    d = 1.0 / d
    h = d
    for m in range(1, _MAX_CF_ITER + 1):
        m2 = 2 * m
        aa = m * (q - m) * x / ((qam + m2) * (p + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        h *= d * c
        aa = -(p + m) * (qab + m) * x / ((p + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            return h
    raise NonConvergenceError(
        f"incomplete beta continued fraction stalled at x={x}, p={p}, q={q}"
    )


def incomplete_beta(x, p, q):
    """Unregularized lower incomplete beta B_x(p, q) = int_0^x t^(p-1)(1-t)^(q-1) dt.

    Uses the continued fraction directly below the stability switchover
    x = (p+1)/(p+q+2) and the reflection B_x(p,q) = B(p,q) - B_{1-x}(q,p)
    above it.
    """
    if not (p > 0.0 and q > 0.0):
        raise ValueError(f"incomplete_beta requires positive p, q, got ({p}, {q})")
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"incomplete_beta requires x in [0, 1], got {x}")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return beta(p, q)
    # <= so the reflected argument falls strictly inside the direct branch
    # (the two switchover thresholds sum to exactly 1).
    if x <= (p + 1.0) / (p + q + 2.0):
        front = math.exp(p * math.log(x) + q * math.log1p(-x)) / p
        return front * _beta_cf(x, p, q)
    return beta(p, q) - incomplete_beta(1.0 - x, q, p)


def regularized_incomplete_beta(x, p, q):
    """I_x(p, q) = B_x(p, q) / B(p, q)."""
    return incomplete_beta(x, p, q) / beta(p, q)


def _exp1(x):
    """Exponential integral E1(x) for x > 0: series below 1, CF above."""
    if x > 1.0:
        # Gamma(0, x) continued fraction; shared with the a > 0 case.
        return _upper_gamma_cf(0.0, x)
    total = -_EULER_GAMMA - math.log(x)
    term = 1.0
    for k in range(1, 60):
        term *= -x / k
        contrib = -term / k
        total += contrib
        if abs(contrib) < 1e-18 * max(abs(total), 1e-300):
            return total
    return total


def _lower_gamma_series(a, x):
    """Series for the lower incomplete gamma, for x < a + 1."""
    term = 1.0 / a
    total = term
    ap = a
    for _ in range(1000):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < 1e-17 * abs(total):
            return total * math.exp(-x + a * math.log(x))
    raise NonConvergenceError(f"lower gamma series stalled at a={a}, x={x}")


def _upper_gamma_cf(a, x):
    """Continued fraction for Gamma(a, x), for x >= a + 1 (NR gcf form)."""
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for k in range(1, _MAX_CF_ITER + 1):
        an = -k * (k - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            return math.exp(-x + a * math.log(x)) * h
    raise NonConvergenceError(f"upper gamma continued fraction stalled at a={a}, x={x}")


def upper_incomplete_gamma(a, x):
    """Upper incomplete gamma Gamma(a, x) = int_x^inf t^(a-1) e^(-t) dt.

    Accepts a >= 0 and x > 0; a = 0 is evaluated as the exponential
    integral E1(x).
    """
    if not x > 0.0:
        raise ValueError(f"upper_incomplete_gamma requires x > 0, got {x}")
    if a < 0.0:
        raise ValueError(f"upper_incomplete_gamma requires a >= 0, got {a}")
    if a == 0.0:
        return _exp1(x)
    if x < a + 1.0:
        return math.exp(math.lgamma(a)) - _lower_gamma_series(a, x)
    return _upper_gamma_cf(a, x)


def _check_2f1_family(a, b, c, z):
    family = (
        abs(a - 0.5) < 1e-12
        and abs(c - 1.5) < 1e-12
        and b < 0.25
        and abs(2.0 * b - round(2.0 * b)) < 1e-12
    )
    if not family:
        raise ValueError(
            "gauss_2f1 is restricted to the family a=1/2, b=1/2-n/2, c=3/2 "
            f"(integer n >= 1); got a={a}, b={b}, c={c}"
        )
    if not 0.0 <= z <= 1.0:
        raise ValueError(f"gauss_2f1 requires z in [0, 1], got {z}")


def gauss_2f1(a, b, c, z):
    """Gauss hypergeometric 2F1(a, b; c; z) on the restricted family.

    Only a = 1/2, b = 1/2 - n/2, c = 3/2 with z in [0, 1] is supported.
    When b is a nonpositive integer the series is an exact polynomial of
    1 - b terms; at z = 1 the Gauss summation formula is used; otherwise
    the series is summed with a geometric tail bound of 1e-14 relative.
    """
    _check_2f1_family(a, b, c, z)
    if z == 0.0:
        return 1.0

    half_int_b = round(2.0 * b)
    if half_int_b % 2 == 0:
        # b is a nonpositive integer: exact finite polynomial.
        m = int(round(-b))
        term = 1.0
        total = 1.0
        for k in range(m):
            term *= (a + k) * (b + k) * z / ((c + k) * (k + 1.0))
            total += term
        return total

    if z == 1.0:
        # Gauss summation; c - a - b = (n+1)/2 > 0 on this family.
        return math.exp(
            math.lgamma(c)
            + math.lgamma(c - a - b)
            - math.lgamma(c - a)
            - math.lgamma(c - b)
        )

    # Series in vectorized blocks.  On this family every term ratio is
    # strictly below z, so the tail after the last term t is bounded by
    # |t| z / (1 - z).
    tol = 1e-14
    total = 1.0
    term = 1.0
    k0 = 0
    block = 64
    while k0 < _MAX_SERIES_ITER:
        k = np.arange(k0, k0 + block, dtype=np.float64)
        ratios = (a + k) * (b + k) * z / ((c + k) * (k + 1.0))
        terms = term * np.cumprod(ratios)
        total += float(terms.sum())
        term = float(terms[-1])
        k0 += block
        if abs(term) * z / (1.0 - z) <= tol * abs(total):
            return total
        block = min(2 * block, 65536)
    raise NonConvergenceError(
        f"gauss_2f1 series failed to meet tail bound at z={z} within "
        f"{_MAX_SERIES_ITER} terms"
    )
