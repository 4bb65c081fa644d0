import math
from fractions import Fraction

import numpy as np
import pytest

from conebeam_svd.errors import DomainError
from conebeam_svd.specfun import (
    Polynomial,
    assoc_legendre_normalized,
    double_factorial,
    gegenbauer,
    gegenbauer_rodrigues,
    half_integer_gamma,
    harmonic_dimension,
    jacobi,
    legendre_nd,
    legendre_nd_eval,
    legendre_nd_table,
    log_double_factorial,
    log_gamma_signed,
    signed_double_factorial,
    sphere_measure,
    weighted_derivative_at_zero,
)


@pytest.mark.parametrize("n, expected", [(-1, 1), (0, 1), (1, 1), (5, 15), (6, 48), (9, 945)])
def test_double_factorial_values(n, expected):
    assert double_factorial(n) == expected


def test_double_factorial_rejects_below_minus_one():
    with pytest.raises(DomainError):
        double_factorial(-2)


def test_log_double_factorial_survives_overflow():
    # 400!! overflows a double; the log stays finite and matches lgamma
    assert math.isfinite(log_double_factorial(400))
    assert log_double_factorial(400) == pytest.approx(200 * math.log(2) + math.lgamma(201), rel=1e-14)
    for n in range(-1, 60):
        assert log_double_factorial(n) == pytest.approx(math.log(double_factorial(n)), abs=1e-12)


def test_signed_double_factorial_negative_odd():
    assert signed_double_factorial(-3) == -1
    assert signed_double_factorial(-5) == Fraction(1, 3)
    assert signed_double_factorial(-7) == Fraction(-1, 15)
    with pytest.raises(DomainError):
        signed_double_factorial(-4)


def test_half_integer_gamma():
    assert half_integer_gamma(1).value == pytest.approx(math.sqrt(math.pi), rel=1e-15)
    assert half_integer_gamma(5).value == pytest.approx(0.75 * math.sqrt(math.pi), rel=1e-15)
    with pytest.raises(DomainError):
        half_integer_gamma(0)


def test_log_gamma_signed_sign_and_poles():
    assert log_gamma_signed(-0.5)[1] == -1
    assert log_gamma_signed(-1.5)[1] == 1
    assert math.exp(log_gamma_signed(-0.5)[0]) == pytest.approx(2 * math.sqrt(math.pi))
    with pytest.raises(DomainError):
        log_gamma_signed(-2.0)


def test_sphere_measures():
    assert sphere_measure(2) == pytest.approx(2 * math.pi)
    assert sphere_measure(3) == pytest.approx(4 * math.pi)
    assert sphere_measure(5) == pytest.approx(8 * math.pi**2 / 3)


@pytest.mark.parametrize("n, d, expected", [(0, 3, 1), (3, 3, 7), (1, 5, 5), (2, 4, 9), (4, 6, 105)])
def test_harmonic_dimension(n, d, expected):
    assert harmonic_dimension(n, d) == expected
    closed = (2 * n + d - 2) * math.factorial(n + d - 3) // (math.factorial(n) * math.factorial(d - 2))
    assert closed == expected


def test_polynomial_algebra():
    p = Polynomial.from_exact([1, 2])  # 1 + 2t
    q = p * p - 1
    assert q.exact == (0, 4, 4)
    assert q.deriv().exact == (4, 8)
    assert q.integral(0.0, 1.0) == pytest.approx(2 + 4 / 3)
    assert (p**0).exact == (1,)
    assert Polynomial.from_exact([0, 0]).degree == 0


def test_gegenbauer_known_forms():
    t = np.linspace(-1, 1, 9)
    np.testing.assert_allclose(gegenbauer(1, 1.5)(t), 3 * t, atol=1e-15)
    np.testing.assert_allclose(gegenbauer(2, 1)(t), 4 * t**2 - 1, atol=1e-15)
    for n in range(8):
        assert gegenbauer(n, Fraction(3, 2)).exact == gegenbauer_rodrigues(n, Fraction(3, 2)).exact


def test_legendre_nd_normalized_at_one():
    for d in (2, 3, 4, 5, 8):
        for n in range(10):
            assert legendre_nd(n, d)(1.0) == pytest.approx(1.0, abs=1e-13)
    np.testing.assert_allclose(legendre_nd(4, 2)(np.cos(0.3)), np.cos(1.2), atol=1e-14)


def test_legendre_table_matches_scipy():
    from scipy.special import eval_legendre

    t = np.linspace(-1, 1, 41)
    table = legendre_nd_table(30, 3, t)
    for n in (0, 1, 7, 30):
        np.testing.assert_allclose(table[n], eval_legendre(n, t), atol=1e-13)
    assert legendre_nd_eval(2, 3, 0.5) == pytest.approx(-0.125)


def test_jacobi_against_scipy():
    from scipy.special import eval_jacobi

    x = np.linspace(-1, 1, 11)
    for n, a, b in [(0, 0, 1.5), (2, 0, 2.5), (3, 0.5, 1), (4, 0, 0.5)]:
        np.testing.assert_allclose(jacobi(n, a, b)(x), eval_jacobi(n, a, b, x), atol=1e-12)


def test_weighted_derivative_exact_values():
    # d/dt [P_1(t)] = 1 and second derivative of P_2(t) = 3t^2/2 - 1/2 is 3
    assert weighted_derivative_at_zero(1, 3, 1) == 1.0
    assert weighted_derivative_at_zero(2, 3, 2) == 3.0
    # d = 5: (1 - t^2) P_{1,5}(t) = t - t^3, third derivative -6
    assert weighted_derivative_at_zero(1, 5, 3) == -6.0


def test_assoc_legendre_normalization():
    from conebeam_svd.quadrature import gauss_legendre

    rule = gauss_legendre(20)
    for n in range(6):
        for k in range(-n, n + 1):
            vals = assoc_legendre_normalized(n, k, rule.nodes)
            assert 2 * math.pi * rule.integrate(vals**2) == pytest.approx(1.0, abs=1e-13)
    with pytest.raises(DomainError):
        assoc_legendre_normalized(2, 3, 0.0)
    with pytest.raises(DomainError):
        assoc_legendre_normalized(2, 1, 1.5)
