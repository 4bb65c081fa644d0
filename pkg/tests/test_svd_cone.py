import math
import warnings

import numpy as np
import pytest

from conebeam_svd.ball_basis import BallBasisIndex, BallCoefficients, enumerate_indices
from conebeam_svd.errors import DomainError
from conebeam_svd.harmonics import triple_product_quad
from conebeam_svd.quadrature import sphere_rule_s2
from conebeam_svd.svd_cone import (
    constant_upper_bound,
    d3_upper_bound,
    d_odd_forward_spectral,
    decay_exponent,
    eval_w,
    forward_odd_on_grid,
    lambda_,
    lambda_general,
    lower_bound_certificate,
    mu,
    nu,
    nuN_monotonicity,
    reconstruct,
    singular_triple,
    sum_rule,
    triple_product_neumann,
    upper_bound,
    w_on_grid,
)
from conebeam_svd.xray import cone_beam_odd_basis

PI = math.pi

# lambda^2 from exact rational integration of the Legendre triple products
FROZEN_LAMBDA_SQ = {
    (0, 0): 4 * PI,
    (1, 1): 8 * PI / 3,
    (2, 0): 16 * PI / 9,
    (2, 2): 92 * PI / 45,
    (3, 1): 64 * PI / 45,
    (3, 3): 176 * PI / 105,
    (4, 2): 1888 * PI / 1575,
}


def test_mu():
    assert mu(0, 3) == pytest.approx(4 * PI / math.sqrt(3))
    for m in range(6):
        assert mu(m, 3) == pytest.approx(4 * PI / math.sqrt(2 * m + 3))
    with pytest.raises(DomainError):
        mu(0, 4)


def test_nu():
    assert nu(1, 3) == pytest.approx(-1)
    assert nu(3, 3) == pytest.approx(2 / 3)
    assert nu(1, 5) == pytest.approx(-1 / 3)
    assert nu(5, 3) == pytest.approx(-8 / 15)
    with pytest.raises(DomainError):
        nu(2, 3)


def test_neumann_examples():
    assert triple_product_neumann(0, 1, 0) == pytest.approx(2 / 3)
    assert triple_product_neumann(1, 1, 1) == pytest.approx(4 / 15)
    assert triple_product_neumann(0, 3, 0) == 0.0


def test_neumann_agrees_with_quadrature():
    for a in range(1, 16):
        for n in range(16):
            for l in range(16):
                x, y = triple_product_neumann(a - 1, n, l), triple_product_quad(a, n, l, 3)
                if x or y:
                    assert x == pytest.approx(y, rel=1e-11)


@pytest.mark.parametrize("ml, lam_sq", sorted(FROZEN_LAMBDA_SQ.items()))
def test_lambda_frozen(ml, lam_sq):
    m, l = ml
    assert lambda_(m, l) ** 2 == pytest.approx(lam_sq, rel=1e-13)


def test_lambda_examples_and_paths():
    assert lambda_(0, 0, 3) == pytest.approx(2 * math.sqrt(PI), abs=1e-12)
    assert lambda_(1, 1, 3) == pytest.approx(math.sqrt(8 * PI / 3), abs=1e-12)
    assert lambda_(0, 0, 5) == pytest.approx(PI * math.sqrt(8 / 3), abs=1e-12)
    for m in range(11):
        for l in range(m % 2, m + 1, 2):
            assert lambda_general(m, l, 3) == pytest.approx(lambda_(m, l, 3), rel=1e-12)
    with pytest.raises(DomainError):
        lambda_(1, 0)


def test_lambda_one_term_identity_for_l_zero():
    # with l = 0 only n = m + 1 survives the triangle condition
    from conebeam_svd.specfun import harmonic_dimension, sphere_measure

    for d in (3, 5, 7):
        for m in range(7):
            if m % 2:
                continue
            expected = harmonic_dimension(m + 1, d) * mu(m, d) ** 2 * nu(m + 1, d) ** 2 / sphere_measure(d)
            assert lambda_(m, 0, d) ** 2 == pytest.approx(expected, rel=1e-12)


def test_sum_rule():
    for d in (3, 5):
        for l in range(9):
            for n in range(9):
                assert sum_rule(l, n, d) == pytest.approx(1.0, abs=1e-10)


def test_singular_triple_structure():
    t = singular_triple((3, 1, 0))
    assert t.a_degree == 4
    assert t.omega_degrees == [3, 5]
    for m, l, k in [(2, 2, 1), (4, 0, 0), (4, 4, -3)]:
        degrees = singular_triple((m, l, k)).omega_degrees
        assert all(n % 2 for n in degrees)
        assert set(degrees) <= set(range(m + 1 - l, m + 2 + l, 2))


def test_svd_pointwise(points):
    A, W = points(50), points(50)
    for idx in enumerate_indices(4):
        ray = cone_beam_odd_basis(idx, A, W)
        lam = lambda_(idx.m, idx.l)
        np.testing.assert_allclose(lam * eval_w(idx, A, W), ray, atol=1e-5)
        np.testing.assert_allclose(d_odd_forward_spectral(idx, A, W), ray, atol=1e-5)


def test_svd_on_visibility_equator():
    a = np.array([0.0, 0.0, 1.0])
    omega = np.array([0.0, 1.0, 0.0])
    for idx in [(0, 0, 0), (2, 2, 1)]:
        assert d_odd_forward_spectral(idx, a, omega) == pytest.approx(cone_beam_odd_basis(idx, a[None], omega[None])[0], abs=1e-12)


def test_w_is_odd_in_omega(points):
    A, W = points(10), points(10)
    np.testing.assert_allclose(eval_w((2, 2, 1), A, -W), -eval_w((2, 2, 1), A, W), atol=1e-14)


def test_w_orthonormal_on_product_grid():
    rule = sphere_rule_s2(5)
    w2 = np.outer(rule.weights, rule.weights)
    W0 = w_on_grid((0, 0, 0), rule.nodes, rule.nodes)
    W2 = w_on_grid((2, 0, 0), rule.nodes, rule.nodes)
    assert np.sum(w2 * np.abs(W0) ** 2) == pytest.approx(1.0, abs=1e-12)
    assert abs(np.sum(w2 * W0 * np.conj(W2))) < 5e-3


def test_bounds_hold():
    assert lambda_(0, 0) <= constant_upper_bound(3)
    assert constant_upper_bound(3) == pytest.approx(PI * math.sqrt(2))
    for m in range(41):
        for l in range(m % 2, m + 1, 2):
            lam = lambda_(m, l)
            assert lower_bound_certificate(m, l) <= lam**2 * (1 + 1e-12)
            assert lam <= d3_upper_bound(m)
            assert lam <= upper_bound(m, l)
    for l in (0, 1, 2):
        vals = [upper_bound(m, l) for m in range(l, 30, 2)]
        assert all(x > y for x, y in zip(vals, vals[1:]))


def test_lower_certificate_sharp_at_origin_and_ratio():
    assert lower_bound_certificate(0, 0) == pytest.approx(4 * PI)
    ratios = [lambda_(m, 0) ** 2 / lower_bound_certificate(m, 0) for m in (10, 40, 80, 200)]
    assert all(x < y for x, y in zip(ratios, ratios[1:]))
    assert 1.9 < ratios[-1] < 2.0


def test_tightness_band():
    vals = [math.sqrt(m) * lambda_(m, 0) for m in range(10, 81, 2)]
    assert min(vals) >= 0.9 * PI * math.sqrt(2)
    assert max(vals) <= PI * math.sqrt(2)


def test_nuN_monotonicity():
    r3 = nuN_monotonicity(3, 1001)
    assert r3.values[0] == pytest.approx(3.0)
    assert r3.ok and r3.direction == "increasing"
    assert abs(r3.last_ratio_to_limit - 1) < 0.01
    r5 = nuN_monotonicity(5, 101)
    assert r5.values[0] == pytest.approx(5 / 9)
    assert r5.ok and r5.direction == "decreasing"
    assert r5.limit == pytest.approx(PI / 6)


def test_decay_exponent_between_proven_and_conjectured():
    slope = decay_exponent(range(10, 81))
    assert -0.5 <= slope <= -0.125


def test_reconstruction_examples():
    c = BallCoefficients(3, 1, {BallBasisIndex(1, 1, 0): 1 + 0j})
    rec = reconstruct(forward_odd_on_grid(c, 16), 3, 16)
    assert rec[(1, 1, 0)] == pytest.approx(1.0, abs=1e-3)
    assert max(abs(v) for i, v in rec.values.items() if i != BallBasisIndex(1, 1, 0)) <= 1e-3
    rec0 = reconstruct(np.zeros((578, 578)), 2, 16)
    assert all(v == 0 for v in rec0.values.values())


def test_reconstruction_warns_on_coarse_grid():
    c = BallCoefficients(3, 1, {BallBasisIndex(1, 1, 0): 1 + 0j})
    with pytest.warns(RuntimeWarning):
        reconstruct(forward_odd_on_grid(c, 3), 2, 3)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        reconstruct(forward_odd_on_grid(c, 5), 2, 5)
    with pytest.raises(ValueError):
        reconstruct(np.zeros((3, 3)), 1, 5)
