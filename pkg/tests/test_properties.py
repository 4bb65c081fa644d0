import math

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from conebeam_svd.ball_basis import BallBasisIndex, BallCoefficients
from conebeam_svd.funk_radon import nullspace_classify, s_hat, s_hat_factorial
from conebeam_svd.harmonics import SphereCoefficients, expand_s2, synthesize_s2
from conebeam_svd.specfun import double_factorial, log_double_factorial
from conebeam_svd.svd_cone import d3_upper_bound, lambda_, lower_bound_certificate
from conebeam_svd.xray import cone_beam_odd_basis

unit = st.tuples(*[st.floats(-1, 1, allow_nan=False)] * 3).filter(lambda v: sum(x * x for x in v) > 1e-2).map(
    lambda v: np.array(v) / math.sqrt(sum(x * x for x in v))
)


@given(st.integers(-1, 60))
def test_log_double_factorial(n):
    assert math.isclose(log_double_factorial(n), math.log(double_factorial(n)), rel_tol=1e-13, abs_tol=1e-13)


@given(st.integers(-2, 6), st.integers(3, 9), st.integers(0, 40))
def test_eigenvalue_forms_agree(j, d, n):
    a, b = s_hat(j, d, n), s_hat_factorial(j, d, n)
    if nullspace_classify(j, d, n):
        assert a == 0.0
    else:
        assert math.isclose(a, b, rel_tol=1e-12)


@given(st.integers(0, 6), st.integers(3, 7), st.integers(0, 30))
def test_nullspace_parity(j, d, n):
    if (n + j) % 2:
        assert s_hat(j, d, n) == 0.0


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_s2_round_trip(seed):
    rng = np.random.default_rng(seed)
    L = 5
    vals = {(n, k): complex(*rng.normal(size=2)) for n in range(L + 1) for k in range(-n, n + 1)}
    c = SphereCoefficients(3, L, vals)
    back = expand_s2(lambda x: synthesize_s2(c, x), L)
    assert max(abs(back.values[key] - v) for key, v in vals.items()) < 1e-12


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([(0, 0, 0), (1, 1, 1), (2, 0, 0), (3, 3, -1), (4, 2, 2)]), unit, unit)
def test_odd_part_is_odd(idx, a, omega):
    plus = cone_beam_odd_basis(idx, a[None], omega[None])[0]
    minus = cone_beam_odd_basis(idx, a[None], -omega[None])[0]
    assert abs(plus + minus) < 1e-14


@given(st.integers(0, 40).flatmap(lambda m: st.tuples(st.just(m), st.sampled_from(range(m % 2, m + 1, 2)))))
def test_bounds_are_ordered(ml):
    m, l = ml
    lam = lambda_(m, l)
    assert lower_bound_certificate(m, l) <= lam * lam * (1 + 1e-12)
    assert lam <= d3_upper_bound(m) * (1 + 1e-12)


@given(st.integers(0, 3).flatmap(lambda M: st.tuples(
    st.just(M),
    st.dictionaries(
        st.sampled_from([(m, l, k) for m in range(M + 1) for l in range(m % 2, m + 1, 2) for k in range(-l, l + 1)]),
        st.tuples(st.floats(-1e6, 1e6), st.floats(-1e6, 1e6)),
        max_size=6,
    ),
)))
def test_ball_coefficients_json_round_trip(data):
    M, entries = data
    c = BallCoefficients(3, M, {BallBasisIndex(*i): complex(*v) for i, v in entries.items()})
    back = BallCoefficients.from_json(c.to_json())
    assert back.values == c.values
