import json
import math

import numpy as np
import pytest

from conebeam_svd.ball_basis import (
    BallBasisIndex,
    BallCoefficients,
    ball_table,
    enumerate_indices,
    eval_v,
    expand_on_ball,
    index_count,
    synthesize,
)
from conebeam_svd.errors import DomainError
from conebeam_svd.quadrature import ball_rule


def _inside(rng, n):
    x = rng.normal(size=(n, 3))
    x /= np.linalg.norm(x, axis=1, keepdims=True)
    return x * rng.uniform(0, 1, size=(n, 1)) ** (1 / 3)


def test_index_validation():
    with pytest.raises(DomainError):
        BallBasisIndex(2, 1, 0)
    with pytest.raises(DomainError):
        BallBasisIndex(1, 1, 2)
    with pytest.raises(DomainError):
        BallBasisIndex(1, 3, 0)


def test_enumeration_counts():
    assert enumerate_indices(0) == [BallBasisIndex(0, 0, 0)]
    assert enumerate_indices(1)[1:] == [BallBasisIndex(1, 1, k) for k in (-1, 0, 1)]
    for M in range(9):
        assert len(enumerate_indices(M)) == index_count(M)
    assert index_count(2) == 10


def test_values():
    assert eval_v((0, 0, 0), [0.3, -0.1, 0.2]) == pytest.approx(math.sqrt(3 / (4 * math.pi)))
    s = 0.7
    assert eval_v((1, 1, 0), [0, 0, s]) == pytest.approx(math.sqrt(5) * s * math.sqrt(3 / (4 * math.pi)))
    assert eval_v((2, 2, 1), [0.0, 0.0, 0.0]) == 0
    assert eval_v((2, 0, 0), [0.0, 0.0, 0.0]) == pytest.approx(math.sqrt(7) * -1.5 / math.sqrt(4 * math.pi))
    with pytest.raises(DomainError):
        eval_v((0, 0, 0), [1.0, 1e-6, 0.0 + 1e-3])
    with pytest.raises(NotImplementedError):
        eval_v((0, 0, 0), [0, 0, 0], d=5)


def test_unit_norm_of_radial_example():
    rule = ball_rule(4)
    v = ball_table([(2, 0, 0)], rule.nodes)[:, 0]
    assert rule.integrate(np.abs(v) ** 2) == pytest.approx(1.0, abs=1e-13)


def test_gram_matrix_identity():
    idx = enumerate_indices(6)
    rule = ball_rule(6)
    V = ball_table(idx, rule.nodes)
    G = (np.conj(V).T * rule.weights) @ V
    assert np.max(np.abs(G - np.eye(len(idx)))) < 1e-9


def test_basis_functions_are_polynomials_of_degree_m(rng):
    # fit each V on random points by all monomials of degree <= m
    x = _inside(rng, 200)
    for idx in enumerate_indices(4):
        powers = [(i, j, k) for i in range(idx.m + 1) for j in range(idx.m + 1) for k in range(idx.m + 1) if i + j + k <= idx.m]
        A = np.stack([x[:, 0] ** i * x[:, 1] ** j * x[:, 2] ** k for i, j, k in powers], axis=1)
        v = ball_table([idx], x)[:, 0]
        coef, *_ = np.linalg.lstsq(A.astype(complex), v, rcond=None)
        assert np.max(np.abs(A @ coef - v)) < 1e-10


def test_expansion_examples():
    c = expand_on_ball(lambda x: ball_table([(2, 2, 1)], x)[:, 0], 3)
    for i, v in c.values.items():
        assert abs(v - (1.0 if i == BallBasisIndex(2, 2, 1) else 0.0)) <= 1e-10
    c = expand_on_ball(lambda x: np.ones(len(x)), 2)
    assert c[(0, 0, 0)] == pytest.approx(math.sqrt(4 * math.pi / 3))
    assert max(abs(v) for i, v in c.values.items() if i != BallBasisIndex(0, 0, 0)) < 1e-13
    c = expand_on_ball(lambda x: x[:, 2], 3)
    assert {i for i, v in c.values.items() if abs(v) > 1e-13} == {BallBasisIndex(1, 1, 0)}


def test_round_trip_random_polynomial(rng):
    coeffs = rng.normal(size=(6, 6, 6))
    def f(x):
        out = np.zeros(len(x))
        for i in range(6):
            for j in range(6 - i):
                for k in range(6 - i - j):
                    out += coeffs[i, j, k] * x[:, 0] ** i * x[:, 1] ** j * x[:, 2] ** k
        return out
    c = expand_on_ball(f, 5)
    x = _inside(rng, 100)
    assert np.max(np.abs(synthesize(c, x) - f(x))) <= 1e-9


def test_json_round_trip():
    c = BallCoefficients(3, 2, {BallBasisIndex(1, 1, 0): 1 + 0.5j, BallBasisIndex(2, 2, -1): 0.1 / 3})
    back = BallCoefficients.from_json(c.to_json())
    assert back.values == c.values and back.M == 2
    data = json.loads(c.to_json())
    assert set(data) == {"d", "M", "entries"}
    assert set(data["entries"][0]) == {"m", "l", "k", "re", "im"}


def test_json_errors_mention_location():
    with pytest.raises(ValueError, match="line 2"):
        BallCoefficients.from_json('{"d": 3,\n "M": }')
    with pytest.raises(ValueError):
        BallCoefficients.from_json('{"entries": [{"m": 1}]}')
    with pytest.raises(DomainError):
        BallCoefficients.from_json('{"entries": [{"m": 1, "l": 0, "k": 0}]}')


def test_empty_synthesis():
    assert np.all(synthesize(BallCoefficients(3, 0, {}), np.zeros((4, 3))) == 0)
