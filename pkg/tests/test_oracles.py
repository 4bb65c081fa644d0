import math

import numpy as np
import pytest

from conebeam_svd.funk_radon import s_hat
from conebeam_svd.oracles import (
    cosine_transform_oracle,
    fd_eigenvalue,
    fd_weighted_derivative,
    great_circle_integral,
    hemispherical_oracle,
    split_interval_integral,
)

# integrals of the sign and absolute-value kernels against P_n, done by hand
HEMI = {1: math.pi, 3: -math.pi / 4, 5: math.pi / 8, 7: -0.2454369260617026}
COSINE = {0: math.pi, 2: math.pi / 4, 4: -0.1308996938995747, 6: 0.04908738521234052}


def test_fd_derivative_examples():
    assert fd_weighted_derivative(2, 3, 2) == pytest.approx(3.0)
    assert fd_weighted_derivative(0, 5, 2) == pytest.approx(-2.0)
    assert fd_weighted_derivative(3, 3, 0) == pytest.approx(0.0, abs=1e-30)


def test_fd_eigenvalue_matches_closed_form():
    for j, d, n in [(0, 3, 4), (1, 3, 3), (2, 4, 6), (3, 5, 7)]:
        assert fd_eigenvalue(j, d, n) == pytest.approx(s_hat(j, d, n), rel=1e-10, abs=1e-12)


def test_great_circle_length_and_linear():
    xi = np.array([0.0, 0.0, 1.0])
    assert great_circle_integral(lambda p: np.ones(len(p)), xi) == pytest.approx(2 * math.pi)
    assert great_circle_integral(lambda p: p[:, 0] ** 2, xi) == pytest.approx(math.pi)
    assert great_circle_integral(lambda p: p[:, 2], xi) == pytest.approx(0.0, abs=1e-15)


def test_split_interval_handles_kink():
    assert split_interval_integral(np.abs) == pytest.approx(1.0, abs=1e-15)
    assert split_interval_integral(lambda t: np.abs(t) ** 3) == pytest.approx(0.5, abs=1e-15)


@pytest.mark.parametrize("n", sorted(HEMI))
def test_hemispherical(n):
    assert hemispherical_oracle(n) == pytest.approx(HEMI[n], abs=1e-13)
    assert s_hat(-1, 3, n) == pytest.approx(HEMI[n], abs=1e-13)
    assert hemispherical_oracle(n + 1) == pytest.approx(0.0, abs=1e-14)


@pytest.mark.parametrize("n", sorted(COSINE))
def test_cosine(n):
    assert cosine_transform_oracle(n) == pytest.approx(COSINE[n], abs=1e-13)
    assert s_hat(-2, 3, n) == pytest.approx(COSINE[n], abs=1e-13)
