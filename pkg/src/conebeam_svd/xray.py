"""Radon and cone-beam transforms on ``B^3`` and the Grangeat identities.

Source points ``a`` lie on the unit sphere and rays ``a + t omega`` cross
the ball for ``0 <= t <= -2 a . omega``. Test functions are the basis
``V_{m,l,k}``, whose Radon transform is known in closed form.
"""
from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .ball_basis import BallBasisIndex, _as_index, ball_table
from .errors import DomainError
from .funk_radon import apply_sj, s_hat
from .harmonics import eval_ynk, expand_s2, synthesize_s2
from .quadrature import disk_rule, gauss_jacobi, ray_rules_batch, sphere_rule_about
from .specfun import Polynomial, double_factorial, gegenbauer, legendre_nd_eval

__all__ = [
    "cone_beam",
    "cone_beam_batch",
    "cone_beam_odd",
    "cone_beam_odd_batch",
    "cone_beam_odd_basis",
    "grangeat_residual",
    "grangeat_sides",
    "grangeat_variant_residual",
    "grangeat_variant_sides",
    "radon_derivative_closed_form",
    "radon_numeric",
    "radon_profile",
    "radon_svd_prefactor",
    "radon_svd_rhs",
    "radon_svd_rhs_ds",
    "variant_eigenvalue_product",
    "variant_kernel_eigenvalue",
    "variant_kernel_closed_form",
]


def _unit(v, name):
    v = np.asarray(v, dtype=float)
    if abs(np.linalg.norm(v) - 1.0) > 1e-9:
        raise DomainError(f"{name} must be a unit vector")
    return v


# ---------------------------------------------------------------------------
# Radon transform
# ---------------------------------------------------------------------------

def radon_numeric(f, omega, s: float, L: int = 8):
    """Integral of ``f`` over the slice ``{x . omega = s}`` of the ball.

    Polar rule on the disk of radius ``sqrt(1 - s^2)``; exact for polynomial
    ``f`` of degree ``<= 2L + 1``.
    """
    omega = _unit(omega, "omega")
    if abs(s) >= 1.0:
        return 0.0
    rule = disk_rule(s * omega, omega, math.sqrt(1.0 - s * s), L)
    return rule.apply(f)


def radon_svd_prefactor(m: int, d: int = 3) -> float:
    """``sqrt(2m+d) Gamma(d/2) m! / (2^(1-d) pi^(1-d/2) (m+d-1)!)``."""
    log_val = (
        0.5 * math.log(2 * m + d)
        + math.lgamma(0.5 * d)
        + math.lgamma(m + 1)
        - (1 - d) * math.log(2.0)
        - (1 - 0.5 * d) * math.log(math.pi)
        - math.lgamma(m + d)
    )
    return math.exp(log_val)


@lru_cache(maxsize=None)
def radon_profile(m: int, d: int = 3) -> Polynomial:
    """``(1 - s^2)^((d-1)/2) C_m^(d/2)(s)`` as a polynomial (odd ``d``)."""
    if d % 2 == 0 or d < 3:
        raise DomainError(f"polynomial Radon profile needs odd d >= 3, got {d}")
    one_minus = Polynomial.from_exact([1, 0, -1]) ** ((d - 1) // 2)
    return one_minus * gegenbauer(m, 0.5 * d)


def radon_svd_rhs(idx, omega, s: float, d: int = 3) -> complex:
    """Closed-form ``R V_idx(omega, s)`` (``d = 3``)."""
    return radon_svd_rhs_ds(idx, omega, s, 0, d)


def radon_svd_rhs_ds(idx, omega, s: float, order: int, d: int = 3) -> complex:
    """``(d/ds)^order`` of the closed-form Radon transform, by exact polynomial differentiation."""
    if d != 3:
        raise NotImplementedError("spatial Radon evaluation is provided for d = 3")
    idx = _as_index(idx)
    omega = _unit(omega, "omega")
    if abs(s) > 1.0:
        return 0j
    radial = radon_profile(idx.m, d).deriv(order)(s)
    return radon_svd_prefactor(idx.m, d) * radial * eval_ynk(idx.l, idx.k, omega)


def radon_derivative_closed_form(m: int, d: int) -> Polynomial:
    """``(d/ds)^(d-2)`` of :func:`radon_profile` written through ``C_{m+1}^((d-2)/2)``.

    Equals ``(-1)^((d-1)/2) (m+d-1)! / ((d-2) m!) C_{m+1}^((d-2)/2)(s)``.
    """
    if d % 2 == 0 or d < 3:
        raise DomainError(f"needs odd d >= 3, got {d}")
    const = (-1) ** ((d - 1) // 2) * math.factorial(m + d - 1) / ((d - 2) * math.factorial(m))
    return Polynomial([const]) * gegenbauer(m + 1, 0.5 * (d - 2))


# ---------------------------------------------------------------------------
# cone-beam transform
# ---------------------------------------------------------------------------

def cone_beam_batch(f, a, omega, npoints: int = 16) -> np.ndarray:
    """``D f(a_i, omega_i)`` for paired rows; ``f`` takes ``(..., 3)`` point arrays."""
    points, weights = ray_rules_batch(a, omega, npoints)
    values = np.asarray(f(points.reshape(-1, 3))).reshape(weights.shape)
    return np.sum(weights * values, axis=-1)


def cone_beam(f, a, omega, npoints: int = 16):
    """Integral of ``f`` along the ray from ``a`` in direction ``omega``."""
    a = _unit(a, "a")
    omega = _unit(omega, "omega")
    val = cone_beam_batch(f, a[None], omega[None], npoints)[0]
    return val.item()


def cone_beam_odd_batch(f, a, omega, npoints: int = 16) -> np.ndarray:
    """``(D f(a, omega) - D f(a, -omega)) / 2`` for paired rows."""
    a = np.atleast_2d(np.asarray(a, dtype=float))
    omega = np.atleast_2d(np.asarray(omega, dtype=float))
    a, omega = np.broadcast_arrays(a, omega)
    both = cone_beam_batch(f, np.concatenate([a, a]), np.concatenate([omega, -omega]), npoints)
    n = len(a)
    return 0.5 * (both[:n] - both[n:])


def cone_beam_odd(f, a, omega, npoints: int = 16):
    """Odd part in ``omega`` of the cone-beam transform."""
    a = _unit(a, "a")
    omega = _unit(omega, "omega")
    return cone_beam_odd_batch(f, a[None], omega[None], npoints)[0].item()


def _basis_function(idx: BallBasisIndex):
    return lambda x: ball_table([idx], x)[..., 0]


def cone_beam_odd_basis(idx, a, omega) -> np.ndarray:
    """``D^odd V_idx`` at paired rows of ``a`` and ``omega``, with an exact ray rule."""
    idx = _as_index(idx)
    return cone_beam_odd_batch(_basis_function(idx), a, omega, idx.m // 2 + 1)


# ---------------------------------------------------------------------------
# Grangeat identities (d = 3)
# ---------------------------------------------------------------------------

def _odd_part_coefficients(idx: BallBasisIndex, a):
    # D^odd V(a, .) is a spherical polynomial of degree <= 2m + 1
    L = 2 * idx.m + 1
    return expand_s2(lambda xi: cone_beam_odd_basis(idx, a[None], xi), L)


def grangeat_sides(idx, a, omega) -> tuple[complex, complex]:
    """``(-d/ds R V(omega, a . omega), S^(1)[D V(a, .)](omega))``.

    The right side uses the odd part of ``D V(a, .)``, which ``S^(1)`` cannot
    tell apart from ``D V`` but which, unlike ``D V``, is a polynomial.
    """
    idx = _as_index(idx)
    a = _unit(a, "a")
    omega = _unit(omega, "omega")
    lhs = -radon_svd_rhs_ds(idx, omega, float(a @ omega), 1)
    coeffs = apply_sj(_odd_part_coefficients(idx, a), 1, 3)
    rhs = complex(synthesize_s2(coeffs, omega[None])[0])
    return lhs, rhs


def grangeat_residual(idx, a, omega) -> float:
    """``|(-1)^d d/ds R f(omega, a . omega) - S^(d-2) D f(a, .)(omega)|`` for ``f = V_idx``, ``d = 3``."""
    lhs, rhs = grangeat_sides(idx, a, omega)
    return abs(lhs - rhs)


def grangeat_variant_sides(idx, a, omega) -> tuple[complex, complex]:
    """``(S^(-1)[w -> d/ds R f(w, a . w)](omega), int h(xi . omega) D f(a, xi) dxi)``.

    ``h(t) = 2t / sqrt(1 - t^2)``. The left side expands the composed
    function of ``w`` and scales by the hemispherical eigenvalues; the right
    side uses a Gauss-Jacobi rule in ``t = xi . omega`` with weight
    ``(1 - t^2)^(-1/2)``. Because ``h`` is odd only ``D^odd`` contributes.
    """
    idx = _as_index(idx)
    a = _unit(a, "a")
    omega = _unit(omega, "omega")
    L = 2 * idx.m + 1

    def composed(w):
        s = w @ a
        prof = radon_profile(idx.m).deriv(1)(s)
        Y = np.asarray(eval_ynk(idx.l, idx.k, w))
        return radon_svd_prefactor(idx.m) * prof * Y

    coeffs = apply_sj(expand_s2(composed, L), -1, 3)
    lhs = complex(synthesize_s2(coeffs, omega[None])[0])

    rule = sphere_rule_about(omega, L, -0.5)
    t = rule.nodes @ omega
    rhs = rule.integrate(2.0 * t * cone_beam_odd_basis(idx, a[None], rule.nodes))
    return lhs, complex(rhs)


def grangeat_variant_residual(idx, a, omega, sign: int = 1) -> float:
    """``|sign * S^(-1)[d/ds R f] - int h D f|``.

    ``sign = 1`` is the identity that holds; ``sign = -1`` reproduces the
    minus sign that the companion ``S^(-1) S^(1)`` eigenvalue product would
    wrongly suggest (its residual is twice the magnitude of either side).
    """
    lhs, rhs = grangeat_variant_sides(idx, a, omega)
    return abs(sign * lhs - rhs)


def variant_eigenvalue_product(n: int) -> float:
    """``S^(-1)_3(n) S^(1)_3(n)``."""
    return s_hat(-1, 3, n) * s_hat(1, 3, n)


def variant_kernel_closed_form(n: int) -> float:
    """``4 pi^2 (n-2)!! n!! / ((n-1)!! (n+1)!!)`` for odd ``n``, else 0."""
    if n % 2 == 0:
        return 0.0
    return 4.0 * math.pi**2 * double_factorial(n - 2) * double_factorial(n) / (
        double_factorial(n - 1) * double_factorial(n + 1)
    )


def variant_kernel_eigenvalue(n: int) -> float:
    """Funk-Hecke eigenvalue ``2 pi int h(t) P_n(t) dt`` of the variant kernel, by Gauss-Jacobi."""
    rule = gauss_jacobi(n // 2 + 2, -0.5, -0.5)
    return 2.0 * math.pi * rule.integrate(2.0 * rule.nodes * legendre_nd_eval(n, 3, rule.nodes))
