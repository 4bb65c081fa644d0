"""Spectral form of the generalized Funk-Radon transform ``S^(j)_d``.

``S^(j)_d`` integrates the ``j``-th normal derivative of ``f`` across the
great subsphere orthogonal to ``xi``. It is diagonal in spherical harmonics,
so everything here works on eigenvalues and coefficient maps. Negative ``j``
(``-1``: hemispherical transform, ``-2``: spherical cosine transform) is
defined by the same closed form.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DomainError
from .harmonics import SphereCoefficients
from .specfun import (
    double_factorial,
    legendre_nd,
    log_gamma_signed,
    signed_double_factorial,
    sphere_measure,
    weighted_derivative_at_zero,
)

__all__ = [
    "EigenvalueTable",
    "alpha_cosine_hat",
    "apply_sj",
    "asymptotic_exponent",
    "eigenvalue_table",
    "even_d_inversion_check",
    "nullspace_classify",
    "r_hat_integrodifferential",
    "s_hat",
    "s_hat_asymptotic",
    "s_hat_derivative",
    "s_hat_factorial",
    "s_hat_log",
    "sobolev_norm",
]

MIN_ORDER = -2


def _parity_sign(k: int) -> int:
    return -1 if k % 2 else 1


def _check(j: int, d: int, n: int) -> None:
    if d < 3:
        raise DomainError(f"dimension must be at least 3, got {d}")
    if j < MIN_ORDER:
        raise DomainError(f"order j must be >= {MIN_ORDER}, got {j}")
    if n < 0:
        raise DomainError(f"degree must be nonnegative, got {n}")


def nullspace_classify(j: int, d: int, n: int) -> bool:
    """True when degree-``n`` harmonics are annihilated by ``S^(j)_d``."""
    _check(j, d, n)
    return (n + j) % 2 == 1 or (d % 2 == 1 and n <= j - d + 1)


def s_hat_log(j: int, d: int, n: int) -> tuple[float, int]:
    """``(log|S^(j)_d(n)|, sign)``; the sign is 0 on the nullspace.

    Gamma-function form, usable for degrees where the factorials overflow:
    ``pi^((d-2)/2) (-1)^((n+j)/2) 2^(j+1) Gamma((n+j+1)/2) / Gamma((n-j+d-1)/2)``.
    """
    if nullspace_classify(j, d, n):
        return -math.inf, 0
    lg_num, s_num = log_gamma_signed(0.5 * (n + j + 1))
    lg_den, s_den = log_gamma_signed(0.5 * (n - j + d - 1))
    log_abs = 0.5 * (d - 2) * math.log(math.pi) + (j + 1) * math.log(2.0) + lg_num - lg_den
    return log_abs, _parity_sign((n + j) // 2) * s_num * s_den


def s_hat(j: int, d: int, n: int) -> float:
    """Eigenvalue of ``S^(j)_d`` on degree-``n`` spherical harmonics."""
    log_abs, sign = s_hat_log(j, d, n)
    return 0.0 if sign == 0 else sign * math.exp(log_abs)


def s_hat_factorial(j: int, d: int, n: int) -> float:
    """Same eigenvalue from the double-factorial form.

    ``|S^(d-2)| (-1)^((n+j)/2) (n+j-1)!! (d-3)!! / (n-j+d-3)!!``, with the
    double factorial continued to negative odd arguments for ``j < 0``.
    """
    if nullspace_classify(j, d, n):
        return 0.0
    ratio = (
        signed_double_factorial(n + j - 1)
        * double_factorial(d - 3)
        / signed_double_factorial(n - j + d - 3)
    )
    return sphere_measure(d - 1) * _parity_sign((n + j) // 2) * float(ratio)


def s_hat_derivative(j: int, d: int, n: int) -> float:
    """``|S^(d-2)| (-1)^j (d/dt)^j [P_{n,d}(t) (1-t^2)^((d-3)/2)]`` at 0, for ``j >= 0``."""
    _check(j, d, n)
    if j < 0:
        raise DomainError("the derivative form needs j >= 0")
    return sphere_measure(d - 1) * _parity_sign(j) * weighted_derivative_at_zero(n, d, j)


def asymptotic_exponent(j: int, d: int) -> float:
    """Power of ``n`` governing ``|S^(j)_d(n)|`` for large ``n``."""
    return j - 0.5 * (d - 2)


def s_hat_asymptotic(j: int, d: int, n: int) -> float:
    """Leading-order magnitude ``pi^((d-2)/2) 2^(d/2) n^(j-(d-2)/2)``."""
    if (n + j) % 2:
        raise DomainError(f"asymptotics need n + j even, got n={n}, j={j}")
    if n < max(j, 1):
        raise DomainError(f"asymptotics need n >= max(j, 1), got n={n}")
    return math.pi ** (0.5 * (d - 2)) * 2.0 ** (0.5 * d) * n ** asymptotic_exponent(j, d)


def apply_sj(coeffs: SphereCoefficients, j: int, d: int = 3) -> SphereCoefficients:
    """Multiply each degree-``n`` amplitude by ``S^(j)_d(n)``."""
    cache: dict[int, float] = {}
    out = {}
    for (n, k), v in coeffs.values.items():
        if n not in cache:
            cache[n] = s_hat(j, d, n)
        out[(n, k)] = v * cache[n]
    return SphereCoefficients(d=d, N=coeffs.N, values=out)


def sobolev_norm(coeffs: SphereCoefficients, s: float, d: int | None = None) -> float:
    """``H^s`` norm with weights ``(n + (d-2)/2)^(2s)``."""
    d = coeffs.d if d is None else d
    shift = 0.5 * (d - 2)
    return math.sqrt(
        math.fsum((n + shift) ** (2 * s) * abs(v) ** 2 for (n, _), v in coeffs.values.items())
    )


def even_d_inversion_check(d: int, N: int) -> float:
    """Largest deviation of ``S^(d-2) S^(0)`` from the inversion constant.

    For even ``d >= 4`` the product of eigenvalues on even degrees equals
    ``(-1)^((d-2)/2) |S^(d-2)|^2 ((d-3)!!)^2``. Odd degrees are annihilated by
    both factors and skipped.
    """
    if d % 2:
        raise DomainError(f"inversion check needs even d, got {d}")
    if d < 4:
        raise DomainError("the inversion constant is only established for even d >= 4")
    const = (sphere_measure(d - 1) * double_factorial(d - 3)) ** 2
    sign = _parity_sign((d - 2) // 2)
    worst = 0.0
    for n in range(0, N + 1, 2):
        prod = s_hat(d - 2, d, n) * s_hat(0, d, n)
        worst = max(worst, abs(sign * prod / const - 1.0))
    return worst


def _sine_series(order: int) -> list[Fraction]:
    coeffs = [Fraction(0)] * (order + 1)
    for i in range(1, order + 1, 2):
        coeffs[i] = Fraction(_parity_sign((i - 1) // 2), math.factorial(i))
    return coeffs


def _series_mul(a: list[Fraction], b: list[Fraction], order: int) -> list[Fraction]:
    out = [Fraction(0)] * (order + 1)
    for i, ai in enumerate(a):
        if ai:
            for k, bk in enumerate(b[: order + 1 - i]):
                out[i + k] += ai * bk
    return out


def r_hat_integrodifferential(j: int, d: int, n: int) -> float:
    """Eigenvalue ``|S^(d-2)| (d/dtheta)^j P_{n,d}(sin theta)`` at ``theta = 0``.

    ``P_{n,d}(sin theta)`` is expanded as a power series in ``theta`` truncated
    after ``theta^j``, which is all the derivative at zero reads.
    """
    if j < 0 or n < 0:
        raise DomainError(f"need j, n >= 0, got j={j}, n={n}")
    if d < 3:
        raise DomainError(f"dimension must be at least 3, got {d}")
    p = legendre_nd(n, d).exact
    sine = _sine_series(j)
    power = [Fraction(1)] + [Fraction(0)] * j
    total = [Fraction(0)] * (j + 1)
    for c in p:
        if c:
            total = [t + c * q for t, q in zip(total, power)]
        power = _series_mul(power, sine, j)
    return sphere_measure(d - 1) * float(total[j] * math.factorial(j))


def alpha_cosine_hat(alpha: float, d: int, n: int) -> float:
    """Eigenvalue of the ``|xi . eta|^alpha`` transform, up to an ``n``-independent factor.

    ``(-1)^(n/2) Gamma((n-alpha)/2) / Gamma((n+d+alpha)/2)`` for even ``n``,
    zero for odd ``n``. A pole of the numerator raises; a pole of the
    denominator gives zero.
    """
    if n < 0:
        raise DomainError(f"degree must be nonnegative, got {n}")
    if n % 2:
        return 0.0
    lg_num, s_num = log_gamma_signed(0.5 * (n - alpha))
    try:
        lg_den, s_den = log_gamma_signed(0.5 * (n + d + alpha))
    except DomainError:
        return 0.0
    return _parity_sign(n // 2) * s_num * s_den * math.exp(lg_num - lg_den)


@dataclass(frozen=True)
class EigenvalueTable:
    """Eigenvalues ``S^(j)_d(n)`` for a range of degrees."""

    d: int
    j: int
    values: dict = field(default_factory=dict)
    log_magnitudes: dict = field(default_factory=dict)

    def rows(self):
        """``(j, d, n, value, log10|value|, sign, is_null)`` in degree order."""
        for n in sorted(self.values):
            log_abs, sign = self.log_magnitudes[n]
            log10 = log_abs / math.log(10.0) if sign else -math.inf
            yield self.j, self.d, n, self.values[n], log10, sign, sign == 0


def eigenvalue_table(j: int, d: int, degrees) -> EigenvalueTable:
    """Tabulate eigenvalues over an iterable of degrees (log form kept alongside)."""
    degrees = list(degrees)
    logs = {n: s_hat_log(j, d, n) for n in degrees}
    values = {n: (0.0 if s == 0 else s * math.exp(la)) for n, (la, s) in logs.items()}
    return EigenvalueTable(d=d, j=j, values=values, log_magnitudes=logs)
