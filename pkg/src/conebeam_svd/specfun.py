"""Orthogonal polynomials, factorial utilities and zonal constants.

Polynomial coefficients are generated in exact rational arithmetic and
converted to doubles at the end, so closed-form identities between the
families (Gegenbauer, dimension-``d`` Legendre, Jacobi) hold to rounding.
Numerical evaluation at many points should go through the three-term
recurrences (:func:`legendre_nd_table`, :func:`assoc_legendre_table`)
rather than Horner on monomial coefficients, which loses accuracy once the
degree passes ~20.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

import numpy as np

from .errors import DomainError

__all__ = [
    "HalfIntegerGamma",
    "Polynomial",
    "assoc_legendre_normalized",
    "assoc_legendre_table",
    "double_factorial",
    "gegenbauer",
    "gegenbauer_rodrigues",
    "half_integer_gamma",
    "harmonic_dimension",
    "jacobi",
    "legendre_nd",
    "legendre_nd_eval",
    "legendre_nd_table",
    "log_double_factorial",
    "log_gamma_signed",
    "sphere_measure",
    "weighted_derivative_at_zero",
]


# ---------------------------------------------------------------------------
# factorials and Gamma
# ---------------------------------------------------------------------------

def double_factorial(n: int) -> int:
    """Exact double factorial ``n!!`` for ``n >= -1``.

    ``0!! = (-1)!! = 1`` (empty products).
    """
    n = int(n)
    if n < -1:
        raise DomainError(f"double factorial needs n >= -1, got {n}")
    result = 1
    for k in range(n, 1, -2):
        result *= k
    return result


def log_double_factorial(n: int) -> float:
    """Natural log of ``n!!`` for ``n >= -1``, safe for large ``n``."""
    n = int(n)
    if n < -1:
        raise DomainError(f"double factorial needs n >= -1, got {n}")
    # n!! = 2^(n/2) Gamma(n/2 + 1) * (sqrt(2/pi) if n odd)
    value = 0.5 * n * math.log(2.0) + math.lgamma(0.5 * n + 1.0)
    if n % 2:
        value += 0.5 * math.log(2.0 / math.pi)
    return value


def signed_double_factorial(n: int) -> Fraction:
    """Double factorial extended to negative odd ``n`` by ``(n-2)!! = n!!/n``.

    Gives ``(-1)!! = 1``, ``(-3)!! = -1``, ``(-5)!! = 1/3``, ... Negative even
    arguments are poles.
    """
    n = int(n)
    if n >= -1:
        return Fraction(double_factorial(n))
    if n % 2 == 0:
        raise DomainError(f"double factorial has a pole at {n}")
    value = Fraction(1)
    k = -1
    while k > n:
        value /= k  # (k-2)!! = k!!/k
        k -= 2
    return value


@dataclass(frozen=True)
class HalfIntegerGamma:
    """``Gamma(k/2)`` for a positive integer ``k`` held in log scale."""

    k: int
    log_value: float
    sign: int = 1

    @property
    def value(self) -> float:
        return self.sign * math.exp(self.log_value)


def half_integer_gamma(k: int) -> HalfIntegerGamma:
    k = int(k)
    if k < 1:
        raise DomainError(f"half_integer_gamma needs a positive numerator, got {k}")
    return HalfIntegerGamma(k=k, log_value=math.lgamma(0.5 * k))


def log_gamma_signed(x: float) -> tuple[float, int]:
    """Return ``(log|Gamma(x)|, sign Gamma(x))``; poles raise :class:`DomainError`."""
    if x <= 0 and float(x).is_integer():
        raise DomainError(f"Gamma has a pole at {x}")
    if x > 0:
        return math.lgamma(x), 1
    return math.lgamma(x), (-1) ** math.ceil(-x)


def sphere_measure(d: int) -> float:
    """Surface measure ``|S^(d-1)|`` of the unit sphere in ``R^d``."""
    if d < 1:
        raise DomainError(f"sphere_measure needs d >= 1, got {d}")
    return 2.0 * math.pi ** (0.5 * d) / math.gamma(0.5 * d)


def harmonic_dimension(n: int, d: int) -> int:
    """Dimension ``N_{n,d}`` of the degree-``n`` spherical harmonics on ``S^(d-1)``."""
    if n < 0 or d < 2:
        raise DomainError(f"harmonic_dimension needs n >= 0 and d >= 2, got n={n}, d={d}")
    if d == 2:
        return 1 if n == 0 else 2
    return math.comb(n + d - 1, d - 1) - math.comb(n + d - 3, d - 1)


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, Rational):
        return Fraction(x)
    return Fraction(float(x)).limit_denominator(10**9)


def _falling(z: Fraction, k: int) -> Fraction:
    out = Fraction(1)
    for i in range(k):
        out *= z - i
    return out


def _rising(z: Fraction, k: int) -> Fraction:
    out = Fraction(1)
    for i in range(k):
        out *= z + i
    return out


def _gbinom(z: Fraction, k: int) -> Fraction:
    if k < 0:
        return Fraction(0)
    return _falling(z, k) / math.factorial(k)


# ---------------------------------------------------------------------------
# dense univariate polynomials
# ---------------------------------------------------------------------------

def _strip(seq):
    seq = list(seq)
    while len(seq) > 1 and seq[-1] == 0:
        seq.pop()
    return seq or [0]


def _mul_exact(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _add_exact(a, b):
    n = max(len(a), len(b))
    a = list(a) + [Fraction(0)] * (n - len(a))
    b = list(b) + [Fraction(0)] * (n - len(b))
    return [x + y for x, y in zip(a, b)]


def _pow_exact(a, k):
    out = [Fraction(1)]
    for _ in range(k):
        out = _mul_exact(out, a)
    return out


@dataclass(frozen=True)
class Polynomial:
    """Dense real polynomial; ``coeffs[i]`` multiplies ``t**i``.

    When the polynomial was generated from rational recurrences the exact
    coefficients are kept alongside in ``exact`` and propagated through
    arithmetic, so identities can be checked without rounding.
    """

    coeffs: tuple
    exact: tuple | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.exact is not None:
            exact = tuple(_strip(Fraction(c) for c in self.exact))
            object.__setattr__(self, "exact", exact)
            object.__setattr__(self, "coeffs", tuple(float(c) for c in exact))
        else:
            object.__setattr__(self, "coeffs", tuple(_strip(float(c) for c in self.coeffs)))

    @classmethod
    def from_exact(cls, coeffs) -> "Polynomial":
        return cls(coeffs=(), exact=tuple(coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        for c in reversed(self.coeffs):
            out = out * t + c
        return out if out.ndim else float(out)

    def exact_at(self, t) -> Fraction:
        if self.exact is None:
            raise ValueError("polynomial carries no exact coefficients")
        t = _frac(t)
        out = Fraction(0)
        for c in reversed(self.exact):
            out = out * t + c
        return out

    def deriv(self, order: int = 1) -> "Polynomial":
        if self.exact is not None:
            c = list(self.exact)
            for _ in range(order):
                c = [i * c[i] for i in range(1, len(c))] or [Fraction(0)]
            return Polynomial.from_exact(c)
        c = np.polynomial.polynomial.polyder(np.array(self.coeffs), order) if order else self.coeffs
        return Polynomial(tuple(c))

    def integral(self, a: float, b: float) -> float:
        """Exact definite integral of the polynomial over ``[a, b]``."""
        if self.exact is not None:
            fa, fb = _frac(a), _frac(b)
            s = sum(c * (fb ** (i + 1) - fa ** (i + 1)) / (i + 1) for i, c in enumerate(self.exact))
            return float(s)
        return float(sum(c * (b ** (i + 1) - a ** (i + 1)) / (i + 1) for i, c in enumerate(self.coeffs)))

    def __add__(self, other):
        other = _as_poly(other)
        if self.exact is not None and other.exact is not None:
            return Polynomial.from_exact(_add_exact(self.exact, other.exact))
        return Polynomial(tuple(np.polynomial.polynomial.polyadd(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        if self.exact is not None:
            return Polynomial.from_exact([-c for c in self.exact])
        return Polynomial(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        other = _as_poly(other)
        if self.exact is not None and other.exact is not None:
            return Polynomial.from_exact(_mul_exact(self.exact, other.exact))
        return Polynomial(tuple(np.polynomial.polynomial.polymul(self.coeffs, other.coeffs)))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Polynomial.from_exact([1]) if self.exact is not None else Polynomial((1.0,))
        for _ in range(int(k)):
            out = out * self
        return out


def _as_poly(x) -> Polynomial:
    if isinstance(x, Polynomial):
        return x
    if isinstance(x, (int, Rational)):
        return Polynomial.from_exact([Fraction(x)])
    return Polynomial((float(x),))


# ---------------------------------------------------------------------------
# classical families
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _gegenbauer_exact(n: int, alpha: Fraction) -> tuple:
    coeffs = [Fraction(0)] * (n + 1)
    for m in range(n // 2 + 1):
        # Gamma(n-m+alpha)/Gamma(alpha) = (alpha)_{n-m}
        c = (-1) ** m * _rising(alpha, n - m) / (math.factorial(m) * math.factorial(n - 2 * m))
        coeffs[n - 2 * m] += c * 2 ** (n - 2 * m)
    return tuple(coeffs)


def gegenbauer(n: int, alpha) -> Polynomial:
    """Gegenbauer polynomial ``C_n^(alpha)`` from its explicit finite sum."""
    alpha = _frac(alpha)
    if n < 0:
        raise DomainError(f"degree must be nonnegative, got {n}")
    if alpha <= Fraction(-1, 2):
        raise DomainError(f"Gegenbauer parameter must exceed -1/2, got {alpha}")
    return Polynomial.from_exact(_gegenbauer_exact(int(n), alpha))


@lru_cache(maxsize=None)
def _gegenbauer_rodrigues_exact(n: int, alpha: Fraction) -> tuple:
    beta = alpha - Fraction(1, 2)
    p = n + beta
    one_minus = [Fraction(1), Fraction(-1)]
    one_plus = [Fraction(1), Fraction(1)]
    acc = [Fraction(0)]
    for k in range(n + 1):
        c = math.comb(n, k) * (-1) ** k * _falling(p, k) * _falling(p, n - k)
        if c == 0:
            continue
        term = _mul_exact(_pow_exact(one_minus, n - k), _pow_exact(one_plus, k))
        acc = _add_exact(acc, [c * x for x in term])
    pref = (-1) ** n * _rising(2 * alpha, n) / (2**n * math.factorial(n) * _rising(alpha + Fraction(1, 2), n))
    return tuple(pref * x for x in acc)


def gegenbauer_rodrigues(n: int, alpha) -> Polynomial:
    """``C_n^(alpha)`` evaluated through the Rodrigues formula.

    The ``n``-th derivative of ``(1 - t^2)^(n + alpha - 1/2)`` is taken with
    the Leibniz rule on ``(1 - t)^p (1 + t)^p``, which leaves a polynomial
    after dividing out ``(1 - t^2)^(alpha - 1/2)``. Independent of the
    explicit sum used by :func:`gegenbauer`.
    """
    alpha = _frac(alpha)
    if alpha <= Fraction(-1, 2):
        raise DomainError(f"Gegenbauer parameter must exceed -1/2, got {alpha}")
    return Polynomial.from_exact(_gegenbauer_rodrigues_exact(int(n), alpha))


@lru_cache(maxsize=None)
def _chebyshev_exact(n: int) -> tuple:
    t0, t1 = [Fraction(1)], [Fraction(0), Fraction(1)]
    if n == 0:
        return tuple(t0)
    for _ in range(n - 1):
        t0, t1 = t1, _add_exact(_mul_exact([Fraction(0), Fraction(2)], t1), [-c for c in t0])
    return tuple(t1)


@lru_cache(maxsize=None)
def legendre_nd(n: int, d: int) -> Polynomial:
    """Legendre polynomial ``P_{n,d}`` of dimension ``d``, normalized by ``P(1) = 1``.

    ``d = 2`` gives the Chebyshev polynomial ``T_n`` (the ``alpha -> 0``
    limit of the Gegenbauer relation).
    """
    if n < 0:
        raise DomainError(f"degree must be nonnegative, got {n}")
    if d < 2:
        raise DomainError(f"dimension must be at least 2, got {d}")
    if d == 2:
        return Polynomial.from_exact(_chebyshev_exact(n))
    c = _gegenbauer_exact(n, Fraction(d - 2, 2))
    scale = math.comb(n + d - 3, n)
    return Polynomial.from_exact([x / scale for x in c])


@lru_cache(maxsize=None)
def _jacobi_exact(n: int, alpha: Fraction, beta: Fraction) -> tuple:
    xm = [Fraction(-1, 2), Fraction(1, 2)]  # (x - 1)/2
    xp = [Fraction(1, 2), Fraction(1, 2)]  # (x + 1)/2
    acc = [Fraction(0)]
    for s in range(n + 1):
        c = _gbinom(n + alpha, n - s) * _gbinom(n + beta, s)
        if c == 0:
            continue
        term = _mul_exact(_pow_exact(xm, s), _pow_exact(xp, n - s))
        acc = _add_exact(acc, [c * x for x in term])
    return tuple(acc)


def jacobi(n: int, alpha, beta) -> Polynomial:
    """Jacobi polynomial ``P_n^(alpha, beta)`` with ``P_n(1) = binom(n + alpha, n)``."""
    alpha, beta = _frac(alpha), _frac(beta)
    if n < 0:
        raise DomainError(f"degree must be nonnegative, got {n}")
    if alpha <= -1 or beta <= -1:
        raise DomainError(f"Jacobi parameters must exceed -1, got ({alpha}, {beta})")
    return Polynomial.from_exact(_jacobi_exact(int(n), alpha, beta))


def legendre_nd_table(nmax: int, d: int, t) -> np.ndarray:
    """Values of ``P_{n,d}(t)`` for ``n = 0..nmax``; shape ``(nmax + 1,) + t.shape``.

    Uses ``(n + d - 2) P_{n+1} = (2n + d - 2) t P_n - n P_{n-1}``.
    """
    t = np.asarray(t, dtype=float)
    out = np.empty((nmax + 1,) + t.shape)
    out[0] = 1.0
    if nmax >= 1:
        out[1] = t
    for n in range(1, nmax):
        out[n + 1] = ((2 * n + d - 2) * t * out[n] - n * out[n - 1]) / (n + d - 2)
    return out


def legendre_nd_eval(n: int, d: int, t):
    """``P_{n,d}(t)`` by recurrence."""
    out = legendre_nd_table(n, d, t)[n]
    return out if out.ndim else float(out)


def weighted_derivative_at_zero(n: int, d: int, j: int) -> float:
    """``(d/dt)^j [P_{n,d}(t) (1 - t^2)^((d-3)/2)]`` at ``t = 0``.

    The weight is expanded in its binomial series, which terminates for odd
    ``d`` and is truncated at ``t^j`` otherwise; only the coefficient of
    ``t^j`` of the product is needed, so the result is exact.
    """
    if n < 0 or j < 0:
        raise DomainError(f"need n, j >= 0, got n={n}, j={j}")
    if d < 2:
        raise DomainError(f"dimension must be at least 2, got {d}")
    p = legendre_nd(n, d).exact
    half = Fraction(d - 3, 2)
    acc = Fraction(0)
    for k in range(j // 2 + 1):
        i = j - 2 * k
        if i < len(p):
            acc += p[i] * _gbinom(half, k) * (-1) ** k
    return float(acc * math.factorial(j))


# ---------------------------------------------------------------------------
# associated Legendre functions on S^2
# ---------------------------------------------------------------------------

def assoc_legendre_table(L: int, t) -> np.ndarray:
    """Normalized associated Legendre functions for ``0 <= k <= n <= L``.

    Returns ``out[n, k, ...]`` with the Condon-Shortley phase included and the
    normalization ``2 pi int |P_n^k|^2 dt = 1``; entries with ``k > n`` are 0.
    """
    t = np.asarray(t, dtype=float)
    u = np.sqrt(np.clip(1.0 - t * t, 0.0, None))
    out = np.zeros((L + 1, L + 1) + t.shape)
    out[0, 0] = 1.0 / math.sqrt(4.0 * math.pi)
    for m in range(1, L + 1):
        out[m, m] = -math.sqrt((2 * m + 1) / (2.0 * m)) * u * out[m - 1, m - 1]
    for m in range(L):
        out[m + 1, m] = math.sqrt(2 * m + 3) * t * out[m, m]
    for m in range(L + 1):
        for n in range(m + 2, L + 1):
            a_n = math.sqrt((4.0 * n * n - 1) / (n * n - m * m))
            a_prev = math.sqrt((4.0 * (n - 1) ** 2 - 1) / ((n - 1) ** 2 - m * m))
            out[n, m] = a_n * (t * out[n - 1, m] - out[n - 2, m] / a_prev)
    return out


def assoc_legendre_normalized(n: int, k: int, t):
    """Normalized associated Legendre function ``P~_n^k(t)``, any ``|k| <= n``.

    Negative orders follow ``P~_n^(-k) = (-1)^k P~_n^k``.
    """
    if n < 0 or abs(k) > n:
        raise DomainError(f"need |k| <= n, got n={n}, k={k}")
    t = np.asarray(t, dtype=float)
    if np.any(np.abs(t) > 1.0 + 1e-12):
        raise DomainError("argument must lie in [-1, 1]")
    val = assoc_legendre_table(n, np.clip(t, -1.0, 1.0))[n, abs(k)]
    if k < 0 and k % 2:
        val = -val
    return val if val.ndim else float(val)
