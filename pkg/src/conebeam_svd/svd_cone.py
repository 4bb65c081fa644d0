"""Singular value decomposition of the odd cone-beam transform.

For odd ``d`` the odd part ``D^odd`` maps the ball basis ``V_{m,l,k}`` to
``lambda_{m,l,d} W_{m,l,k}`` with ``W`` orthonormal on ``S^(d-1) x S^(d-1)``.
Singular values are available for any odd ``d`` through zonal sums;
singular functions are only built for ``d = 3``. Double-factorial ratios
are handled in log space throughout.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .ball_basis import BallBasisIndex, BallCoefficients, _as_index, enumerate_indices, synthesize
from .errors import DomainError
from .harmonics import gaunt_s2, lm_index, triple_product_quad, ylm_table
from .quadrature import sphere_rule_s2
from .specfun import double_factorial, harmonic_dimension, log_double_factorial, sphere_measure
from .xray import cone_beam_odd_batch

__all__ = [
    "NuNReport",
    "SingularTriple",
    "constant_upper_bound",
    "d3_upper_bound",
    "d_odd_forward_spectral",
    "decay_exponent",
    "eval_w",
    "forward_odd_on_grid",
    "lambda_",
    "lambda_d3",
    "lambda_general",
    "lower_bound_certificate",
    "mu",
    "nu",
    "nu_log",
    "nuN_monotonicity",
    "reconstruct",
    "singular_triple",
    "sum_rule",
    "triple_product_neumann",
    "triple_product_quad",
    "upper_bound",
    "w_on_grid",
]

LAMBDA_FLOOR = 1e-14


def _check_odd_d(d: int) -> None:
    if d < 3 or d % 2 == 0:
        raise DomainError(f"the cone-beam SVD needs d odd and >= 3, got d={d}")


def _check_ml(m: int, l: int) -> None:
    if not (0 <= l <= m) or (m + l) % 2:
        raise DomainError(f"need 0 <= l <= m with m + l even, got m={m}, l={l}")


def mu(m: int, d: int) -> float:
    """``sqrt(2^(d+1) pi^(d-1) / (2m + d))``."""
    _check_odd_d(d)
    return math.sqrt(2.0 ** (d + 1) * math.pi ** (d - 1) / (2 * m + d))


def nu_log(n: int, d: int) -> tuple[float, int]:
    """``(log|nu_{n,d}|, sign)`` for odd ``n``."""
    _check_odd_d(d)
    if n < 1 or n % 2 == 0:
        raise DomainError(f"nu is defined for odd n >= 1, got {n}")
    sign = -1 if ((n + 1) // 2) % 2 else 1
    return log_double_factorial(n - 1) - log_double_factorial(n + d - 3), sign


def nu(n: int, d: int) -> float:
    """``(-1)^((n+1)/2) (n-1)!! / (n+d-3)!!``."""
    log_abs, sign = nu_log(n, d)
    return sign * math.exp(log_abs)


def _odd_degrees(m: int, l: int):
    return range(m + 1 - l, m + 2 + l, 2)


def triple_product_neumann(m: int, n: int, l: int) -> float:
    """``<P_{m+1} P_n, P_l>`` on ``[-1, 1]`` from the double-factorial closed form."""
    if min(m, n, l) < 0:
        raise DomainError("degrees must be nonnegative")
    if (m + 1 + n + l) % 2 or n < abs(m + 1 - l) or n > m + 1 + l:
        return 0.0
    num = (l + m - n, l - m + n - 2, -l + m + n, l + m + n + 1)
    den = (l + m - n + 1, l - m + n - 1, -l + m + n + 1, l + m + n + 2)
    log_val = math.fsum(log_double_factorial(k) for k in num) - math.fsum(log_double_factorial(k) for k in den)
    return 2.0 * math.exp(log_val)


@lru_cache(maxsize=None)
def lambda_d3(m: int, l: int) -> float:
    """Singular value for ``d = 3``: ``sqrt(2 pi sum' (2n+1) ((n-1)!!/n!!)^2 <P_{m+1} P_n, P_l>)``."""
    _check_ml(m, l)
    terms = []
    for n in _odd_degrees(m, l):
        ratio = math.exp(2.0 * (log_double_factorial(n - 1) - log_double_factorial(n)))
        terms.append((2 * n + 1) * ratio * triple_product_neumann(m, n, l))
    return math.sqrt(2.0 * math.pi * math.fsum(terms))


@lru_cache(maxsize=None)
def lambda_general(m: int, l: int, d: int) -> float:
    """Singular value from the zonal sum valid for every odd ``d``."""
    _check_odd_d(d)
    _check_ml(m, l)
    scale = harmonic_dimension(m + 1, d) * mu(m, d) ** 2 * sphere_measure(d - 1) / sphere_measure(d) ** 2
    terms = [
        math.exp(2.0 * nu_log(n, d)[0]) * harmonic_dimension(n, d) * triple_product_quad(m + 1, l, n, d)
        for n in _odd_degrees(m, l)
    ]
    return math.sqrt(scale * math.fsum(terms))


def lambda_(m: int, l: int, d: int = 3) -> float:
    """Singular value ``lambda_{m,l,d}``; the explicit ``d = 3`` path is used when it applies."""
    _check_odd_d(d)
    return lambda_d3(m, l) if d == 3 else lambda_general(m, l, d)


def sum_rule(l: int, n: int, d: int) -> float:
    """``sum_k N_{k,d} |S^(d-2)| / |S^(d-1)| <P_k P_l, P_n>``, which equals ``P_l(1) P_n(1) = 1``."""
    ratio = sphere_measure(d - 1) / sphere_measure(d)
    return math.fsum(
        harmonic_dimension(k, d) * ratio * triple_product_quad(k, l, n, d) for k in range(abs(l - n), l + n + 1)
    )


# ---------------------------------------------------------------------------
# singular functions (d = 3)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SingularTriple:
    """``lambda`` and a separable recipe for ``W_idx``.

    ``W(a, omega) = sum over terms (j, n, c) of c conj(Y_{m+1}^j(a)) Y_n^{j+k}(omega)``.
    """

    idx: BallBasisIndex
    lam: float
    terms: tuple = field(repr=False)

    @property
    def omega_degrees(self) -> list[int]:
        return sorted({n for _, n, _ in self.terms})

    @property
    def a_degree(self) -> int:
        return self.idx.m + 1


@lru_cache(maxsize=None)
def _image_terms(idx: BallBasisIndex) -> tuple:
    # terms of D^odd V_idx before division by lambda
    m, l, k = idx
    scale = mu(m, 3)
    out = []
    for j in range(-(m + 1), m + 2):
        i = j + k
        for n in _odd_degrees(m, l):
            if abs(i) > n:
                continue
            g = gaunt_s2(m + 1, j, l, k, n, i)
            if g != 0.0:
                out.append((j, n, scale * nu(n, 3) * g))
    return tuple(out)


def singular_triple(idx) -> SingularTriple:
    idx = _as_index(idx)
    lam = lambda_d3(idx.m, idx.l)
    if lam < LAMBDA_FLOOR:
        raise DomainError(f"singular value {lam} below floor for {idx}")
    terms = tuple((j, n, c / lam) for j, n, c in _image_terms(idx))
    return SingularTriple(idx=idx, lam=lam, terms=terms)


def _separable_eval(idx: BallBasisIndex, terms, a, omega, paired: bool):
    m, l, k = idx
    A = np.conj(ylm_table(m + 1, np.atleast_2d(a)))
    Om = ylm_table(m + 1 + l, np.atleast_2d(omega))
    a_cols = [lm_index(m + 1, j) for j, _, _ in terms]
    w_cols = [lm_index(n, j + k) for j, n, _ in terms]
    coef = np.array([c for _, _, c in terms], dtype=complex)
    if not terms:
        shape = (len(A),) if paired else (len(A), len(Om))
        return np.zeros(shape, dtype=complex)
    if paired:
        return np.einsum("pt,pt,t->p", A[:, a_cols], Om[:, w_cols], coef)
    return (A[:, a_cols] * coef) @ Om[:, w_cols].T


def eval_w(idx, a, omega) -> np.ndarray:
    """``W_idx`` at paired rows of ``a`` and ``omega`` (single points give a scalar)."""
    triple = singular_triple(idx)
    single = np.ndim(a) == 1 and np.ndim(omega) == 1
    out = _separable_eval(triple.idx, triple.terms, a, omega, paired=True)
    return complex(out[0]) if single else out


def d_odd_forward_spectral(idx, a, omega) -> np.ndarray:
    """``D^odd V_idx`` from the harmonic expansion at paired rows of ``a`` and ``omega``."""
    idx = _as_index(idx)
    single = np.ndim(a) == 1 and np.ndim(omega) == 1
    out = _separable_eval(idx, _image_terms(idx), a, omega, paired=True)
    return complex(out[0]) if single else out


def w_on_grid(idx, a_nodes, omega_nodes) -> np.ndarray:
    """``W_idx`` on the product of two point sets; shape ``(len(a_nodes), len(omega_nodes))``."""
    triple = singular_triple(idx)
    return _separable_eval(triple.idx, triple.terms, a_nodes, omega_nodes, paired=False)


# ---------------------------------------------------------------------------
# bounds
# ---------------------------------------------------------------------------

def _bound_constant(d: int) -> float:
    # supremum of nu_{n,d}^2 N_{n,d} over odd n
    return math.pi if d == 3 else d / double_factorial(d - 2) ** 2


def upper_bound(m: int, l: int, d: int = 3) -> float:
    """``2^((d+1)/4) pi^((d-1)/4) sqrt(C_d (d-2)!! (l+1) / (2m+d))``."""
    _check_odd_d(d)
    _check_ml(m, l)
    return (
        2.0 ** ((d + 1) / 4)
        * math.pi ** ((d - 1) / 4)
        * math.sqrt(_bound_constant(d) * double_factorial(d - 2) * (l + 1) / (2 * m + d))
    )


def constant_upper_bound(d: int = 3) -> float:
    """Index-free bound ``(2 pi)^((d-1)/4) sqrt(C_d (d-2)!!)``; ``pi sqrt(2)`` for ``d = 3``."""
    _check_odd_d(d)
    return (2.0 * math.pi) ** ((d - 1) / 4) * math.sqrt(_bound_constant(d) * double_factorial(d - 2))


def d3_upper_bound(m: int) -> float:
    """Majorant of ``lambda_{m,l,3}`` over ``l``, decaying like ``m^(-1/8)``.

    Square root of ``2 pi^2 (2m+3)^(-1/4) sqrt(sum' sqrt(2n+1) / n^2)`` with
    the sum over odd ``n <= 2m + 1``.
    """
    if m < 0:
        raise DomainError(f"m must be nonnegative, got {m}")
    tail = math.fsum(math.sqrt(2 * n + 1) / n**2 for n in range(1, 2 * m + 2, 2))
    return math.sqrt(2.0 * math.pi**2 * (2 * m + 3) ** -0.25 * math.sqrt(tail))


def lower_bound_certificate(m: int, l: int, d: int = 3) -> float:
    """Explicit lower bound for ``lambda_{m,l,d}^2``.

    ``(2^((d+1)/2) pi^((d-1)/2) / (d-3)!!) ((m+d-2)! / (m+1)!) ((2m)!! / (2m+d-2)!!)^2``,
    which is ``4 pi ((2m)!! / (2m+1)!!)^2`` at ``d = 3``.
    """
    _check_odd_d(d)
    _check_ml(m, l)
    log_val = (
        0.5 * (d + 1) * math.log(2.0)
        + 0.5 * (d - 1) * math.log(math.pi)
        - log_double_factorial(d - 3)
        + math.lgamma(m + d - 1)
        - math.lgamma(m + 2)
        + 2.0 * (log_double_factorial(2 * m) - log_double_factorial(2 * m + d - 2))
    )
    return math.exp(log_val)


@dataclass(frozen=True)
class NuNReport:
    d: int
    degrees: tuple
    values: tuple
    direction: str
    monotone: bool
    bound: float
    within_bound: bool
    limit: float
    last_ratio_to_limit: float

    @property
    def ok(self) -> bool:
        return self.monotone and self.within_bound


def nuN_monotonicity(d: int, nmax: int) -> NuNReport:
    """Check that ``nu_{n,d}^2 N_{n,d}`` over odd ``n`` rises (``d = 3``) or falls (``d >= 5``)."""
    _check_odd_d(d)
    degrees = tuple(range(1, nmax + 1, 2))
    values = tuple(math.exp(2.0 * nu_log(n, d)[0]) * harmonic_dimension(n, d) for n in degrees)
    diffs = np.diff(values)
    direction = "increasing" if d == 3 else "decreasing"
    monotone = bool(np.all(diffs > 0)) if d == 3 else bool(np.all(diffs < 0))
    bound = _bound_constant(d)
    within = all(v <= bound * (1 + 1e-12) for v in values)
    limit = math.pi / math.factorial(d - 2)
    return NuNReport(d, degrees, values, direction, monotone, bound, within, limit, values[-1] / limit)


def decay_exponent(m_values, d: int = 3) -> float:
    """Least-squares slope of ``log max_l lambda_{m,l,d}`` against ``log m``."""
    m_values = [m for m in m_values if m > 0]
    logs_m = np.log(m_values)
    logs_lam = np.log([max(lambda_(m, l, d) for l in range(m % 2, m + 1, 2)) for m in m_values])
    slope, _ = np.polyfit(logs_m, logs_lam, 1)
    return float(slope)


# ---------------------------------------------------------------------------
# reconstruction
# ---------------------------------------------------------------------------

def forward_odd_on_grid(coeffs: BallCoefficients, L: int = 16, npoints: int | None = None) -> np.ndarray:
    """Ray-quadrature ``D^odd f`` on the product of ``sphere_rule_s2(L)`` with itself.

    ``f`` is the synthesis of ``coeffs``; the default ray rule is exact for
    its degree.
    """
    rule = sphere_rule_s2(L)
    n = len(rule)
    if not coeffs.values:
        return np.zeros((n, n), dtype=complex)
    npoints = max(i.m for i in coeffs.values) // 2 + 1 if npoints is None else npoints
    a = np.repeat(rule.nodes, n, axis=0)
    omega = np.tile(rule.nodes, (n, 1))
    values = cone_beam_odd_batch(lambda x: synthesize(coeffs, x), a, omega, npoints)
    return values.reshape(n, n)


def reconstruct(g, M: int, L: int = 16) -> BallCoefficients:
    """Project data ``g`` on the product grid onto every ``W_idx`` with ``m <= M``.

    ``g[p, q]`` holds ``D^odd f(a_p, omega_q)`` with both point sets the nodes
    of ``sphere_rule_s2(L)``. The inner products are exact when
    ``2L + 1 >= 4M + 2`` and ``f`` has degree ``<= M``; a warning is issued
    otherwise.
    """
    if 2 * L + 1 < 4 * M + 2:
        warnings.warn(
            f"band limit L={L} is not exact for degree M={M}; need 2L+1 >= 4M+2",
            RuntimeWarning,
            stacklevel=2,
        )
    rule = sphere_rule_s2(L)
    g = np.asarray(g)
    if g.shape != (len(rule), len(rule)):
        raise ValueError(f"expected data of shape {(len(rule), len(rule))}, got {g.shape}")
    wg = rule.weights[:, None] * g * rule.weights[None, :]
    values = {}
    for idx in enumerate_indices(M):
        triple = singular_triple(idx)
        W = _separable_eval(idx, triple.terms, rule.nodes, rule.nodes, paired=False)
        values[idx] = complex(np.sum(wg * np.conj(W))) / triple.lam
    return BallCoefficients(d=3, M=M, values=values)
