"""Complex spherical harmonics on S^2, expansions, Gaunt coefficients.

Harmonics are ``Y_n^k(xi(phi, t)) = P~_n^k(t) exp(i k phi)`` with
``xi(phi, t) = (cos phi sqrt(1-t^2), sin phi sqrt(1-t^2), t)``. For general
dimension only zonal quantities are exposed; no explicit basis of
``S^(d-1)`` is built.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import DomainError
from .quadrature import gauss_jacobi, gauss_legendre, sphere_rule_s2
from .specfun import (
    assoc_legendre_table,
    harmonic_dimension,
    legendre_nd_table,
    sphere_measure,
)

__all__ = [
    "SphereCoefficients",
    "eval_ynk",
    "expand_s2",
    "gaunt_general_pair_sum",
    "gaunt_s2",
    "lm_index",
    "synthesize_s2",
    "triple_product_quad",
    "ylm_table",
]


def lm_index(n: int, k: int) -> int:
    """Column of ``Y_n^k`` in :func:`ylm_table` output."""
    return n * n + n + k


@dataclass
class SphereCoefficients:
    """Expansion ``{(n, k): <f, Y_n^k>}`` up to degree ``N`` on ``S^(d-1)``.

    For ``d = 3`` the order ``k`` runs over ``-n..n``; for other ``d`` keys are
    whatever basis indexing the caller uses (only per-degree quantities such
    as :func:`~conebeam_svd.funk_radon.sobolev_norm` are computed there).
    """

    d: int
    N: int
    values: dict = field(default_factory=dict)

    def l2_norm(self) -> float:
        return math.sqrt(math.fsum(abs(v) ** 2 for v in self.values.values()))

    def degrees(self) -> list[int]:
        return sorted({n for n, _ in self.values})

    def to_array(self) -> np.ndarray:
        """Dense vector ordered by :func:`lm_index` (``d = 3`` only)."""
        if self.d != 3:
            raise NotImplementedError("dense layout is defined for d = 3")
        out = np.zeros((self.N + 1) ** 2, dtype=complex)
        for (n, k), v in self.values.items():
            out[lm_index(n, k)] = v
        return out

    @classmethod
    def from_array(cls, arr, N: int) -> "SphereCoefficients":
        arr = np.asarray(arr)
        values = {(n, k): complex(arr[lm_index(n, k)]) for n in range(N + 1) for k in range(-n, n + 1)}
        return cls(d=3, N=N, values=values)


def _angles(xi) -> tuple[np.ndarray, np.ndarray]:
    xi = np.asarray(xi, dtype=float)
    if xi.shape[-1] != 3:
        raise DomainError(f"points on S^2 need 3 coordinates, got shape {xi.shape}")
    if np.any(np.abs(np.linalg.norm(xi, axis=-1) - 1.0) > 1e-12):
        raise DomainError("points must lie on the unit sphere (|xi| = 1 within 1e-12)")
    t = np.clip(xi[..., 2], -1.0, 1.0)
    phi = np.arctan2(xi[..., 1], xi[..., 0])
    return phi, t


def ylm_table(L: int, xi) -> np.ndarray:
    """All ``Y_n^k(xi)`` for ``n <= L``; shape ``xi.shape[:-1] + ((L+1)**2,)``."""
    phi, t = _angles(xi)
    plm = assoc_legendre_table(L, t)
    out = np.empty(t.shape + ((L + 1) ** 2,), dtype=complex)
    for k in range(L + 1):
        e = np.exp(1j * k * phi)
        sign = -1.0 if k % 2 else 1.0
        for n in range(k, L + 1):
            out[..., lm_index(n, k)] = plm[n, k] * e
            if k:
                out[..., lm_index(n, -k)] = sign * plm[n, k] * np.conj(e)
    return out


def eval_ynk(n: int, k: int, xi):
    """Spherical harmonic ``Y_n^k`` at one or many unit vectors."""
    if n < 0 or abs(k) > n:
        raise DomainError(f"need |k| <= n, got n={n}, k={k}")
    val = ylm_table(n, xi)[..., lm_index(n, k)]
    return val if val.ndim else complex(val)


def expand_s2(f, L: int) -> SphereCoefficients:
    """Coefficients ``<f, Y_n^k>`` for ``n <= L``.

    ``f`` is a callable on an ``(N, 3)`` array of unit vectors or the samples
    of ``f`` at the nodes of ``sphere_rule_s2(L)``. The result is exact for
    ``f`` of degree ``<= L + 1``.
    """
    rule = sphere_rule_s2(L)
    samples = f(rule.nodes) if callable(f) else np.asarray(f)
    if samples.shape != (len(rule),):
        raise ValueError(f"expected {len(rule)} samples, got shape {samples.shape}")
    Y = _rule_ylm(L)
    coeffs = (rule.weights * samples) @ np.conj(Y)
    return SphereCoefficients.from_array(coeffs, L)


@lru_cache(maxsize=64)
def _rule_ylm(L: int) -> np.ndarray:
    Y = ylm_table(L, sphere_rule_s2(L).nodes)
    Y.setflags(write=False)
    return Y


def synthesize_s2(coeffs: SphereCoefficients, xi) -> np.ndarray:
    """Evaluate ``sum c_{n,k} Y_n^k(xi)``."""
    Y = ylm_table(coeffs.N, xi)
    return Y @ coeffs.to_array()


def _signed_plm(table, n, k):
    val = table[n, abs(k)]
    return -val if (k < 0 and k % 2) else val


@lru_cache(maxsize=None)
def gaunt_s2(n1: int, k1: int, n2: int, k2: int, n: int, k: int) -> float:
    """``int_{S^2} Y_{n1}^{k1} Y_{n2}^{k2} conj(Y_n^k)``.

    Zero unless ``k = k1 + k2``, orders are in range, ``|n1 - n2| <= n <=
    n1 + n2`` and ``n1 + n2 + n`` is even. Otherwise the longitude integral
    is ``2 pi`` and the remaining integrand in ``t`` is a polynomial of degree
    ``n1 + n2 + n``, integrated exactly by Gauss-Legendre.
    """
    if min(n1, n2, n) < 0:
        raise DomainError("degrees must be nonnegative")
    if k != k1 + k2 or abs(k1) > n1 or abs(k2) > n2 or abs(k) > n:
        return 0.0
    if n < abs(n1 - n2) or n > n1 + n2 or (n1 + n2 + n) % 2:
        return 0.0
    gl = gauss_legendre((n1 + n2 + n) // 2 + 1)
    table = assoc_legendre_table(max(n1, n2, n), gl.nodes)
    integrand = _signed_plm(table, n1, k1) * _signed_plm(table, n2, k2) * _signed_plm(table, n, k)
    return 2.0 * math.pi * math.fsum(gl.weights * integrand)


@lru_cache(maxsize=None)
def triple_product_quad(n1: int, n2: int, n3: int, d: int) -> float:
    """``<P_{n1,d} P_{n2,d}, P_{n3,d}>`` with weight ``(1 - t^2)^((d-3)/2)``.

    Gauss-Legendre with the (polynomial) weight multiplied in for odd ``d``,
    Gauss-Jacobi for even ``d``; the node count makes either rule exact.
    Zero without quadrature when the parity or triangle condition fails.
    """
    if d < 3:
        raise DomainError(f"dimension must be at least 3, got {d}")
    if min(n1, n2, n3) < 0:
        raise DomainError("degrees must be nonnegative")
    total = n1 + n2 + n3
    top = max(n1, n2, n3)
    if total % 2 or 2 * top > total:
        return 0.0
    if d % 2:
        rule = gauss_legendre((total + d - 3) // 2 + 1)
        w = rule.weights * (1.0 - rule.nodes**2) ** ((d - 3) // 2)
    else:
        half = 0.5 * (d - 3)
        rule = gauss_jacobi(total // 2 + 1, half, half)
        w = rule.weights
    p = legendre_nd_table(top, d, rule.nodes)
    return math.fsum(w * p[n1] * p[n2] * p[n3])


def gaunt_general_pair_sum(m_plus_1: int, l: int, n: int, d: int) -> float:
    """Closed form of ``sum_j sum_i G^{n,i}_{m+1,j,l,k} conj(G^{n,i}_{m+1,j,l,k})``.

    The double sum over the orders of degrees ``m + 1`` and ``n`` collapses
    through the addition theorem and Funk-Hecke to
    ``N_{m+1,d} N_{n,d} |S^(d-2)| / |S^(d-1)|^2 <P_{m+1,d} P_{l,d}, P_{n,d}>``,
    independent of ``k``.
    """
    if (m_plus_1 + l + n) % 2:
        return 0.0
    scale = (
        harmonic_dimension(m_plus_1, d)
        * harmonic_dimension(n, d)
        * sphere_measure(d - 1)
        / sphere_measure(d) ** 2
    )
    return scale * triple_product_quad(m_plus_1, l, n, d)
