"""Quadrature rules with a declared polynomial exactness degree.

Every rule is a frozen :class:`QuadratureRule`; node and weight arrays are
marked read-only so a cached rule can be shared freely.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.special import roots_jacobi

from .errors import DomainError

__all__ = [
    "QuadratureRule",
    "ball_rule",
    "disk_rule",
    "gauss_jacobi",
    "gauss_legendre",
    "orthonormal_frame",
    "ray_rule",
    "ray_rules_batch",
    "sphere_rule_about",
    "sphere_rule_s2",
]

_DOMAINS = {"interval", "sphere", "ball", "segment", "disk"}


def _frozen(a) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and positive weights exact for polynomials up to ``exact_degree``."""

    nodes: np.ndarray
    weights: np.ndarray
    exact_degree: int
    domain_tag: str
    meta: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if self.domain_tag not in _DOMAINS:
            raise ValueError(f"unknown domain tag {self.domain_tag!r}")
        object.__setattr__(self, "nodes", _frozen(self.nodes))
        object.__setattr__(self, "weights", _frozen(self.weights))

    def __len__(self) -> int:
        return len(self.weights)

    @property
    def measure(self) -> float:
        return math.fsum(self.weights)

    def integrate(self, values) -> complex | float:
        """Weighted sum of ``values`` at the nodes, compensated and in node order."""
        values = np.asarray(values)
        if values.shape[:1] != self.weights.shape:
            raise ValueError(f"expected {len(self)} samples, got shape {values.shape}")
        prod = self.weights.reshape((-1,) + (1,) * (values.ndim - 1)) * values
        if values.ndim > 1:
            return np.sum(prod, axis=0)
        if np.iscomplexobj(prod):
            return complex(math.fsum(prod.real), math.fsum(prod.imag))
        return math.fsum(prod)

    def apply(self, f) -> complex | float:
        """Integrate a callable evaluated at the nodes."""
        return self.integrate(f(self.nodes))


@lru_cache(maxsize=None)
def gauss_legendre(npoints: int) -> QuadratureRule:
    """Gauss-Legendre rule on ``[-1, 1]`` (numpy's Golub-Welsch nodes)."""
    n = int(npoints)
    if n < 1:
        raise DomainError(f"need at least one node, got {n}")
    x, w = np.polynomial.legendre.leggauss(n)
    order = np.argsort(x)
    x, w = x[order], w[order]
    # exact symmetry keeps antipodal sphere nodes on the grid
    x = 0.5 * (x - x[::-1])
    w = 0.5 * (w + w[::-1])
    return QuadratureRule(x, w, 2 * n - 1, "interval")


@lru_cache(maxsize=None)
def gauss_jacobi(npoints: int, alpha: float, beta: float) -> QuadratureRule:
    """Gauss rule for the weight ``(1 - x)^alpha (1 + x)^beta`` on ``[-1, 1]``."""
    n = int(npoints)
    if n < 1:
        raise DomainError(f"need at least one node, got {n}")
    if alpha <= -1 or beta <= -1:
        raise DomainError(f"Jacobi parameters must exceed -1, got ({alpha}, {beta})")
    x, w = roots_jacobi(n, alpha, beta)
    order = np.argsort(x)
    return QuadratureRule(x[order], w[order], 2 * n - 1, "interval")


def orthonormal_frame(normal) -> tuple[np.ndarray, np.ndarray]:
    """Two unit vectors completing ``normal`` to a right-handed orthonormal basis."""
    n = np.asarray(normal, dtype=float)
    n = n / np.linalg.norm(n)
    axis = np.zeros(3)
    axis[int(np.argmin(np.abs(n)))] = 1.0
    e1 = np.cross(n, axis)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(n, e1)
    return e1, e2


@lru_cache(maxsize=None)
def sphere_rule_s2(L: int) -> QuadratureRule:
    """Product rule on ``S^2`` exact for spherical polynomials of degree ``<= 2L + 1``.

    Gauss-Legendre in ``t = cos(theta)`` with ``L + 1`` nodes times ``2L + 2``
    equispaced longitudes. Nodes are ordered ``t``-major.
    """
    L = int(L)
    if L < 0:
        raise DomainError(f"band limit must be nonnegative, got {L}")
    gl = gauss_legendre(L + 1)
    nphi = 2 * L + 2
    phi = 2.0 * math.pi * np.arange(nphi) / nphi
    t = gl.nodes[:, None] * np.ones(nphi)
    u = np.sqrt(1.0 - t * t)
    nodes = np.stack([u * np.cos(phi), u * np.sin(phi), t], axis=-1).reshape(-1, 3)
    weights = (gl.weights[:, None] * np.full(nphi, 2.0 * math.pi / nphi)).reshape(-1)
    return QuadratureRule(nodes, weights, 2 * L + 1, "sphere", meta={"t": gl.nodes, "phi": phi})


def sphere_rule_about(pole, L: int, weight_exponent: float = 0.0) -> QuadratureRule:
    """Product rule on ``S^2`` in coordinates ``t = xi . pole`` around ``pole``.

    The ``t`` rule is Gauss-Jacobi for ``(1 - t^2)^weight_exponent``, so the
    weight is folded into ``weights``: the rule approximates
    ``int f(xi) (1 - (xi . pole)^2)^weight_exponent dxi`` and is exact when
    ``f`` is a spherical polynomial of degree ``<= 2L + 1``.
    """
    pole = np.asarray(pole, dtype=float)
    e1, e2 = orthonormal_frame(pole)
    gj = gauss_jacobi(L + 1, weight_exponent, weight_exponent)
    nphi = 2 * L + 2
    phi = 2.0 * math.pi * np.arange(nphi) / nphi
    t = gj.nodes[:, None]
    u = np.sqrt(1.0 - t * t)
    ring = np.cos(phi)[:, None] * e1 + np.sin(phi)[:, None] * e2
    nodes = (t[..., None] * pole + u[..., None] * ring[None]).reshape(-1, 3)
    weights = (gj.weights[:, None] * np.full(nphi, 2.0 * math.pi / nphi)).reshape(-1)
    return QuadratureRule(nodes, weights, 2 * L + 1, "sphere", meta={"t": gj.nodes, "phi": phi})


@lru_cache(maxsize=None)
def ball_rule(L: int, d: int = 3) -> QuadratureRule:
    """Rule on the unit ball: radial Gauss-Jacobi (weight ``s^(d-1)``) times :func:`sphere_rule_s2`."""
    if d != 3:
        raise NotImplementedError("ball rules are only built for d = 3")
    L = int(L)
    if L < 0:
        raise DomainError(f"band limit must be nonnegative, got {L}")
    gj = gauss_jacobi(L + 1, 0.0, float(d - 1))
    s = 0.5 * (1.0 + gj.nodes)
    ws = gj.weights / 2.0**d
    sph = sphere_rule_s2(L)
    nodes = (s[:, None, None] * sph.nodes[None]).reshape(-1, 3)
    weights = (ws[:, None] * sph.weights[None]).reshape(-1)
    return QuadratureRule(nodes, weights, 2 * L + 1, "ball", meta={"s": s})


def _check_unit(v, name):
    if abs(np.linalg.norm(v) - 1.0) > 1e-9:
        raise DomainError(f"{name} must be a unit vector")


def ray_rule(a, omega, npoints: int) -> QuadratureRule:
    """Gauss-Legendre rule for ``t -> f(a + t omega)`` on ``[0, t_exit]``.

    ``t_exit = max(0, -2 a . omega)`` is where a ray from ``a`` on the unit
    sphere leaves the ball; the rule is empty when the ray misses it.
    """
    a = np.asarray(a, dtype=float)
    omega = np.asarray(omega, dtype=float)
    _check_unit(a, "a")
    _check_unit(omega, "omega")
    t_exit = max(0.0, -2.0 * float(a @ omega))
    if t_exit == 0.0:
        return QuadratureRule(np.empty((0, 3)), np.empty(0), 2 * npoints - 1, "segment")
    gl = gauss_legendre(npoints)
    t = 0.5 * t_exit * (gl.nodes + 1.0)
    return QuadratureRule(a + t[:, None] * omega, 0.5 * t_exit * gl.weights, 2 * npoints - 1, "segment")


def ray_rules_batch(a, omega, npoints: int) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized :func:`ray_rule` for paired rows of ``a`` and ``omega``.

    Returns ``points`` of shape ``(N, npoints, 3)`` and ``weights`` of shape
    ``(N, npoints)``; rays that miss the ball get zero weights.
    """
    a = np.atleast_2d(np.asarray(a, dtype=float))
    omega = np.atleast_2d(np.asarray(omega, dtype=float))
    a, omega = np.broadcast_arrays(a, omega)
    t_exit = np.maximum(0.0, -2.0 * np.einsum("ij,ij->i", a, omega))
    gl = gauss_legendre(npoints)
    t = 0.5 * t_exit[:, None] * (gl.nodes + 1.0)
    points = a[:, None, :] + t[..., None] * omega[:, None, :]
    weights = 0.5 * t_exit[:, None] * gl.weights
    return points, weights


def disk_rule(center, normal, radius: float, L: int) -> QuadratureRule:
    """Polar rule on the planar disk of ``radius`` about ``center`` orthogonal to ``normal``.

    Radial Gauss-Jacobi with weight ``rho`` times ``2L + 2`` equispaced angles;
    exact for polynomials of degree ``<= 2L + 1`` on the disk.
    """
    center = np.asarray(center, dtype=float)
    if radius <= 0.0:
        return QuadratureRule(np.empty((0, 3)), np.empty(0), 2 * L + 1, "disk")
    e1, e2 = orthonormal_frame(normal)
    gj = gauss_jacobi(L + 1, 0.0, 1.0)
    rho = 0.5 * radius * (1.0 + gj.nodes)
    wr = gj.weights * radius * radius / 4.0
    nphi = 2 * L + 2
    phi = 2.0 * math.pi * np.arange(nphi) / nphi
    ring = np.cos(phi)[:, None] * e1 + np.sin(phi)[:, None] * e2
    nodes = (center + rho[:, None, None] * ring[None]).reshape(-1, 3)
    weights = (wr[:, None] * np.full(nphi, 2.0 * math.pi / nphi)).reshape(-1)
    return QuadratureRule(nodes, weights, 2 * L + 1, "disk")
