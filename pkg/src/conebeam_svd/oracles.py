"""Reference computations that do not go through the closed forms.

Each oracle takes a route independent of the production path: finite
differences in extended precision, direct quadrature along great circles,
and Gauss rules on split intervals for kernels with a kink at zero.
"""
from __future__ import annotations

import math

import mpmath
import numpy as np

from .quadrature import gauss_legendre, orthonormal_frame
from .specfun import legendre_nd_eval, sphere_measure

__all__ = [
    "cosine_transform_oracle",
    "fd_eigenvalue",
    "fd_weighted_derivative",
    "great_circle_integral",
    "hemispherical_oracle",
    "split_interval_integral",
]


def _legendre_mp(n: int, d: int, t):
    p0, p1 = mpmath.mpf(1), t
    if n == 0:
        return p0
    for k in range(1, n):
        p0, p1 = p1, ((2 * k + d - 2) * t * p1 - k * p0) / (k + d - 2)
    return p1


def fd_weighted_derivative(n: int, d: int, j: int, dps: int = 40) -> float:
    """``(d/dt)^j [P_{n,d}(t) (1 - t^2)^((d-3)/2)]`` at 0 by finite differences.

    ``mpmath.diff`` differences the function at ``dps`` digits, which keeps
    the ``h^-j`` roundoff amplification far below double precision.
    """
    with mpmath.workdps(dps):
        half = mpmath.mpf(d - 3) / 2

        def g(t):
            return _legendre_mp(n, d, t) * (1 - t * t) ** half

        return float(mpmath.diff(g, 0, j))


def fd_eigenvalue(j: int, d: int, n: int) -> float:
    """``(-1)^j |S^(d-2)|`` times :func:`fd_weighted_derivative`."""
    return (-1) ** j * sphere_measure(d - 1) * fd_weighted_derivative(n, d, j)


def great_circle_integral(f, xi, npoints: int = 64):
    """``int f`` over the great circle orthogonal to ``xi`` (trapezoid rule).

    Exact for restrictions that are trigonometric polynomials of degree below
    ``npoints``, which covers spherical polynomials of that degree.
    """
    e1, e2 = orthonormal_frame(xi)
    phi = 2.0 * math.pi * np.arange(npoints) / npoints
    pts = np.cos(phi)[:, None] * e1 + np.sin(phi)[:, None] * e2
    pts /= np.linalg.norm(pts, axis=1, keepdims=True)
    vals = np.asarray(f(pts))
    return np.sum(vals) * (2.0 * math.pi / npoints)


def split_interval_integral(g, npoints: int = 32) -> float:
    """``int_{-1}^{1} g`` as Gauss-Legendre on ``[-1, 0]`` plus ``[0, 1]``."""
    gl = gauss_legendre(npoints)
    x = 0.5 * (gl.nodes + 1.0)
    w = 0.5 * gl.weights
    return math.fsum(w * g(x)) + math.fsum(w * g(-x))


def hemispherical_oracle(n: int) -> float:
    """``2 pi int (1/2) sgn(t) P_n(t) dt``: Funk-Hecke eigenvalue of the hemispherical kernel."""
    return 2.0 * math.pi * split_interval_integral(lambda t: 0.5 * np.sign(t) * legendre_nd_eval(n, 3, t))


def cosine_transform_oracle(n: int) -> float:
    """``2 pi int (1/2) |t| P_n(t) dt``: Funk-Hecke eigenvalue of the cosine kernel."""
    return 2.0 * math.pi * split_interval_integral(lambda t: 0.5 * np.abs(t) * legendre_nd_eval(n, 3, t))
