"""Orthonormal polynomial basis of ``L^2(B^3)``.

``V_{m,l,k}(s omega) = sqrt(2m+3) s^l P^(0, l+1/2)_{(m-l)/2}(2s^2 - 1) Y_l^k(omega)``
with ``0 <= l <= m``, ``m + l`` even and ``|k| <= l``. Evaluation is only
provided in three dimensions.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import DomainError
from .harmonics import lm_index, ylm_table
from .quadrature import ball_rule
from .specfun import jacobi

__all__ = [
    "BallBasisIndex",
    "BallCoefficients",
    "ball_table",
    "enumerate_indices",
    "eval_v",
    "expand_on_ball",
    "index_count",
    "synthesize",
]


@dataclass(frozen=True, order=True)
class BallBasisIndex:
    m: int
    l: int
    k: int

    def __post_init__(self):
        m, l, k = self.m, self.l, self.k
        if not (0 <= l <= m) or (m + l) % 2 or abs(k) > l:
            raise DomainError(f"invalid ball index (m={m}, l={l}, k={k}): need 0 <= l <= m, m+l even, |k| <= l")

    def __iter__(self):
        return iter((self.m, self.l, self.k))


def _as_index(idx) -> BallBasisIndex:
    return idx if isinstance(idx, BallBasisIndex) else BallBasisIndex(*idx)


def enumerate_indices(M: int, d: int = 3) -> list[BallBasisIndex]:
    """All indices with ``m <= M``, ordered by ``(m, l, k)``."""
    if d != 3:
        raise NotImplementedError("ball indices are enumerated for d = 3")
    if M < 0:
        raise DomainError(f"max degree must be nonnegative, got {M}")
    return [
        BallBasisIndex(m, l, k)
        for m in range(M + 1)
        for l in range(m % 2, m + 1, 2)
        for k in range(-l, l + 1)
    ]


def index_count(M: int) -> int:
    return (M + 1) * (M + 2) * (M + 3) // 6


@lru_cache(maxsize=None)
def _radial_poly(m: int, l: int):
    return jacobi((m - l) // 2, 0, l + 0.5)


def _polar(x):
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != 3:
        raise DomainError(f"points in B^3 need 3 coordinates, got shape {x.shape}")
    s = np.linalg.norm(x, axis=-1)
    if np.any(s > 1.0 + 1e-12):
        raise DomainError("points must lie in the closed unit ball")
    safe = np.where(s > 0.0, s, 1.0)
    omega = np.where((s > 0.0)[..., None], x / safe[..., None], np.array([0.0, 0.0, 1.0]))
    # renormalize so |omega| = 1 to rounding, as ylm_table requires
    omega = omega / np.linalg.norm(omega, axis=-1, keepdims=True)
    return np.minimum(s, 1.0), omega


def _radial(m: int, l: int, s):
    return math.sqrt(2 * m + 3) * s**l * _radial_poly(m, l)(2.0 * s * s - 1.0)


def ball_table(indices, x) -> np.ndarray:
    """Values of every ``V_idx`` at ``x``; shape ``x.shape[:-1] + (len(indices),)``."""
    indices = [_as_index(i) for i in indices]
    s, omega = _polar(x)
    if not indices:
        return np.zeros(s.shape + (0,), dtype=complex)
    Y = ylm_table(max(i.l for i in indices), omega)
    out = np.empty(s.shape + (len(indices),), dtype=complex)
    radial = {}
    for c, idx in enumerate(indices):
        key = (idx.m, idx.l)
        if key not in radial:
            radial[key] = _radial(idx.m, idx.l, s)
        out[..., c] = radial[key] * Y[..., lm_index(idx.l, idx.k)]
    return out


def eval_v(idx, x, d: int = 3):
    """Basis function ``V_{m,l,k}`` at one point or an array of points."""
    if d != 3:
        raise NotImplementedError("ball basis evaluation is provided for d = 3 only")
    val = ball_table([idx], x)[..., 0]
    return val if val.ndim else complex(val)


@dataclass
class BallCoefficients:
    """Expansion coefficients ``{BallBasisIndex: complex}`` up to degree ``M``."""

    d: int
    M: int
    values: dict = field(default_factory=dict)

    def __getitem__(self, idx) -> complex:
        return self.values.get(_as_index(idx), 0j)

    def indices(self) -> list[BallBasisIndex]:
        return sorted(self.values)

    def max_abs_difference(self, other: "BallCoefficients") -> float:
        keys = set(self.values) | set(other.values)
        return max((abs(self[k] - other[k]) for k in keys), default=0.0)

    def to_dict(self) -> dict:
        entries = [
            {"m": i.m, "l": i.l, "k": i.k, "re": float(v.real), "im": float(v.imag)}
            for i, v in sorted(self.values.items())
        ]
        return {"d": self.d, "M": self.M, "entries": entries}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, data: dict) -> "BallCoefficients":
        try:
            d = int(data.get("d", 3))
            entries = data.get("entries", [])
            values = {
                BallBasisIndex(int(e["m"]), int(e["l"]), int(e["k"])): complex(float(e.get("re", 0.0)), float(e.get("im", 0.0)))
                for e in entries
            }
        except (KeyError, TypeError, AttributeError) as exc:
            raise ValueError(f"malformed ball coefficient table: {exc!r}") from exc
        M = int(data.get("M", max((i.m for i in values), default=0)))
        return cls(d=d, M=M, values=values)

    @classmethod
    def from_json(cls, text: str) -> "BallCoefficients":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValueError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
        if not isinstance(data, dict):
            raise ValueError("ball coefficient table must be a JSON object")
        return cls.from_dict(data)


def expand_on_ball(f, M: int, L: int | None = None) -> BallCoefficients:
    """Project ``f`` (callable on ``(N, 3)`` points) onto all ``V_idx`` with ``m <= M``.

    The default ball rule is exact for ``f`` of degree ``<= M + 1``.
    """
    rule = ball_rule(M if L is None else L)
    indices = enumerate_indices(M)
    samples = np.asarray(f(rule.nodes))
    V = ball_table(indices, rule.nodes)
    coeffs = (rule.weights * samples) @ np.conj(V)
    return BallCoefficients(d=3, M=M, values=dict(zip(indices, (complex(c) for c in coeffs))))


def synthesize(coeffs: BallCoefficients, x) -> np.ndarray:
    """Evaluate ``sum c_idx V_idx(x)``."""
    indices = coeffs.indices()
    x = np.asarray(x, dtype=float)
    if not indices:
        return np.zeros(x.shape[:-1], dtype=complex)
    V = ball_table(indices, x)
    return V @ np.array([coeffs.values[i] for i in indices])
