"""Named numerical thresholds and the strict/default/loose profiles."""
from __future__ import annotations

from types import MappingProxyType

__all__ = ["DEFAULT", "PROFILES", "profile"]

DEFAULT = MappingProxyType(
    {
        "closed_form": 1e-12,
        "fd_eigenvalue": 1e-6,
        "factorial_vs_gamma": 1e-12,
        "great_circle": 1e-8,
        "special_spectra": 1e-10,
        "inversion": 1e-12,
        "harmonic_orthonormality": 1e-11,
        "addition_theorem": 1e-10,
        "gaunt": 1e-11,
        "ball_orthonormality": 1e-9,
        "radon_svd": 1e-8,
        "grangeat": 1e-5,
        "grangeat_variant": 1e-4,
        "cone_svd_pointwise": 1e-5,
        "gram": 5e-3,
        "neumann": 1e-11,
        "sum_rule": 1e-10,
        "bound_slack": 1e-12,
        "reconstruction": 1e-2,
    }
)

_SCALE = {"strict": 0.1, "default": 1.0, "loose": 10.0}

PROFILES = MappingProxyType(
    {name: MappingProxyType({k: v * s for k, v in DEFAULT.items()}) for name, s in _SCALE.items()}
)


def profile(name: str = "default"):
    try:
        return PROFILES[name]
    except KeyError:
        raise ValueError(f"unknown tolerance profile {name!r}; choose from {sorted(PROFILES)}") from None
