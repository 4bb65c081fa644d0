"""Generalized Funk-Radon transforms and the SVD of the cone-beam transform on the unit ball."""
from .ball_basis import BallBasisIndex, BallCoefficients, enumerate_indices, eval_v, expand_on_ball, synthesize
from .errors import DomainError
from .funk_radon import EigenvalueTable, apply_sj, eigenvalue_table, nullspace_classify, s_hat, s_hat_asymptotic
from .harmonics import SphereCoefficients, eval_ynk, expand_s2, gaunt_general_pair_sum, gaunt_s2, synthesize_s2
from .svd_cone import SingularTriple, d_odd_forward_spectral, eval_w, lambda_, mu, nu, reconstruct, singular_triple
from .xray import cone_beam, cone_beam_odd, grangeat_residual, grangeat_variant_residual, radon_numeric, radon_svd_rhs

__version__ = "0.1.0"

__all__ = [
    "BallBasisIndex",
    "BallCoefficients",
    "DomainError",
    "EigenvalueTable",
    "SingularTriple",
    "SphereCoefficients",
    "apply_sj",
    "cone_beam",
    "cone_beam_odd",
    "d_odd_forward_spectral",
    "eigenvalue_table",
    "enumerate_indices",
    "eval_v",
    "eval_w",
    "eval_ynk",
    "expand_on_ball",
    "expand_s2",
    "gaunt_general_pair_sum",
    "gaunt_s2",
    "grangeat_residual",
    "grangeat_variant_residual",
    "lambda_",
    "mu",
    "nu",
    "nullspace_classify",
    "radon_numeric",
    "radon_svd_rhs",
    "reconstruct",
    "s_hat",
    "s_hat_asymptotic",
    "singular_triple",
    "synthesize",
    "synthesize_s2",
]
