"""Interpolation of maps between finite-dimensional weighted sequence-space couples."""

from .complex_interp import certificate_norm, lemma1_check, theta_norm, three_line_check
from .kfunc import k_functional, k_oracle_grid, k_profile
from .maps import MapSpec, algebra_constant, certified_bound, eval_map, format_map, parse_map, sample_sup
from .real_interp import real_norm, real_norm_inf
from .spaces import (
    CoupleSpec,
    SpaceSpec,
    embedding_constant,
    intersection_norm,
    interpolated_space,
    j_functional,
    make_couple,
    norm,
    sum_norm,
)
from .taylor import coefficient_bound_check, taylor_coefficient, taylor_reassemble
from .verify import (
    ExperimentConfig,
    ball_inclusion_check,
    corollary_check,
    linear_check,
    proof_walkthrough,
    theorem1_check,
)

__version__ = "0.1.0"
