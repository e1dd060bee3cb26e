"""Fermionic Gaussian channels at the covariance-matrix level."""

from .capacity import capacity_curve, coherent_information, lossy_channel, quantum_capacity_lossy
from .channels import (
    GaussianChannel,
    apply,
    choi_cm,
    choi_rank_modes,
    complement,
    compose,
    dilation,
    direct_sum,
    identity_channel,
    split_perfect_modes,
    standard_form,
    validate,
)
from .degradability import classify, degrading_candidate, is_antidegradable, small_env_necessary
from .states import entropy_bits, is_valid_cm, max_entangled, purify, schmidt_form

__version__ = "0.1.0"
