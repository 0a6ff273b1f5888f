"""Estimation engine: certified intervals, norms of superoperators, transport quantities."""
from .ball import LipschitzBall, constraint_maps
from .estimate import (
    Certificate,
    ComplexityEstimate,
    DegradedWarning,
    SolveOptions,
    all_level_upper,
    amplified_structure,
    cb_complexity_estimate,
    complexity_estimate,
    default_levels,
    embed_level,
    expected_length,
    expected_length_certificates,
    spectral_gap,
    word_length_certificate,
)
from .norms import DiamondResult, NormInterval, diamond_norm, inf_to_inf_norm
from .sdp import BlockSDP, SDPResult
from .transport import (
    IndexResult,
    commutant_blocks,
    empirical_mlsi,
    entropy_transport_check,
    relative_entropy,
    subalgebra_index,
    wasserstein_norm,
)
from .additivity import hermitian_dilation, product_witness, tensor_additivity_check
