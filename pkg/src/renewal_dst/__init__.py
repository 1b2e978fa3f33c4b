"""Limit laws of renewal counts under exponentially increasing lifetimes.

When successive lifetimes grow like alpha^k in distribution, the centered
renewal count N_t - floor(log_alpha t) does not converge: its law oscillates
through a family Q_eta indexed by the fractional part eta of log_alpha t.
This package computes that family exactly for the digital-search-tree case
(alpha = 2, where the count is the insertion-depth birth chain and the limit
is a signed mixture of exponential laws), simulates it for general alpha,
and ships a harness that verifies the convergence rates and tail bounds
numerically.
"""

from .dst import (
    Dst,
    InsertReport,
    InsufficientBitsError,
    bits_from_unit_interval,
    build,
    knuth_corpus,
    load_corpus,
    parse_corpus,
    simulate_insertion_depth,
)
from .lifetimes import (
    CoupledPair,
    GeometricDst,
    GrowthRate,
    LifetimeFamily,
    ScaledBase,
    coupling_alpha,
    geometric_pmf,
    lifetime_mean,
    sample_coupled_pair,
    sample_lifetime,
)
from .limit_law import (
    LimitLaw,
    SignedExpMixture,
    euler_b,
    exp_convolution_cdf,
    limit_law,
    mixture_coefficients,
    partial_fraction_coefficients,
    q_cdf,
    q_pmf,
    q_tail,
    s_infinity_cdf,
    s_infinity_sf,
    sample_q,
    sample_s_infinity,
)
from .metrics import (
    DistanceReport,
    RateRow,
    check_rate_report,
    empirical_cdf_jumps,
    ks_discrete_vs_continuous,
    pmf_gap_bound_check,
    rate_report,
    tv_distance,
    tv_to_limit,
)
from .pmf import IntPmf
from .renewal import (
    RenewalConfig,
    UnsupportedFamilyError,
    centered_count_distribution,
    depth_distribution_exact,
    ks_scaled_sum_exact,
    partial_sum_cdf_exact,
    partial_sum_pmf,
    sample_scaled_limit,
    scaled_sum_sample,
    simulate_count,
)
from .rng import DEFAULT_SEED, stream_rng

__version__ = "0.1.0"

__all__ = [
    "CoupledPair",
    "DEFAULT_SEED",
    "DistanceReport",
    "Dst",
    "GeometricDst",
    "GrowthRate",
    "InsertReport",
    "InsufficientBitsError",
    "IntPmf",
    "LifetimeFamily",
    "LimitLaw",
    "RateRow",
    "RenewalConfig",
    "ScaledBase",
    "SignedExpMixture",
    "UnsupportedFamilyError",
    "bits_from_unit_interval",
    "build",
    "centered_count_distribution",
    "check_rate_report",
    "coupling_alpha",
    "depth_distribution_exact",
    "empirical_cdf_jumps",
    "euler_b",
    "exp_convolution_cdf",
    "geometric_pmf",
    "knuth_corpus",
    "ks_discrete_vs_continuous",
    "ks_scaled_sum_exact",
    "lifetime_mean",
    "limit_law",
    "load_corpus",
    "mixture_coefficients",
    "parse_corpus",
    "partial_fraction_coefficients",
    "partial_sum_cdf_exact",
    "partial_sum_pmf",
    "pmf_gap_bound_check",
    "q_cdf",
    "q_pmf",
    "q_tail",
    "rate_report",
    "s_infinity_cdf",
    "s_infinity_sf",
    "sample_coupled_pair",
    "sample_lifetime",
    "sample_q",
    "sample_s_infinity",
    "sample_scaled_limit",
    "scaled_sum_sample",
    "simulate_count",
    "simulate_insertion_depth",
    "stream_rng",
    "tv_distance",
    "tv_to_limit",
]
