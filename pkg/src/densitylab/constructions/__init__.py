"""Generators for the explicit set constructions and their proof diagnostics."""

from .additive import (
    default_prop3_schedule,
    dyadic_block_edges,
    dyadic_block_set,
    geometric_prop3_schedule,
    is_normalized,
    prop1_set,
    prop3_edge_counts,
    prop3_set,
    prop3_window_checks,
)
from .cascade import (
    CascadeTrace,
    Milestone,
    PrimePartition,
    build_q,
    p0_free_set,
    prime_partition,
    theorem_cascade,
    verify_cascade,
)
from .multiplicative import (
    CLASSICAL_KINDS,
    CoverResult,
    OmegaSplit,
    ProductAlphaChoice,
    beta_gamma_closed_form,
    classical_set,
    closed_form_density,
    first_primes,
    inclusion_exclusion_cover,
    select_product_alpha,
    split_by_omega,
)
from .theta import (
    THETA_PRESETS,
    Decomposition,
    DeltaSeries,
    ThetaRule,
    ThetaSequence,
    delta_series,
    greedy_decompose,
    theta_sequence,
)

__all__ = [
    "CLASSICAL_KINDS",
    "CascadeTrace",
    "CoverResult",
    "Decomposition",
    "DeltaSeries",
    "Milestone",
    "OmegaSplit",
    "PrimePartition",
    "ProductAlphaChoice",
    "THETA_PRESETS",
    "ThetaRule",
    "ThetaSequence",
    "beta_gamma_closed_form",
    "build_q",
    "classical_set",
    "closed_form_density",
    "default_prop3_schedule",
    "delta_series",
    "dyadic_block_edges",
    "dyadic_block_set",
    "first_primes",
    "geometric_prop3_schedule",
    "greedy_decompose",
    "inclusion_exclusion_cover",
    "is_normalized",
    "p0_free_set",
    "prime_partition",
    "prop1_set",
    "prop3_edge_counts",
    "prop3_set",
    "prop3_window_checks",
    "select_product_alpha",
    "split_by_omega",
    "theorem_cascade",
    "theta_sequence",
    "verify_cascade",
]
