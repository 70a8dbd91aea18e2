"""Collapsed Gibbs samplers for the four bilingual topic models."""

from .state import (
    MODELS,
    HyperParams,
    SamplerState,
    init_state,
    rebuild_counts,
    count_mismatches,
    assert_consistent,
)
from .gibbs import (
    PosteriorEstimates,
    posterior_sample,
    run_training,
    sweep_bilda,
    sweep_bilda_all,
    sweep_probbilda,
    sweep_blockprobbilda,
    SWEEP_FNS,
)
from .checkpoint import save_state, load_state, load_sampler_state, load_estimates

__all__ = [
    "MODELS",
    "HyperParams",
    "SamplerState",
    "init_state",
    "rebuild_counts",
    "count_mismatches",
    "assert_consistent",
    "PosteriorEstimates",
    "posterior_sample",
    "run_training",
    "sweep_bilda",
    "sweep_bilda_all",
    "sweep_probbilda",
    "sweep_blockprobbilda",
    "SWEEP_FNS",
    "save_state",
    "load_state",
    "load_sampler_state",
    "load_estimates",
]
