"""Predictive kernels, the reinforced semi-Markov sampler and forecasts"""

from smbs.predictive.forecast import PredictiveMatrix, h_step_predictive
from smbs.predictive.kernel import (
    PredictiveState,
    draw_index,
    path_probability,
    predictive_kernel,
    rsm_extend_path,
    update_stats_incremental,
    variant_b_kernel,
)

__all__ = [
    "PredictiveMatrix",
    "PredictiveState",
    "draw_index",
    "h_step_predictive",
    "path_probability",
    "predictive_kernel",
    "rsm_extend_path",
    "update_stats_incremental",
    "variant_b_kernel",
]
