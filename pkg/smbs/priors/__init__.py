"""Conjugate building blocks: beta-Stacy and Dirichlet processes"""

from smbs.priors.centering import (
    CenteringDistribution,
    Geometric,
    DiscreteWeibull1,
    UniformSupport,
    Tabulated,
    PrecisionFunction,
)
from smbs.priors.beta_stacy import (
    BetaStacyParams,
    SampledSurvival,
    bs_posterior_exact,
    bs_posterior_censored,
    bs_mean,
    bs_variance,
    bs_sample,
    draw_holding_time,
)
from smbs.priors.dirichlet import (
    DirichletParams,
    dir_posterior,
    dir_mean,
    dir_variance,
    dir_sample,
)

__all__ = [
    "CenteringDistribution",
    "Geometric",
    "DiscreteWeibull1",
    "UniformSupport",
    "Tabulated",
    "PrecisionFunction",
    "BetaStacyParams",
    "SampledSurvival",
    "bs_posterior_exact",
    "bs_posterior_censored",
    "bs_mean",
    "bs_variance",
    "bs_sample",
    "draw_holding_time",
    "DirichletParams",
    "dir_posterior",
    "dir_mean",
    "dir_variance",
    "dir_sample",
]
