"""The factory-status simulation study and the command runners"""

from smbs.study.truth import (
    DEFAULT_TAIL_TOL,
    SimStudyTruth,
    discrete_weibull_cdf,
    limiting_distribution,
    mean_sojourn,
    simstudy_generate,
    stationary_distribution,
    study_prior,
)

__all__ = [
    "DEFAULT_TAIL_TOL",
    "SimStudyTruth",
    "discrete_weibull_cdf",
    "limiting_distribution",
    "mean_sojourn",
    "simstudy_generate",
    "stationary_distribution",
    "study_prior",
]
