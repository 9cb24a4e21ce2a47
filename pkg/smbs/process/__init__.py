"""Semi-Markov beta-Stacy priors, their generalizations and forward simulation"""

from smbs.process.smbs import (
    StatePrior,
    SmbsParams,
    CharacteristicCouple,
    smbs_posterior,
    smbs_posterior_from_stats,
    smbs_posterior_multi,
    smbs_sample,
)
from smbs.process.simulate import sm_sample_path
from smbs.process.variants import (
    PairParams,
    VariantBParams,
    variant_b_posterior,
    variant_b_posterior_from_stats,
)

__all__ = [
    "StatePrior",
    "SmbsParams",
    "CharacteristicCouple",
    "smbs_posterior",
    "smbs_posterior_from_stats",
    "smbs_posterior_multi",
    "smbs_sample",
    "sm_sample_path",
    "PairParams",
    "VariantBParams",
    "variant_b_posterior",
    "variant_b_posterior_from_stats",
]
