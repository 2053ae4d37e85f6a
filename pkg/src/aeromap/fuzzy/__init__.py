from .membership import MembershipFunction, membership
from .config import FuzzyConfig, FuzzyVariable, Rule, default_config, load_fuzzy_config
from .engine import (
    AggregatedOutput,
    Classification,
    classify,
    defuzzify_centroid,
    infer,
    score_to_label,
)
from .crisp import crisp_classify, crossover_thresholds
from .experiment import ExperimentResult, ablation_table, robustness_experiment

__all__ = [
    "MembershipFunction", "membership",
    "FuzzyConfig", "FuzzyVariable", "Rule", "default_config", "load_fuzzy_config",
    "AggregatedOutput", "Classification", "classify", "defuzzify_centroid",
    "infer", "score_to_label",
    "crisp_classify", "crossover_thresholds",
    "ExperimentResult", "ablation_table", "robustness_experiment",
]
