"""Mamdani inference: min AND, min (clipping) implication, max aggregation,
discrete-centroid defuzzification over uniform samples of [0, 100]."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import NoRuleFiredError
from .config import FuzzyConfig

GOOD_MODERATE = 100.0 / 3.0
MODERATE_POOR = 200.0 / 3.0

LABELS = ("Good", "Moderate", "Poor")


@dataclass
class AggregatedOutput:
    """Aggregated output membership sampled on a uniform grid of [0, 100]."""

    zs: np.ndarray
    mu: np.ndarray

    def __post_init__(self):
        if self.zs.size != self.mu.size or self.zs.size < 2:
            raise ValueError("aggregate needs matching zs/mu with >= 2 samples")


@dataclass
class Classification:
    crisp_score: float
    label: str
    term_strengths: dict[str, float]
    clamped_channels: list[str] = field(default_factory=list)


def _frame_values(frame) -> dict[str, float]:
    if isinstance(frame, dict):
        return frame
    return frame.as_dict()


def infer(frame, cfg: FuzzyConfig) -> tuple[AggregatedOutput, dict]:
    """Run the rulebase on one frame.

    Returns the aggregated output membership and a diagnostics dict with
    per-rule firing strengths, per-output-term clip levels, and any channels
    that had to be clamped to their universe.
    """
    values = _frame_values(frame)
    clamped = []
    degrees: dict[str, dict[str, float]] = {}
    for name, var in cfg.inputs.items():
        x, was_clamped = var.clamp(float(values[name]))
        if was_clamped:
            clamped.append(name)
        degrees[name] = {label: mf(x) for label, mf in var.terms.items()}

    zs = np.linspace(0.0, 100.0, cfg.centroid_resolution)
    agg = np.zeros_like(zs)
    firings: list[float] = []
    term_strengths = {label: 0.0 for label in cfg.output.terms}
    for rule in cfg.rules:
        strength = min(degrees[var][label] for var, label in rule.antecedent)
        strength *= rule.weight
        firings.append(strength)
        if strength <= 0.0:
            continue
        term_strengths[rule.consequent] = max(term_strengths[rule.consequent], strength)
        clipped = np.minimum(strength, cfg.output.terms[rule.consequent](zs))
        agg = np.maximum(agg, clipped)

    diagnostics = {
        "firings": firings,
        "term_strengths": term_strengths,
        "clamped_channels": clamped,
        "degrees": degrees,
    }
    return AggregatedOutput(zs, agg), diagnostics


def defuzzify_centroid(agg: AggregatedOutput) -> float:
    """Discrete centroid over the uniform samples: sum(z*mu)/sum(mu)."""
    total = float(np.sum(agg.mu))
    if total <= 0.0:
        raise NoRuleFiredError("aggregate membership is identically zero")
    return float(np.sum(agg.zs * agg.mu) / total)


def score_to_label(score: float) -> str:
    """Map a crisp score to its band; bands are lower-bound inclusive."""
    if score >= MODERATE_POOR:
        return "Poor"
    if score >= GOOD_MODERATE:
        return "Moderate"
    return "Good"


def classify(frame, cfg: FuzzyConfig) -> Classification:
    """Mamdani classification of one sensor frame."""
    agg, diag = infer(frame, cfg)
    score = defuzzify_centroid(agg)
    return Classification(
        crisp_score=score,
        label=score_to_label(score),
        term_strengths=diag["term_strengths"],
        clamped_channels=diag["clamped_channels"],
    )
