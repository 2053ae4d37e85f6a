"""Crisp two-threshold baseline classifier (the before-fuzzy comparison).

Thresholds default to the membership crossover points (where adjacent terms
intersect), so the crisp and fuzzy classifiers partition each input axis
consistently.
"""

from __future__ import annotations

import numpy as np

from ..errors import ConfigError
from .config import FuzzyConfig, FuzzyVariable
from .engine import LABELS, _frame_values

SEVERITY = {"Good": 0, "Moderate": 1, "Poor": 2}


def _crossover(var: FuzzyVariable, falling: str, rising: str) -> float:
    """x where the falling term's membership meets the rising term's."""
    lo, hi = var.universe
    xs = np.linspace(lo, hi, 20001)
    diff = var.terms[rising](xs) - var.terms[falling](xs)
    sign = np.signbit(diff)
    flips = np.where(sign[:-1] & ~sign[1:])[0]
    if flips.size == 0:
        raise ConfigError(
            f"terms {falling!r} and {rising!r} of {var.name!r} do not cross"
        )
    i = int(flips[0])
    x0, x1 = xs[i], xs[i + 1]
    d0, d1 = diff[i], diff[i + 1]
    if d1 == d0:
        return float(x0)
    return float(x0 - d0 * (x1 - x0) / (d1 - d0))


def crossover_thresholds(cfg: FuzzyConfig) -> dict[str, tuple[float, float]]:
    """Per-variable (low/medium, medium/high) crossover thresholds."""
    out = {}
    for name, var in cfg.inputs.items():
        t1 = _crossover(var, "low", "medium")
        t2 = _crossover(var, "medium", "high")
        out[name] = (t1, t2)
    return out


def crisp_classify(frame, thresholds: dict[str, tuple[float, float]]) -> str:
    """Each variable maps through its two thresholds; worst class wins."""
    values = _frame_values(frame)
    worst = 0
    for name, (t1, t2) in thresholds.items():
        v = float(values[name])
        severity = 2 if v >= t2 else (1 if v >= t1 else 0)
        worst = max(worst, severity)
    return LABELS[worst]
