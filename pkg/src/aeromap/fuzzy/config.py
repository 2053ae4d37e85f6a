"""Fuzzy classifier configuration: variables, rulebase, loader.

The default configuration ships as a package data file and is fully
user-overridable through the same YAML schema (documented in
docs/fuzzy-config.md).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import yaml

from ..errors import ConfigError
from .membership import MembershipFunction

INPUT_VARIABLES = ("voc", "co2", "smoke", "temperature", "humidity")
OUTPUT_TERMS = ("good", "moderate", "poor")


@dataclass(frozen=True)
class FuzzyVariable:
    name: str
    universe: tuple[float, float]
    terms: dict[str, MembershipFunction]

    def clamp(self, x: float) -> tuple[float, bool]:
        lo, hi = self.universe
        if x < lo:
            return lo, True
        if x > hi:
            return hi, True
        return x, False


@dataclass(frozen=True)
class Rule:
    antecedent: tuple[tuple[str, str], ...]  # (variable, label) joined by AND
    consequent: str
    weight: float = 1.0

    def __post_init__(self):
        if not self.antecedent:
            raise ConfigError("rule antecedent must not be empty")
        seen = [v for v, _ in self.antecedent]
        if len(seen) != len(set(seen)):
            raise ConfigError("a variable may appear at most once per rule")
        if not 0.0 <= self.weight <= 1.0:
            raise ConfigError(f"rule weight {self.weight} outside [0, 1]")


@dataclass
class FuzzyConfig:
    inputs: dict[str, FuzzyVariable]
    output: FuzzyVariable
    rules: list[Rule]
    centroid_resolution: int = 1001

    def __post_init__(self):
        if tuple(self.output.universe) != (0.0, 100.0):
            raise ConfigError("output universe must be [0, 100]")
        for t in OUTPUT_TERMS:
            if t not in self.output.terms:
                raise ConfigError(f"output is missing term {t!r}")
        if self.centroid_resolution < 2:
            raise ConfigError("centroid_resolution must be >= 2")
        for r in self.rules:
            for var, label in r.antecedent:
                if var not in self.inputs:
                    raise ConfigError(f"rule references unknown variable {var!r}")
                if label not in self.inputs[var].terms:
                    raise ConfigError(f"rule references unknown label {var}.{label}")
            if r.consequent not in self.output.terms:
                raise ConfigError(f"rule references unknown output label {r.consequent!r}")


def _parse_mf(spec: dict) -> MembershipFunction:
    try:
        return MembershipFunction(spec["shape"], tuple(spec["points"]))
    except (KeyError, TypeError) as e:
        raise ConfigError(f"bad membership spec {spec!r}: {e}") from e


def _parse_variable(name: str, spec: dict) -> FuzzyVariable:
    try:
        universe = (float(spec["universe"][0]), float(spec["universe"][1]))
        terms = {label: _parse_mf(mf) for label, mf in spec["terms"].items()}
    except (KeyError, TypeError, IndexError) as e:
        raise ConfigError(f"bad variable spec for {name!r}: {e}") from e
    if universe[1] <= universe[0]:
        raise ConfigError(f"variable {name!r} universe is empty")
    return FuzzyVariable(name, universe, terms)


def parse_fuzzy_config(doc: dict) -> FuzzyConfig:
    try:
        inputs = {name: _parse_variable(name, spec)
                  for name, spec in doc["inputs"].items()}
        output = _parse_variable("output", doc["output"])
        rules = []
        for r in doc["rules"]:
            ant = tuple((var, label) for var, label in sorted(r["if"].items()))
            rules.append(Rule(ant, r["then"], float(r.get("weight", 1.0))))
    except (KeyError, TypeError) as e:
        raise ConfigError(f"bad fuzzy config: {e}") from e
    for var in INPUT_VARIABLES:
        if var not in inputs:
            raise ConfigError(f"fuzzy config is missing input variable {var!r}")
    return FuzzyConfig(
        inputs=inputs,
        output=output,
        rules=rules,
        centroid_resolution=int(doc.get("centroid_resolution", 1001)),
    )


def load_fuzzy_config(path: str | Path | None = None) -> FuzzyConfig:
    """Load a fuzzy config from YAML; None loads the packaged defaults."""
    if path is None:
        text = resources.files("aeromap.fuzzy").joinpath("default_iaq.yaml").read_text()
    else:
        text = Path(path).read_text()
    doc = yaml.safe_load(text)
    if not isinstance(doc, dict):
        raise ConfigError("fuzzy config must be a mapping")
    return parse_fuzzy_config(doc)


_DEFAULT: FuzzyConfig | None = None


def default_config() -> FuzzyConfig:
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = load_fuzzy_config(None)
    return _DEFAULT
