"""Exact-arithmetic engine for discrete Bayesian inference and decisions.

The package is organized around a small exact core (odds, Bayes factors,
distributions over labels), a two-layer scenario model with sequential
updating, a 0-1 loss decision layer, a seeded Monte Carlo simulator, a
network diagram exporter, and an interactive session service speaking one
JSON protocol over HTTP and stdio.
"""

from __future__ import annotations

from .core import (
    BayesFactor,
    Distribution,
    Odds,
    Probability,
    Rational,
    as_rational,
    bayes_factor,
    decimal_string,
    distribution_from_odds,
    format_rational,
    normalize,
    odds_from_distribution,
    posterior,
    total_probability,
    update_odds,
)
from .errors import (
    AllZeroWeights,
    BothZero,
    EngineError,
    ImpossibleEvidence,
    Indeterminate,
    LabelMismatch,
    LengthMismatch,
    NoSecondLayer,
    NothingLeft,
    UnknownLabel,
    XExceedsN,
)

__all__ = [
    "BayesFactor",
    "Distribution",
    "Odds",
    "Probability",
    "Rational",
    "as_rational",
    "bayes_factor",
    "decimal_string",
    "distribution_from_odds",
    "format_rational",
    "normalize",
    "odds_from_distribution",
    "posterior",
    "total_probability",
    "update_odds",
    "AllZeroWeights",
    "BothZero",
    "EngineError",
    "ImpossibleEvidence",
    "Indeterminate",
    "LabelMismatch",
    "LengthMismatch",
    "NoSecondLayer",
    "NothingLeft",
    "UnknownLabel",
    "XExceedsN",
]

__version__ = "0.1.0"
