"""Exception types shared across the engine.

Every domain failure raises one of these instead of a bare ValueError so
callers can route errors precisely (the CLI and the session service map
them to exit codes and HTTP statuses). All of them subclass
:class:`EngineError`, which itself subclasses ValueError, so existing
``except ValueError`` blocks keep working.
"""

from __future__ import annotations

__all__ = [
    "EngineError",
    "AllZeroWeights",
    "BothZero",
    "Indeterminate",
    "ImpossibleEvidence",
    "LengthMismatch",
    "UnknownLabel",
    "NothingLeft",
    "NoSecondLayer",
    "XExceedsN",
    "LabelMismatch",
]


class EngineError(ValueError):
    """Base class for all domain errors raised by this package."""


class AllZeroWeights(EngineError):
    """Normalization was asked for a weight vector that sums to zero."""


class BothZero(EngineError):
    """A ratio of two likelihoods (or probabilities) with both terms zero."""


class Indeterminate(EngineError):
    """An update combined a zero with an infinity (0 times infinity).

    Signals contradictory inputs: the prior rules out the one hypothesis
    the evidence insists on, or vice versa.
    """


class ImpossibleEvidence(EngineError):
    """Observed evidence has probability zero under every live hypothesis."""


class LengthMismatch(EngineError):
    """Two aligned sequences (labels and weights, say) differ in length."""


class UnknownLabel(EngineError):
    """A label was requested that the distribution or table does not carry."""


class NothingLeft(EngineError):
    """Filtering removed every hypothesis; no candidate survives."""


class NoSecondLayer(EngineError):
    """A second-layer query was made against a single-layer scenario."""


class XExceedsN(EngineError):
    """A success count larger than the number of trials."""


class LabelMismatch(EngineError):
    """Two labelled structures that must align carry different labels."""
