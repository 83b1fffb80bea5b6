"""Exact probability primitives: rationals, odds, Bayes factors, distributions.

Every quantity in this module is an exact rational. Floats never enter the
arithmetic path; they would silently break the exactness guarantees, so any
float argument raises TypeError. Decimal strings are produced only at the
presentation boundary by :func:`decimal_string`.

Error contract:
    * :class:`~oddsengine.errors.AllZeroWeights` when normalizing weights
      that sum to zero.
    * :class:`~oddsengine.errors.BothZero` when a likelihood ratio or an
      odds query has both terms zero.
    * :class:`~oddsengine.errors.Indeterminate` when an odds update pairs a
      zero with an infinity.
    * :class:`~oddsengine.errors.ImpossibleEvidence` when evidence has zero
      probability under every hypothesis of a posterior computation.
    * :class:`~oddsengine.errors.LengthMismatch` and
      :class:`~oddsengine.errors.UnknownLabel` for shape and lookup faults.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from decimal import ROUND_HALF_EVEN, Decimal, localcontext
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence, Union

from .errors import (
    AllZeroWeights,
    BothZero,
    EngineError,
    ImpossibleEvidence,
    Indeterminate,
    LengthMismatch,
    UnknownLabel,
)

__all__ = [
    "Rational",
    "RationalLike",
    "Probability",
    "Odds",
    "BayesFactor",
    "Distribution",
    "as_rational",
    "format_rational",
    "decimal_string",
    "normalize",
    "bayes_factor",
    "update_odds",
    "posterior",
    "total_probability",
    "odds_from_distribution",
    "distribution_from_odds",
]

# Canonical reduced form (gcd 1, positive denominator) is guaranteed by
# Fraction itself, so it serves directly as the rational carrier.
Rational = Fraction

RationalLike = Union[Fraction, int, str]


def as_rational(value: RationalLike) -> Fraction:
    """Coerce an int, Fraction, or ``"num/den"`` string to a Fraction.

    Floats are rejected: binary floats are not the numbers users write
    down, and exactness is the whole point of this engine.
    """
    if isinstance(value, float):
        raise TypeError(
            "floats are not exact; pass a Fraction, an int, or a 'num/den' string"
        )
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as a rational")


def format_rational(value: RationalLike) -> str:
    """Serialize a rational as ``"num/den"`` in canonical reduced form.

    Integers keep the explicit denominator: 1 serializes as ``"1/1"`` and
    0 as ``"0/1"``, so the format round-trips without special cases.
    """
    q = as_rational(value)
    return f"{q.numerator}/{q.denominator}"


def decimal_string(value: RationalLike, significant_digits: int = 6) -> str:
    """Render a rational as a decimal string for display.

    Rounds half-to-even at ``significant_digits`` significant digits and
    always uses positional notation. This is a presentation helper only;
    nothing in the engine consumes its output.
    """
    if significant_digits < 1:
        raise ValueError("significant_digits must be at least 1")
    q = as_rational(value)
    if q == 0:
        return "0"
    with localcontext() as ctx:
        ctx.prec = significant_digits
        ctx.rounding = ROUND_HALF_EVEN
        result = Decimal(q.numerator) / Decimal(q.denominator)
    return format(result, "f")


class Probability(Fraction):
    """An exact rational constrained to the closed interval [0, 1]."""

    def __new__(cls, numerator: RationalLike = 0, denominator: int | None = None):
        if isinstance(numerator, float) or isinstance(denominator, float):
            raise TypeError(
                "floats are not exact; pass a Fraction, an int, or a 'num/den' string"
            )
        self = super().__new__(cls, numerator, denominator)
        if not 0 <= self <= 1:
            raise EngineError(f"probability {str(self)!r} outside [0, 1]")
        return self

    def complement(self) -> "Probability":
        return Probability(1 - self)


@dataclass(frozen=True)
class Odds:
    """Integer odds ``favor : against`` in canonical form.

    Canonical means reduced by the gcd, with the degenerate certainties
    stored as (1, 0) and (0, 1). Both terms zero is rejected. The ratio
    favor/against equals P(first)/P(second); against == 0 encodes odds of
    infinity (the first hypothesis is certain).
    """

    favor: int
    against: int

    def __post_init__(self) -> None:
        if not isinstance(self.favor, int) or not isinstance(self.against, int):
            raise TypeError("odds terms must be ints")
        if self.favor < 0 or self.against < 0:
            raise EngineError("odds terms must be nonnegative")
        if self.favor == 0 and self.against == 0:
            raise BothZero("odds 0:0 are meaningless")
        common = gcd(self.favor, self.against)
        if common > 1:
            object.__setattr__(self, "favor", self.favor // common)
            object.__setattr__(self, "against", self.against // common)

    @classmethod
    def from_ratio(cls, ratio: RationalLike) -> "Odds":
        q = as_rational(ratio)
        if q < 0:
            raise EngineError("odds ratio must be nonnegative")
        return cls(q.numerator, q.denominator)

    @classmethod
    def parse(cls, text: str) -> "Odds":
        """Parse ``"favor:against"``, e.g. ``"16:1"``."""
        left, sep, right = text.partition(":")
        if not sep:
            raise EngineError(f"odds text {text!r} lacks a ':'")
        return cls(int(left.strip()), int(right.strip()))

    def ratio(self) -> Fraction | None:
        """The ratio favor/against, or None when against == 0 (infinite)."""
        if self.against == 0:
            return None
        return Fraction(self.favor, self.against)

    def swapped(self) -> "Odds":
        return Odds(self.against, self.favor)

    def __str__(self) -> str:
        return f"{self.favor}:{self.against}"


# Sentinel denominator pair for the infinite factor is not needed: the
# value field is simply None when the ratio diverges.
@dataclass(frozen=True)
class BayesFactor:
    """A likelihood ratio P(evidence | first) / P(evidence | second).

    ``value`` is an exact nonnegative rational, or None for the infinite
    factor (evidence impossible under the second hypothesis only).
    """

    value: Fraction | None = field(default=Fraction(1))

    def __post_init__(self) -> None:
        if self.value is None:
            return
        value = as_rational(self.value)
        if value < 0:
            raise EngineError("a Bayes factor cannot be negative")
        object.__setattr__(self, "value", value)

    @classmethod
    def infinite(cls) -> "BayesFactor":
        return cls(value=None)

    @property
    def is_infinite(self) -> bool:
        return self.value is None

    def __mul__(self, other: "BayesFactor") -> "BayesFactor":
        """Chain two factors for sequential evidence.

        Raises Indeterminate for 0 times infinity in either order.
        """
        if not isinstance(other, BayesFactor):
            return NotImplemented
        if self.is_infinite or other.is_infinite:
            finite = other if self.is_infinite else self
            if not finite.is_infinite and finite.value == 0:
                raise Indeterminate("0 times an infinite factor")
            return BayesFactor.infinite()
        return BayesFactor(self.value * other.value)

    def __str__(self) -> str:
        if self.value is None:
            return "INFINITE"
        return format_rational(self.value)


@dataclass(frozen=True)
class Distribution:
    """Exact probabilities over unique labels, summing to exactly 1.

    Label order is preserved; it matters for display and for documented
    tie-breaking rules elsewhere in the engine.
    """

    entries: tuple[tuple[str, Fraction], ...]

    def __post_init__(self) -> None:
        coerced = []
        seen = set()
        for label, value in self.entries:
            if not isinstance(label, str):
                raise TypeError(f"label {label!r} must be a string")
            if label in seen:
                raise EngineError(f"duplicate label {label!r}")
            seen.add(label)
            p = as_rational(value)
            if not 0 <= p <= 1:
                raise EngineError(f"probability for {label!r} outside [0, 1]")
            coerced.append((label, p))
        if not coerced:
            raise EngineError("a distribution needs at least one label")
        if sum(p for _, p in coerced) != 1:
            raise EngineError("probabilities must sum to exactly 1")
        object.__setattr__(self, "entries", tuple(coerced))

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[str, RationalLike]]) -> "Distribution":
        return cls(tuple(pairs))

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(label for label, _ in self.entries)

    @property
    def probabilities(self) -> tuple[Fraction, ...]:
        return tuple(p for _, p in self.entries)

    def __getitem__(self, label: str) -> Probability:
        for candidate, p in self.entries:
            if candidate == label:
                return Probability(p)
        raise UnknownLabel(f"label {label!r} not in distribution")

    def __contains__(self, label: str) -> bool:
        return any(candidate == label for candidate, _ in self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def to_json(self) -> dict[str, str]:
        """Map labels to canonical ``"num/den"`` strings, order preserved."""
        return {label: format_rational(p) for label, p in self.entries}

    @classmethod
    def from_json(cls, payload: dict[str, str]) -> "Distribution":
        return cls.from_pairs((label, Fraction(text)) for label, text in payload.items())


def normalize(weights: Iterable[tuple[str, RationalLike]]) -> Distribution:
    """Scale nonnegative weights so they sum to 1, preserving label order.

    Raises AllZeroWeights when every weight is zero and EngineError when a
    weight is negative.
    """
    pairs = [(label, as_rational(value)) for label, value in weights]
    for label, value in pairs:
        if value < 0:
            raise EngineError(f"negative weight for {label!r}")
    total = sum(value for _, value in pairs)
    if total == 0:
        raise AllZeroWeights("cannot normalize weights that sum to zero")
    return Distribution.from_pairs((label, value / total) for label, value in pairs)


def bayes_factor(
    likelihood_first: RationalLike, likelihood_second: RationalLike
) -> BayesFactor:
    """The ratio of two likelihoods for the same evidence.

    Returns the infinite factor when only the second likelihood is zero,
    and raises BothZero when both vanish (the evidence is impossible
    outright and conveys nothing).
    """
    first = as_rational(likelihood_first)
    second = as_rational(likelihood_second)
    if not 0 <= first <= 1 or not 0 <= second <= 1:
        raise EngineError("likelihoods must lie in [0, 1]")
    if first == 0 and second == 0:
        raise BothZero("both likelihoods are zero")
    if second == 0:
        return BayesFactor.infinite()
    return BayesFactor(first / second)


def update_odds(prior: Odds, factor: BayesFactor) -> Odds:
    """Posterior odds = Bayes factor times prior odds.

    A zero prior side stays zero under any finite factor. Pairing a zero
    with an infinity (in either arrangement) raises Indeterminate, since
    the prior and the evidence contradict each other outright.
    """
    if factor.is_infinite:
        if prior.favor == 0:
            raise Indeterminate("infinite factor against a zero prior side")
        return Odds(1, 0)
    if factor.value == 0:
        if prior.against == 0:
            raise Indeterminate("zero factor against an infinite prior")
        return Odds(0, 1)
    return Odds(
        prior.favor * factor.value.numerator,
        prior.against * factor.value.denominator,
    )


def posterior(prior: Distribution, likelihoods: Sequence[RationalLike]) -> Distribution:
    """Bayes' rule over any number of hypotheses.

    ``likelihoods`` aligns positionally with ``prior.labels``. Raises
    LengthMismatch on shape errors and ImpossibleEvidence when the
    evidence has probability zero under every hypothesis.
    """
    values = [as_rational(value) for value in likelihoods]
    if len(values) != len(prior):
        raise LengthMismatch(
            f"{len(values)} likelihoods for {len(prior)} hypotheses"
        )
    for value in values:
        if not 0 <= value <= 1:
            raise EngineError("likelihoods must lie in [0, 1]")
    weighted = [
        (label, p * value)
        for (label, p), value in zip(prior.entries, values)
    ]
    try:
        return normalize(weighted)
    except AllZeroWeights:
        raise ImpossibleEvidence(
            "evidence has probability zero under every hypothesis"
        ) from None


def total_probability(
    conditionals: Sequence[RationalLike], weights: Distribution
) -> Probability:
    """Weighted mean of conditional probabilities under ``weights``.

    ``conditionals`` aligns positionally with ``weights.labels``.
    """
    values = [as_rational(value) for value in conditionals]
    if len(values) != len(weights):
        raise LengthMismatch(
            f"{len(values)} conditionals for {len(weights)} weights"
        )
    for value in values:
        if not 0 <= value <= 1:
            raise EngineError("conditional probabilities must lie in [0, 1]")
    return Probability(
        sum(value * p for value, (_, p) in zip(values, weights.entries))
    )


def odds_from_distribution(dist: Distribution, first: str, second: str) -> Odds:
    """Odds between two labels of a distribution.

    Raises UnknownLabel for missing labels and BothZero when both carry
    probability zero.
    """
    p_first = dist[first]
    p_second = dist[second]
    if p_first == 0 and p_second == 0:
        raise BothZero(f"both {first!r} and {second!r} have probability zero")
    return Odds(
        p_first.numerator * p_second.denominator,
        p_second.numerator * p_first.denominator,
    )


def distribution_from_odds(odds: Odds, first: str, second: str) -> Distribution:
    """The two-label distribution implied by ``odds``.

    Inverse of :func:`odds_from_distribution` up to labels with zero
    probability on both sides, which odds cannot represent.
    """
    if first == second:
        raise EngineError("the two labels must differ")
    total = odds.favor + odds.against
    return Distribution.from_pairs(
        [
            (first, Fraction(odds.favor, total)),
            (second, Fraction(odds.against, total)),
        ]
    )
