"""Two-layer scenarios and sequential inference over observation sequences.

A scenario couples a prior over hypotheses with a likelihood table from
hypotheses to observable outcomes, plus an optional second table whose
hypotheses are exactly the first table's outcomes (outcome of day one
layer feeds the next). Observations within a sequence are conditionally
independent given the hypothesis, so a sequence's likelihood is the plain
product of per-observation likelihoods and posteriors depend on outcome
counts only, never on their order.

Scenario documents serialize to JSON with a top-level ``"format": 1``
field; probabilities travel as canonical ``"num/den"`` strings.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .core import (
    Distribution,
    Probability,
    RationalLike,
    as_rational,
    format_rational,
    normalize,
    posterior,
    total_probability,
)
from .errors import (
    EngineError,
    LabelMismatch,
    NoSecondLayer,
    NothingLeft,
    UnknownLabel,
    XExceedsN,
)

__all__ = [
    "LikelihoodTable",
    "Scenario",
    "EvidenceSequence",
    "WitchConfig",
    "SuccessionEstimate",
    "build_witch_scenario",
    "filter_by_observed_outcomes",
    "filter_by_observed_colors",
    "sequence_likelihood",
    "sequential_posterior",
    "predictive",
    "second_layer_predictive",
    "infer_hat_from_taste",
    "laplace_succession",
    "builtin_scenarios",
    "scenario_to_json",
    "scenario_from_json",
    "SCENARIO_FORMAT",
]

SCENARIO_FORMAT = 1


@dataclass(frozen=True)
class LikelihoodTable:
    """Conditional probabilities of outcomes given hypotheses.

    ``rows[i][j]`` is P(outcomes[j] | hypotheses[i]); every row must sum
    to exactly 1.
    """

    hypotheses: tuple[str, ...]
    outcomes: tuple[str, ...]
    rows: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        for group, labels in (("hypothesis", self.hypotheses), ("outcome", self.outcomes)):
            if len(set(labels)) != len(labels):
                raise EngineError(f"duplicate {group} labels in {labels!r}")
        if not self.hypotheses or not self.outcomes:
            raise EngineError("a likelihood table needs hypotheses and outcomes")
        if len(self.rows) != len(self.hypotheses):
            raise LabelMismatch("one row per hypothesis required")
        coerced = []
        for label, row in zip(self.hypotheses, self.rows):
            values = tuple(as_rational(value) for value in row)
            if len(values) != len(self.outcomes):
                raise LabelMismatch(f"row for {label!r} has the wrong width")
            for value in values:
                if not 0 <= value <= 1:
                    raise EngineError(f"probability outside [0, 1] in row {label!r}")
            if sum(values) != 1:
                raise EngineError(f"row for {label!r} does not sum to 1")
            coerced.append(values)
        object.__setattr__(self, "hypotheses", tuple(self.hypotheses))
        object.__setattr__(self, "outcomes", tuple(self.outcomes))
        object.__setattr__(self, "rows", tuple(coerced))

    def _hypothesis_index(self, hypothesis: str) -> int:
        try:
            return self.hypotheses.index(hypothesis)
        except ValueError:
            raise UnknownLabel(f"unknown hypothesis {hypothesis!r}") from None

    def _outcome_index(self, outcome: str) -> int:
        try:
            return self.outcomes.index(outcome)
        except ValueError:
            raise UnknownLabel(f"unknown outcome {outcome!r}") from None

    def prob(self, hypothesis: str, outcome: str) -> Probability:
        return Probability(self.rows[self._hypothesis_index(hypothesis)][self._outcome_index(outcome)])

    def row(self, hypothesis: str) -> tuple[Fraction, ...]:
        return self.rows[self._hypothesis_index(hypothesis)]

    def column(self, outcome: str) -> tuple[Fraction, ...]:
        """P(outcome | h) for every hypothesis, aligned with ``hypotheses``."""
        j = self._outcome_index(outcome)
        return tuple(row[j] for row in self.rows)

    def to_json(self) -> dict:
        return {
            "outcomes": list(self.outcomes),
            "likelihoods": {
                hypothesis: {
                    outcome: format_rational(value)
                    for outcome, value in zip(self.outcomes, row)
                }
                for hypothesis, row in zip(self.hypotheses, self.rows)
            },
        }

    @classmethod
    def from_json(cls, payload: Mapping) -> "LikelihoodTable":
        outcomes = tuple(payload["outcomes"])
        likelihoods = payload["likelihoods"]
        hypotheses = tuple(likelihoods.keys())
        rows = tuple(
            tuple(Fraction(likelihoods[h][o]) for o in outcomes) for h in hypotheses
        )
        return cls(hypotheses=hypotheses, outcomes=outcomes, rows=rows)


@dataclass(frozen=True)
class Scenario:
    """A prior plus one or two likelihood layers.

    The second layer, when present, must have the first layer's outcomes
    as its hypotheses: its rows condition on what the first layer emits.
    """

    prior: Distribution
    first_layer: LikelihoodTable
    second_layer: LikelihoodTable | None = None
    name: str = ""

    def __post_init__(self) -> None:
        if self.prior.labels != self.first_layer.hypotheses:
            raise LabelMismatch("prior labels must match first-layer hypotheses")
        if self.second_layer is not None:
            if self.second_layer.hypotheses != self.first_layer.outcomes:
                raise LabelMismatch(
                    "second-layer hypotheses must be the first-layer outcomes"
                )

    @property
    def hypotheses(self) -> tuple[str, ...]:
        return self.first_layer.hypotheses

    @property
    def outcomes(self) -> tuple[str, ...]:
        return self.first_layer.outcomes


@dataclass(frozen=True)
class EvidenceSequence:
    """An ordered tuple of observed first-layer outcome labels."""

    observations: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "observations", tuple(self.observations))

    @classmethod
    def from_text(cls, text: str, outcomes: Sequence[str]) -> "EvidenceSequence":
        """Parse ``"NNVN"`` or ``"dispari,pari"`` against known outcomes.

        Comma-separated tokens win when every token is a known outcome;
        otherwise each character must itself be an outcome label.
        """
        text = text.strip()
        if not text:
            return cls(())
        known = set(outcomes)
        tokens = [token.strip() for token in text.split(",")]
        if all(token in known for token in tokens):
            return cls(tuple(tokens))
        if "," not in text and all(ch in known for ch in text):
            return cls(tuple(text))
        raise UnknownLabel(f"cannot read {text!r} as outcomes from {sorted(known)}")

    def validated(self, outcomes: Sequence[str]) -> "EvidenceSequence":
        known = set(outcomes)
        for label in self.observations:
            if label not in known:
                raise UnknownLabel(f"unknown outcome {label!r} in sequence")
        return self

    def extended(self, suffix: Iterable[str]) -> "EvidenceSequence":
        return EvidenceSequence(self.observations + tuple(suffix))

    def counts(self) -> dict[str, int]:
        tally: dict[str, int] = {}
        for label in self.observations:
            tally[label] = tally.get(label, 0) + 1
        return tally

    def __len__(self) -> int:
        return len(self.observations)

    def __iter__(self):
        return iter(self.observations)

    def __str__(self) -> str:
        if all(len(label) == 1 for label in self.observations):
            return "".join(self.observations)
        return ",".join(self.observations)


@dataclass(frozen=True)
class WitchConfig:
    """Parameters of the cave scenario.

    ``candidates`` are the violet-hat counts still in play; each count v
    gives a hypothesis labelled ``V{v}`` with hat likelihood v/total for
    a violet hat. Taste fractions describe the second layer: violet-hat
    witches like sweet with ``sweet_fraction_violet``, black-hat witches
    like salty with ``salty_fraction_black``.
    """

    total: int = 21
    candidates: tuple[int, ...] = (7, 14)
    sweet_fraction_violet: Fraction = field(default=Fraction(6, 7))
    salty_fraction_black: Fraction = field(default=Fraction(1))

    def __post_init__(self) -> None:
        if self.total < 1:
            raise EngineError("total witch count must be positive")
        candidates = tuple(self.candidates)
        if not candidates:
            raise EngineError("at least one candidate count required")
        if len(set(candidates)) != len(candidates):
            raise EngineError("candidate counts must be distinct")
        for count in candidates:
            if not isinstance(count, int) or not 0 <= count <= self.total:
                raise EngineError(f"candidate count {count!r} outside 0..{self.total}")
        object.__setattr__(self, "candidates", candidates)
        for name in ("sweet_fraction_violet", "salty_fraction_black"):
            value = as_rational(getattr(self, name))
            if not 0 <= value <= 1:
                raise EngineError(f"{name} must lie in [0, 1]")
            object.__setattr__(self, name, value)


HAT_BLACK = "N"
HAT_VIOLET = "V"
TASTE_SWEET = "Sweet"
TASTE_SALTY = "Salty"


def build_witch_scenario(config: WitchConfig | None = None) -> Scenario:
    """The cave scenario: composition hypotheses, hat colors, tastes.

    Hypotheses get a uniform prior in the order the candidate counts are
    listed. Outcomes are ``N`` (black) and ``V`` (violet); the second
    layer emits ``Sweet`` then ``Salty``, in that order, which is also
    the tie-breaking order for decisions downstream.
    """
    config = config or WitchConfig()
    hypotheses = tuple(f"V{count}" for count in config.candidates)
    share = Fraction(1, len(hypotheses))
    prior = Distribution.from_pairs((label, share) for label in hypotheses)
    first = LikelihoodTable(
        hypotheses=hypotheses,
        outcomes=(HAT_BLACK, HAT_VIOLET),
        rows=tuple(
            (Fraction(config.total - count, config.total), Fraction(count, config.total))
            for count in config.candidates
        ),
    )
    second = LikelihoodTable(
        hypotheses=(HAT_BLACK, HAT_VIOLET),
        outcomes=(TASTE_SWEET, TASTE_SALTY),
        rows=(
            (1 - config.salty_fraction_black, config.salty_fraction_black),
            (config.sweet_fraction_violet, 1 - config.sweet_fraction_violet),
        ),
    )
    return Scenario(prior=prior, first_layer=first, second_layer=second, name="witches")


def filter_by_observed_outcomes(scenario: Scenario, observed: Iterable[str]) -> Scenario:
    """Drop hypotheses that give any observed outcome probability zero.

    The surviving prior is renormalized. Raises NothingLeft when no
    hypothesis survives.
    """
    observed = list(observed)
    for label in observed:
        if label not in scenario.outcomes:
            raise UnknownLabel(f"unknown outcome {label!r}")
    keep = [
        hypothesis
        for hypothesis in scenario.hypotheses
        if all(scenario.first_layer.prob(hypothesis, label) > 0 for label in observed)
    ]
    if not keep:
        raise NothingLeft("every hypothesis is ruled out by the observed outcomes")
    if len(keep) == len(scenario.hypotheses):
        return scenario
    prior = normalize(
        (label, scenario.prior[label]) for label in keep
    )
    first = LikelihoodTable(
        hypotheses=tuple(keep),
        outcomes=scenario.outcomes,
        rows=tuple(scenario.first_layer.row(label) for label in keep),
    )
    return replace(scenario, prior=prior, first_layer=first)


def filter_by_observed_colors(
    scenario: Scenario, seen_black: bool = False, seen_violet: bool = False
) -> Scenario:
    """Cave-scenario wrapper over :func:`filter_by_observed_outcomes`."""
    observed = []
    if seen_black:
        observed.append(HAT_BLACK)
    if seen_violet:
        observed.append(HAT_VIOLET)
    return filter_by_observed_outcomes(scenario, observed)


def sequence_likelihood(
    scenario: Scenario, hypothesis: str, sequence: EvidenceSequence
) -> Probability:
    """P(sequence | hypothesis): the product of per-day likelihoods."""
    sequence.validated(scenario.outcomes)
    result = Fraction(1)
    for label in sequence:
        result *= scenario.first_layer.prob(hypothesis, label)
    return Probability(result)


def sequential_posterior(scenario: Scenario, sequence: EvidenceSequence) -> Distribution:
    """Posterior over hypotheses after the whole sequence.

    Order never matters: the likelihood is a product, so only outcome
    counts reach the posterior. Raises ImpossibleEvidence when no
    hypothesis can produce the sequence.
    """
    likelihoods = [
        sequence_likelihood(scenario, hypothesis, sequence)
        for hypothesis in scenario.hypotheses
    ]
    return posterior(scenario.prior, likelihoods)


def predictive(scenario: Scenario, sequence: EvidenceSequence, outcome: str) -> Probability:
    """P(next outcome | sequence): posterior-weighted mean of the column.

    Always lies between the smallest and largest per-hypothesis value of
    P(outcome | h), whatever the sequence says.
    """
    post = sequential_posterior(scenario, sequence)
    return total_probability(scenario.first_layer.column(outcome), post)


def second_layer_predictive(
    scenario: Scenario, sequence: EvidenceSequence, second_outcome: str
) -> Probability:
    """P(second-layer outcome tomorrow | sequence), both layers summed out."""
    if scenario.second_layer is None:
        raise NoSecondLayer("scenario has no second layer")
    total = Fraction(0)
    for first_outcome in scenario.outcomes:
        weight = predictive(scenario, sequence, first_outcome)
        total += weight * scenario.second_layer.prob(first_outcome, second_outcome)
    return Probability(total)


def infer_hat_from_taste(
    scenario: Scenario, hat_prior: Distribution, liked: str
) -> Distribution:
    """Invert the second layer: posterior over hats given a liked taste.

    ``hat_prior`` must be a distribution over the first-layer outcomes.
    Raises ImpossibleEvidence when the liked taste is impossible under
    every hat the prior allows.
    """
    if scenario.second_layer is None:
        raise NoSecondLayer("scenario has no second layer")
    if hat_prior.labels != scenario.outcomes:
        raise LabelMismatch("hat prior labels must match the first-layer outcomes")
    likelihoods = [
        scenario.second_layer.prob(hat, liked) for hat in scenario.outcomes
    ]
    return posterior(hat_prior, likelihoods)


@dataclass(frozen=True)
class SuccessionEstimate:
    """The succession estimate and, when defined, the raw frequency."""

    point: Probability
    frequency: Probability | None

    def to_json(self) -> dict:
        return {
            "point": format_rational(self.point),
            "frequency": None if self.frequency is None else format_rational(self.frequency),
        }


def laplace_succession(successes: int, trials: int) -> SuccessionEstimate:
    """(successes + 1) / (trials + 2), defined even with no data.

    With zero trials the estimate is exactly 1/2. The raw frequency
    successes/trials accompanies the estimate whenever trials > 0.
    """
    if not isinstance(successes, int) or not isinstance(trials, int):
        raise TypeError("counts must be ints")
    if successes < 0 or trials < 0:
        raise EngineError("counts must be nonnegative")
    if successes > trials:
        raise XExceedsN(f"{successes} successes out of {trials} trials")
    point = Probability(successes + 1, trials + 2)
    frequency = Probability(successes, trials) if trials > 0 else None
    return SuccessionEstimate(point=point, frequency=frequency)


def builtin_scenarios() -> dict[str, Scenario]:
    """The three bundled scenarios, keyed by name.

    ``witches`` is the two-layer cave scenario. ``tombola`` asks whether
    a drawn number was 37 given parity announcements. ``prenatal`` is a
    two-test screening comparison with asymmetric accuracy.
    """
    witches = build_witch_scenario()
    tombola = Scenario(
        name="tombola",
        prior=Distribution.from_pairs([("37", Fraction(1, 90)), ("not-37", Fraction(89, 90))]),
        first_layer=LikelihoodTable(
            hypotheses=("37", "not-37"),
            outcomes=("pari", "dispari"),
            rows=(
                (Fraction(0), Fraction(1)),
                (Fraction(45, 89), Fraction(44, 89)),
            ),
        ),
    )
    prenatal = Scenario(
        name="prenatal",
        prior=Distribution.from_pairs([("M", Fraction(1, 2)), ("F", Fraction(1, 2))]),
        first_layer=LikelihoodTable(
            hypotheses=("M", "F"),
            outcomes=("m", "f"),
            rows=(
                (Fraction(19, 20), Fraction(1, 20)),
                (Fraction(1, 5), Fraction(4, 5)),
            ),
        ),
    )
    return {"witches": witches, "tombola": tombola, "prenatal": prenatal}


def scenario_to_json(scenario: Scenario) -> dict:
    """A versioned, order-preserving JSON document for a scenario."""
    payload = {
        "format": SCENARIO_FORMAT,
        "name": scenario.name,
        "hypotheses": list(scenario.hypotheses),
        "prior": scenario.prior.to_json(),
        "first_layer": scenario.first_layer.to_json(),
        "second_layer": None,
    }
    if scenario.second_layer is not None:
        payload["second_layer"] = scenario.second_layer.to_json()
    return payload


def scenario_from_json(payload: Mapping | str) -> Scenario:
    """Parse a scenario document; rejects unknown format versions."""
    if isinstance(payload, str):
        payload = json.loads(payload)
    if payload.get("format") != SCENARIO_FORMAT:
        raise EngineError(f"unsupported scenario format {payload.get('format')!r}")
    hypotheses = list(payload["hypotheses"])
    prior_map = payload["prior"]
    if sorted(prior_map.keys()) != sorted(hypotheses):
        raise LabelMismatch("prior labels must match the hypothesis list")
    prior = Distribution.from_pairs(
        (label, Fraction(prior_map[label])) for label in hypotheses
    )
    first_payload = dict(payload["first_layer"])
    first_payload["likelihoods"] = {
        label: first_payload["likelihoods"][label] for label in hypotheses
    }
    first = LikelihoodTable.from_json(first_payload)
    second = None
    if payload.get("second_layer"):
        second_payload = dict(payload["second_layer"])
        second_payload["likelihoods"] = {
            label: second_payload["likelihoods"][label] for label in first.outcomes
        }
        second = LikelihoodTable.from_json(second_payload)
    return Scenario(
        prior=prior,
        first_layer=first,
        second_layer=second,
        name=str(payload.get("name", "")),
    )
