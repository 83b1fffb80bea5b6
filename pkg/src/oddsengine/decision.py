"""Serving decisions under 0-1 anger loss.

A strategy maps each hat color to a distribution over foods to serve.
The guest is angry exactly when the served food differs from her taste,
so the per-hat anger probability is the mismatch mass between the taste
row and the strategy's food distribution. Deterministically serving the
most likely taste minimizes that mass; mixing (the medallion bag) can
only do worse.

Strategies serialize as ``{hat: {food: "num/den"}}`` with zero-mass
foods omitted.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Mapping

from .core import Distribution, Probability, format_rational
from .errors import EngineError, LabelMismatch, NoSecondLayer, UnknownLabel
from .inference import LikelihoodTable, Scenario

__all__ = [
    "Strategy",
    "AngerReport",
    "anger_probability",
    "anger_report",
    "chessboard_grid",
    "chessboard_oracle",
    "population_chessboard",
    "optimal_strategy",
    "marginal_anger",
    "builtin_strategies",
]


@dataclass(frozen=True)
class Strategy:
    """Per hat color, a distribution over foods to serve."""

    choices: tuple[tuple[str, Distribution], ...]

    def __post_init__(self) -> None:
        seen = set()
        for hat, dist in self.choices:
            if hat in seen:
                raise EngineError(f"duplicate hat {hat!r} in strategy")
            seen.add(hat)
            if not isinstance(dist, Distribution):
                raise TypeError(f"choice for {hat!r} must be a Distribution")
        object.__setattr__(self, "choices", tuple(self.choices))

    @classmethod
    def from_mapping(cls, mapping: Mapping[str, Distribution]) -> "Strategy":
        return cls(tuple(mapping.items()))

    @classmethod
    def deterministic(cls, serving: Mapping[str, str]) -> "Strategy":
        """Point-mass strategy: always serve ``serving[hat]`` for that hat."""
        return cls(
            tuple(
                (hat, Distribution.from_pairs([(food, Fraction(1))]))
                for hat, food in serving.items()
            )
        )

    @property
    def hats(self) -> tuple[str, ...]:
        return tuple(hat for hat, _ in self.choices)

    def for_hat(self, hat: str) -> Distribution:
        for candidate, dist in self.choices:
            if candidate == hat:
                return dist
        raise UnknownLabel(f"strategy has no entry for hat {hat!r}")

    def serve_probability(self, hat: str, food: str) -> Probability:
        """Probability of serving ``food`` under ``hat``; 0 if unlisted."""
        dist = self.for_hat(hat)
        if food in dist:
            return dist[food]
        return Probability(0)

    def to_json(self) -> dict:
        return {hat: dist.to_json() for hat, dist in self.choices}

    @classmethod
    def from_json(cls, payload: Mapping) -> "Strategy":
        return cls(
            tuple(
                (hat, Distribution.from_json(foods)) for hat, foods in payload.items()
            )
        )


def anger_probability(
    strategy: Strategy, taste_table: LikelihoodTable, hat: str
) -> Probability:
    """P(angry | hat): mass where the served food misses the taste."""
    tastes = taste_table.row(hat)
    total = Fraction(0)
    for taste_label, taste_p in zip(taste_table.outcomes, tastes):
        total += taste_p * (1 - strategy.serve_probability(hat, taste_label))
    return Probability(total)


def chessboard_grid(
    sweet_columns: int = 6,
    salty_columns: int = 1,
    sweet_rows: int = 6,
    salty_rows: int = 1,
) -> list[list[bool]]:
    """Enumerate every (guest, medallion) cell of the serving grid.

    Columns are the equally likely guests (sweet-toothed first, then
    salty); rows are the equally likely medallion draws in the same
    order. ``grid[row][column]`` is True when the served food matches
    the guest's taste.
    """
    for count in (sweet_columns, salty_columns, sweet_rows, salty_rows):
        if count < 0:
            raise EngineError("cell counts must be nonnegative")
    column_tastes = ["Sweet"] * sweet_columns + ["Salty"] * salty_columns
    row_foods = ["Sweet"] * sweet_rows + ["Salty"] * salty_rows
    return [[food == taste for taste in column_tastes] for food in row_foods]


def chessboard_oracle(
    sweet_columns: int = 6,
    salty_columns: int = 1,
    sweet_rows: int = 6,
    salty_rows: int = 1,
) -> tuple[int, int]:
    """(satisfied, angry) cell counts of the serving grid.

    The default 7 by 7 grid covers the medallion bag against a violet
    composition: anger count over total cells equals the exact mixed
    anger probability.
    """
    grid = chessboard_grid(sweet_columns, salty_columns, sweet_rows, salty_rows)
    satisfied = sum(cell for row in grid for cell in row)
    total = sum(len(row) for row in grid)
    return satisfied, total - satisfied


def population_chessboard(taste_table: LikelihoodTable, hat: str) -> dict:
    """The mixing grid for one hat color, sized by the taste row.

    Tastes are lifted to their common denominator L: columns are the L
    equally likely guests, rows the L equally likely pulls from a bag
    that mirrors the population. A cell is satisfied when the pulled
    food matches the guest's taste, so ``satisfied = sum of squared
    counts`` and the angry share is exactly the medallion-style mixed
    anger probability.
    """
    row = taste_table.row(hat)
    denominator = 1
    for p in row:
        denominator = denominator * p.denominator // gcd(denominator, p.denominator)
    counts = {
        taste: p.numerator * (denominator // p.denominator)
        for taste, p in zip(taste_table.outcomes, row)
    }
    satisfied = sum(count * count for count in counts.values())
    total = denominator * denominator
    return {
        "size": denominator,
        "counts": counts,
        "satisfied": satisfied,
        "angry": total - satisfied,
    }


def optimal_strategy(taste_table: LikelihoodTable) -> Strategy:
    """Serve each hat's most likely taste deterministically.

    Ties break toward the taste listed first in the table's outcome
    order; the choice is documented rather than arbitrary so runs are
    reproducible.
    """
    serving = {}
    for hat in taste_table.hypotheses:
        row = taste_table.row(hat)
        best = max(row)
        index = row.index(best)
        serving[hat] = taste_table.outcomes[index]
    return Strategy.deterministic(serving)


def marginal_anger(
    strategy: Strategy, scenario: Scenario, weights: Distribution | None = None
) -> Probability:
    """P(angry) with hats and hypotheses summed out.

    ``weights`` is a distribution over the scenario's hypotheses; the
    prior is used when omitted, a posterior makes this the post-evidence
    expected anger.
    """
    if scenario.second_layer is None:
        raise NoSecondLayer("scenario has no taste layer")
    if weights is None:
        weights = scenario.prior
    if weights.labels != scenario.hypotheses:
        raise LabelMismatch("weights must cover the scenario hypotheses")
    total = Fraction(0)
    for hypothesis in scenario.hypotheses:
        per_hypothesis = Fraction(0)
        for hat in scenario.outcomes:
            per_hypothesis += scenario.first_layer.prob(
                hypothesis, hat
            ) * anger_probability(strategy, scenario.second_layer, hat)
        total += weights[hypothesis] * per_hypothesis
    return Probability(total)


@dataclass(frozen=True)
class AngerReport:
    """Per-hat and marginal anger for one strategy against one scenario."""

    strategy_name: str
    per_hat: tuple[tuple[str, Probability], ...]
    marginal: Probability

    def to_json(self) -> dict:
        return {
            "strategy": self.strategy_name,
            "per_hat": {hat: format_rational(p) for hat, p in self.per_hat},
            "marginal": format_rational(self.marginal),
        }


def anger_report(
    strategy: Strategy,
    scenario: Scenario,
    weights: Distribution | None = None,
    name: str = "",
) -> AngerReport:
    if scenario.second_layer is None:
        raise NoSecondLayer("scenario has no taste layer")
    per_hat = tuple(
        (hat, anger_probability(strategy, scenario.second_layer, hat))
        for hat in scenario.outcomes
    )
    return AngerReport(
        strategy_name=name,
        per_hat=per_hat,
        marginal=marginal_anger(strategy, scenario, weights),
    )


def builtin_strategies(scenario: Scenario) -> dict[str, Strategy]:
    """The two bundled strategies for a two-layer scenario.

    ``deterministic`` serves each hat's most likely taste. ``medallion``
    copies the taste fractions into the serving distribution, drawing
    the food from a bag that mirrors the population.
    """
    if scenario.second_layer is None:
        raise NoSecondLayer("scenario has no taste layer")
    table = scenario.second_layer
    medallion_choices = []
    for hat in table.hypotheses:
        pairs = [
            (taste, p)
            for taste, p in zip(table.outcomes, table.row(hat))
            if p > 0
        ]
        medallion_choices.append((hat, Distribution.from_pairs(pairs)))
    return {
        "deterministic": optimal_strategy(table),
        "medallion": Strategy(tuple(medallion_choices)),
    }
