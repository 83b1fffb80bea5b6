"""Seeded Monte Carlo oracle for the inference and decision layers.

Randomness comes exclusively from SplitMix64, implemented here with its
published constants. Platform generators are deliberately avoided: the
contract is bit-identical streams for a given seed across runs, machines,
and interpreter versions.

Reference vectors for seed 0 (first three outputs of the reference
algorithm): 0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, 0x06C45D188009454F.

Sampling discipline, so that replays are stable by construction:
    * bounded integers come from rejection sampling (no modulo bias);
    * a bound of 1 consumes no entropy;
    * an exact rational Bernoulli(p) is one bounded draw: d < p.numerator
      with d drawn from [0, p.denominator);
    * a categorical draw over an exact distribution is one bounded draw
      against cumulative numerators over the common denominator;
    * each simulated day draws, in order: hat, taste, food.

Simulation reports are JSON lines, one day record per line, closed by a
summary record. Identical configuration implies byte-identical reports.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterator

from .core import Distribution, format_rational
from .decision import Strategy
from .errors import EngineError, UnknownLabel
from .inference import EvidenceSequence, Scenario, sequential_posterior

__all__ = [
    "SplitMix64",
    "CategoricalSampler",
    "DayRecord",
    "SimConfig",
    "simulate_day",
    "simulate_hat_sequence",
    "run_simulation",
    "simulation_report_lines",
    "monte_carlo_posterior_check",
    "within_three_sigma",
    "REPORT_FORMAT",
]

REPORT_FORMAT = 1

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


class SplitMix64:
    """The SplitMix64 generator: 64-bit state, 64-bit outputs.

    next_u64 advances the state by the golden-gamma increment and mixes
    it through two xor-multiply rounds and a final xor-shift.
    """

    __slots__ = ("_state",)

    def __init__(self, seed: int) -> None:
        if not isinstance(seed, int):
            raise TypeError("seed must be an int")
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
        return z ^ (z >> 31)

    def randrange(self, bound: int) -> int:
        """Uniform integer in [0, bound) without modulo bias.

        Rejection sampling: draws above the largest multiple of ``bound``
        that fits in 64 bits are discarded and redrawn. A bound of 1
        consumes no entropy.
        """
        if bound < 1:
            raise EngineError("bound must be positive")
        if bound == 1:
            return 0
        limit = (1 << 64) - ((1 << 64) % bound)
        while True:
            value = self.next_u64()
            if value < limit:
                return value % bound

    def bernoulli(self, p: Fraction) -> bool:
        """Exact Bernoulli(p) for rational p using one bounded draw."""
        if not 0 <= p <= 1:
            raise EngineError("Bernoulli parameter must lie in [0, 1]")
        return self.randrange(p.denominator) < p.numerator


class CategoricalSampler:
    """One-draw exact sampler for a Distribution.

    Probabilities are lifted to a common denominator once; each draw is
    a single bounded integer compared against cumulative numerators.
    """

    __slots__ = ("labels", "_cumulative", "_denominator")

    def __init__(self, dist: Distribution) -> None:
        self.labels = dist.labels
        self._denominator = lcm(*(p.denominator for p in dist.probabilities))
        acc = 0
        cumulative = []
        for p in dist.probabilities:
            acc += p.numerator * (self._denominator // p.denominator)
            cumulative.append(acc)
        self._cumulative = tuple(cumulative)

    def draw(self, rng: SplitMix64) -> str:
        value = rng.randrange(self._denominator)
        for label, bound in zip(self.labels, self._cumulative):
            if value < bound:
                return label
        # unreachable: cumulative ends exactly at the denominator
        raise AssertionError("categorical draw fell off the end")


@dataclass(frozen=True)
class DayRecord:
    """Everything that happened on one simulated day.

    ``hypothesis`` and ``taste`` are ground truth the simulated villager
    never sees; consumers that expose state to players must drop them.
    """

    day: int
    hypothesis: str
    hat: str
    taste: str
    served: str
    angry: bool

    def to_json(self) -> dict:
        return {
            "type": "day",
            "day": self.day,
            "hypothesis": self.hypothesis,
            "hat": self.hat,
            "taste": self.taste,
            "served": self.served,
            "angry": self.angry,
        }


@dataclass(frozen=True)
class SimConfig:
    """A fully pinned simulation: scenario, truth, strategy, seed, length."""

    scenario: Scenario
    hypothesis: str
    strategy: Strategy
    seed: int
    days: int
    strategy_name: str = ""

    def __post_init__(self) -> None:
        if self.hypothesis not in self.scenario.hypotheses:
            raise UnknownLabel(f"unknown hypothesis {self.hypothesis!r}")
        if self.scenario.second_layer is None:
            raise EngineError("simulation needs a two-layer scenario")
        if self.days < 0:
            raise EngineError("days must be nonnegative")


class _DaySamplers:
    """Per-scenario samplers built once and reused every day."""

    def __init__(self, scenario: Scenario, hypothesis: str, strategy: Strategy) -> None:
        first = scenario.first_layer
        self.hat = CategoricalSampler(
            Distribution.from_pairs(zip(first.outcomes, first.row(hypothesis)))
        )
        second = scenario.second_layer
        self.taste = {
            hat: CategoricalSampler(
                Distribution.from_pairs(zip(second.outcomes, second.row(hat)))
            )
            for hat in second.hypotheses
        }
        self.food = {hat: CategoricalSampler(strategy.for_hat(hat)) for hat in strategy.hats}


def simulate_day(
    rng: SplitMix64,
    scenario: Scenario,
    hypothesis: str,
    strategy: Strategy,
    day: int = 0,
    _samplers: _DaySamplers | None = None,
) -> DayRecord:
    """One day: a hat appears, the guest has a taste, a food is served.

    Draw order is hat, taste, food; anger is a pure comparison and
    consumes no entropy.
    """
    samplers = _samplers or _DaySamplers(scenario, hypothesis, strategy)
    hat = samplers.hat.draw(rng)
    taste = samplers.taste[hat].draw(rng)
    served = samplers.food[hat].draw(rng)
    return DayRecord(
        day=day,
        hypothesis=hypothesis,
        hat=hat,
        taste=taste,
        served=served,
        angry=served != taste,
    )


def simulate_hat_sequence(
    rng: SplitMix64, scenario: Scenario, hypothesis: str, days: int
) -> EvidenceSequence:
    """Hats only, independent across days given the hypothesis."""
    first = scenario.first_layer
    sampler = CategoricalSampler(
        Distribution.from_pairs(zip(first.outcomes, first.row(hypothesis)))
    )
    return EvidenceSequence(tuple(sampler.draw(rng) for _ in range(days)))


def _iter_days(config: SimConfig) -> Iterator[DayRecord]:
    rng = SplitMix64(config.seed)
    samplers = _DaySamplers(config.scenario, config.hypothesis, config.strategy)
    for day in range(1, config.days + 1):
        yield simulate_day(
            rng, config.scenario, config.hypothesis, config.strategy, day, samplers
        )


def run_simulation(config: SimConfig) -> dict:
    """Aggregate a full run into a summary record (JSON-ready dict)."""
    hat_counts = {hat: 0 for hat in config.scenario.outcomes}
    taste_counts = {taste: 0 for taste in config.scenario.second_layer.outcomes}
    angry_by_hat = {hat: 0 for hat in config.scenario.outcomes}
    angry_total = 0
    for record in _iter_days(config):
        hat_counts[record.hat] += 1
        taste_counts[record.taste] += 1
        if record.angry:
            angry_by_hat[record.hat] += 1
            angry_total += 1
    return {
        "type": "summary",
        "format": REPORT_FORMAT,
        "seed": config.seed,
        "days": config.days,
        "hypothesis": config.hypothesis,
        "strategy": config.strategy_name,
        "hat_counts": hat_counts,
        "taste_counts": taste_counts,
        "angry_by_hat": angry_by_hat,
        "angry_total": angry_total,
    }


def simulation_report_lines(config: SimConfig, include_days: bool = True) -> Iterator[str]:
    """The JSON-lines report: day records, then the summary line.

    The summary is recomputed from the same stream definition, so the
    report is a pure function of the configuration.
    """
    if include_days:
        for record in _iter_days(config):
            yield json.dumps(record.to_json(), separators=(",", ":"))
    yield json.dumps(run_simulation(config), separators=(",", ":"))


def within_three_sigma(count: int, trials: int, p: Fraction) -> bool:
    """Exact rational check of |count/trials - p| <= 3 sqrt(p(1-p)/trials).

    Both sides are squared so no floating point enters. Zero trials pass
    trivially; a degenerate p (0 or 1) requires exact agreement.
    """
    if trials == 0:
        return True
    p = Fraction(p)
    deviation = Fraction(count, trials) - p
    return deviation * deviation <= Fraction(9) * p * (1 - p) / trials


def monte_carlo_posterior_check(
    scenario: Scenario,
    seed: int,
    days: int,
    runs: int,
    focus: str | None = None,
    bins: int = 10,
) -> dict:
    """Calibration of sequential_posterior against simulated truths.

    Each run draws a true hypothesis from the prior, simulates a hat
    sequence, and computes the exact posterior. Runs are binned by the
    posterior of the ``focus`` hypothesis (default: the first); within
    each bin the observed frequency of the focus hypothesis being true
    must sit within three sigma of the mean stated posterior. All
    comparisons are exact rational arithmetic.
    """
    if runs < 1:
        raise EngineError("runs must be positive")
    focus = focus or scenario.hypotheses[0]
    if focus not in scenario.hypotheses:
        raise UnknownLabel(f"unknown hypothesis {focus!r}")
    rng = SplitMix64(seed)
    prior_sampler = CategoricalSampler(scenario.prior)
    truth_counts = {label: 0 for label in scenario.hypotheses}
    bucket_count = [0] * bins
    bucket_posterior_sum = [Fraction(0)] * bins
    bucket_truth_hits = [0] * bins
    for _ in range(runs):
        truth = prior_sampler.draw(rng)
        truth_counts[truth] += 1
        sequence = simulate_hat_sequence(rng, scenario, truth, days)
        post = sequential_posterior(scenario, sequence)
        p_focus = post[focus]
        index = min(int(p_focus * bins), bins - 1)
        bucket_count[index] += 1
        bucket_posterior_sum[index] += p_focus
        if truth == focus:
            bucket_truth_hits[index] += 1
    bin_reports = []
    all_ok = True
    for index in range(bins):
        n = bucket_count[index]
        if n == 0:
            continue
        mean_posterior = bucket_posterior_sum[index] / n
        ok = within_three_sigma(bucket_truth_hits[index], n, mean_posterior)
        all_ok = all_ok and ok
        bin_reports.append(
            {
                "bin": index,
                "count": n,
                "mean_posterior": format_rational(mean_posterior),
                "truth_frequency": format_rational(Fraction(bucket_truth_hits[index], n)),
                "within_3_sigma": ok,
            }
        )
    marginal_ok = all(
        within_three_sigma(truth_counts[label], runs, scenario.prior[label])
        for label in scenario.hypotheses
    )
    return {
        "type": "calibration",
        "format": REPORT_FORMAT,
        "seed": seed,
        "days": days,
        "runs": runs,
        "focus": focus,
        "truth_counts": truth_counts,
        "marginal_within_3_sigma": marginal_ok,
        "bins": bin_reports,
        "all_within_3_sigma": all_ok and marginal_ok,
    }
