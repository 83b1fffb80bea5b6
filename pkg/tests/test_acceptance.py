"""Acceptance suite: every headline behavior, one test and one line each.

Each test ends with ``[ACCEPTANCE] PASS <name>`` on stdout (visible with
``pytest -s``; under default capture the per-test PASSED line from
``pytest -v`` carries the verdict). All probability checks are exact
rational comparisons; statistical checks on seeded simulations use the
exact three-sigma bound. Expected values are frozen literals,
cross-checked against the engine-free enumeration oracles in
tests/oracles.py.
"""

from __future__ import annotations

import json
import random
from fractions import Fraction

from oddsengine.core import (
    Odds,
    bayes_factor,
    decimal_string,
    distribution_from_odds,
    normalize,
    posterior,
    update_odds,
)
from oddsengine.decision import (
    anger_probability,
    builtin_strategies,
    chessboard_oracle,
    marginal_anger,
    population_chessboard,
)
from oddsengine.inference import (
    EvidenceSequence,
    WitchConfig,
    build_witch_scenario,
    builtin_scenarios,
    laplace_succession,
    second_layer_predictive,
    sequential_posterior,
    predictive,
)
from oddsengine.session import SessionStore
from oddsengine.simulate import (
    SimConfig,
    monte_carlo_posterior_check,
    run_simulation,
    simulation_report_lines,
    within_three_sigma,
)

from oracles import (
    oracle_anger,
    oracle_posterior,
    oracle_predictive,
    oracle_taste_predictive,
    witch_tables,
)

WITCHES = build_witch_scenario()
PRIOR, HATS, TASTES = witch_tables()


def passed(name: str) -> None:
    print(f"[ACCEPTANCE] PASS {name}")


def witch_posterior(text: str):
    sequence = EvidenceSequence.from_text(text, WITCHES.outcomes)
    return sequential_posterior(WITCHES, sequence)


def test_posterior_after_four_black_hats() -> None:
    post = witch_posterior("NNNN")
    assert post["V7"] == Fraction(16, 17)
    assert post["V14"] == Fraction(1, 17)
    assert oracle_posterior(PRIOR, HATS, "NNNN") == {
        "V7": Fraction(16, 17),
        "V14": Fraction(1, 17),
    }
    passed("posterior after four black hats is 16/17 vs 1/17")


def test_posterior_after_ten_violet_hats() -> None:
    post = witch_posterior("VVVVVVVVVV")
    assert post["V7"] == Fraction(1, 1025)
    assert post["V14"] == Fraction(1024, 1025)
    assert oracle_posterior(PRIOR, HATS, "VVVVVVVVVV") == {
        "V7": Fraction(1, 1025),
        "V14": Fraction(1024, 1025),
    }
    passed("posterior after ten violet hats is 1/1025 vs 1024/1025")


def test_next_hat_prediction_after_ten_violet() -> None:
    sequence = EvidenceSequence.from_text("VVVVVVVVVV", WITCHES.outcomes)
    value = predictive(WITCHES, sequence, "V")
    assert value == Fraction(2049, 3075)  # canonical form 683/1025
    assert value == oracle_predictive(PRIOR, HATS, "VVVVVVVVVV", "V")
    assert decimal_string(value).startswith("0.6663")
    # prediction always stays inside the likelihood column's range
    assert Fraction(1, 3) <= value <= Fraction(2, 3)
    passed("eleventh-day violet prediction is 2049/3075 = 0.6663...")


def test_balanced_sequences_restore_the_prior() -> None:
    for text in ("NV", "VN", "NNVV", "NVVN", "VNNV", "NVNVNV", "NNNVVV", "NVNVNVNV"):
        post = witch_posterior(text)
        assert post["V7"] == Fraction(1, 2), text
        assert post["V14"] == Fraction(1, 2), text
    passed("balanced sequences leave the prior untouched")


def test_posterior_depends_only_on_counts() -> None:
    rnd = random.Random(20260819)
    for _ in range(1000):
        length = rnd.randint(1, 12)
        observations = [rnd.choice("NV") for _ in range(length)]
        shuffled = observations[:]
        rnd.shuffle(shuffled)
        first = sequential_posterior(WITCHES, EvidenceSequence(tuple(observations)))
        second = sequential_posterior(WITCHES, EvidenceSequence(tuple(shuffled)))
        assert first == second, (observations, shuffled)
    passed("1000 random reorderings: posterior depends only on counts")


def test_odds_and_posterior_routes_agree() -> None:
    rnd = random.Random(1889)
    checked = 0
    while checked < 1000:
        prior_favor = rnd.randint(1, 30)
        prior_against = rnd.randint(1, 30)
        like_a = Fraction(rnd.randint(0, 12), 12)
        like_b = Fraction(rnd.randint(0, 12), 12)
        if like_a == like_b == 0:
            continue  # evidence impossible under both: nothing to compare
        prior = normalize([("a", prior_favor), ("b", prior_against)])
        via_posterior = posterior(prior, [like_a, like_b])
        odds = update_odds(
            Odds(prior_favor, prior_against), bayes_factor(like_a, like_b)
        )
        via_odds = distribution_from_odds(odds, "a", "b")
        assert via_posterior == via_odds, (prior_favor, prior_against, like_a, like_b)
        checked += 1
    passed("1000 random binary updates: odds route equals posterior route")


def test_anger_probabilities_and_chessboard() -> None:
    strategies = builtin_strategies(WITCHES)
    taste = WITCHES.second_layer

    deterministic = strategies["deterministic"]
    assert anger_probability(deterministic, taste, "N") == 0
    assert anger_probability(deterministic, taste, "V") == Fraction(1, 7)
    assert Fraction(1, 7) == Fraction(7, 49)
    assert oracle_anger(TASTES["V"], {"Sweet": Fraction(1)}) == Fraction(1, 7)

    medallion = strategies["medallion"]
    med_violet = anger_probability(medallion, taste, "V")
    assert med_violet == Fraction(12, 49)
    assert anger_probability(medallion, taste, "N") == 0
    # 7x7 chessboard: 37 matched cells, 12 angry cells, and 49 times the
    # mixed anger probability is exactly the angry cell count
    assert chessboard_oracle() == (37, 12)
    grid = population_chessboard(taste, "V")
    assert (grid["satisfied"], grid["angry"], grid["size"]) == (37, 12, 7)
    assert 49 * med_violet == 12

    # prior-weighted marginals, then near-certainty about the many-witch
    # composition pushing the deterministic marginal up to its 2/21 limit
    assert marginal_anger(deterministic, WITCHES) == Fraction(1, 14)
    assert marginal_anger(medallion, WITCHES) == Fraction(6, 49)
    certain = sequential_posterior(WITCHES, EvidenceSequence(("V",) * 40))
    gap = Fraction(2, 21) - marginal_anger(deterministic, WITCHES, certain)
    assert 0 < gap < Fraction(1, 10**12)
    passed("anger: deterministic 1/7, medallion 12/49, chessboard 37/12")


def test_taste_prediction_and_limits() -> None:
    sequence = EvidenceSequence.from_text("NNNN", WITCHES.outcomes)
    salty = second_layer_predictive(WITCHES, sequence, "Salty")
    sweet = second_layer_predictive(WITCHES, sequence, "Sweet")
    assert salty == Fraction(83, 119)
    assert sweet == Fraction(36, 119)
    assert salty == oracle_taste_predictive(PRIOR, HATS, TASTES, "NNNN", "Salty")
    assert sweet + salty == 1

    # limiting town: knowing the composition pins tomorrow's taste odds
    many = build_witch_scenario(WitchConfig(candidates=(14,)))
    empty = EvidenceSequence(())
    assert second_layer_predictive(many, empty, "Sweet") == Fraction(4, 7)
    assert second_layer_predictive(many, empty, "Salty") == Fraction(3, 7)
    # and a long violet run converges to the same limit from below
    long_run = EvidenceSequence(("V",) * 50)
    gap = Fraction(4, 7) - second_layer_predictive(WITCHES, long_run, "Sweet")
    assert 0 < gap < Fraction(1, 10**12)
    passed("taste: 83/119 salty after four black hats; limits 4/7 and 3/7")


def test_lottery_update() -> None:
    tombola = builtin_scenarios()["tombola"]
    post = sequential_posterior(tombola, EvidenceSequence(("dispari",)))
    assert post["37"] == Fraction(1, 45)
    assert post["not-37"] == Fraction(44, 45)
    # same result through the odds form: 1:89 times a factor of 89/44
    factor = bayes_factor(Fraction(1), Fraction(44, 89))
    assert factor.value == Fraction(89, 44)
    assert update_odds(Odds(1, 89), factor) == Odds(1, 44)
    # hearing an even number instead refutes ticket 37 outright
    refuted = sequential_posterior(tombola, EvidenceSequence(("pari",)))
    assert refuted["37"] == 0
    assert refuted["not-37"] == 1
    passed("lottery: 1/45 after an odd call, 0 after an even call")


def test_screening_update_is_asymmetric() -> None:
    prenatal = builtin_scenarios()["prenatal"]
    post_m = sequential_posterior(prenatal, EvidenceSequence(("m",)))
    post_f = sequential_posterior(prenatal, EvidenceSequence(("f",)))
    assert post_m["M"] == Fraction(19, 23)
    assert post_f["F"] == Fraction(16, 17)
    # four-cell joint enumeration: P(M|m) and P(F|f) from the raw cells
    cells = {
        ("M", "m"): Fraction(1, 2) * Fraction(19, 20),
        ("M", "f"): Fraction(1, 2) * Fraction(1, 20),
        ("F", "m"): Fraction(1, 2) * Fraction(1, 5),
        ("F", "f"): Fraction(1, 2) * Fraction(4, 5),
    }
    assert sum(cells.values()) == 1
    assert post_m["M"] == cells[("M", "m")] / (cells[("M", "m")] + cells[("F", "m")])
    assert post_f["F"] == cells[("F", "f")] / (cells[("F", "f")] + cells[("M", "f")])
    # the same reading is weaker in one direction than the other
    assert post_m["M"] < post_f["F"]
    passed("screening: 19/23 for one reading, 16/17 for the other")


def test_rule_of_succession_sweep() -> None:
    for n in range(0, 101):
        for x in range(0, n + 1):
            estimate = laplace_succession(x, n)
            assert estimate.point == Fraction(x + 1, n + 2)
            if n:
                assert estimate.frequency == Fraction(x, n)
            else:
                assert estimate.frequency is None
    assert laplace_succession(0, 0).point == Fraction(1, 2)
    assert laplace_succession(10, 10).point == Fraction(11, 12)
    passed("rule of succession: (x+1)/(n+2) across the full sweep to n=100")


def test_seeded_simulation_statistics() -> None:
    strategies = builtin_strategies(WITCHES)
    days = 100_000
    summaries = {}
    for name in ("deterministic", "medallion"):
        config = SimConfig(
            scenario=WITCHES,
            hypothesis="V14",
            strategy=strategies[name],
            seed=20260819,
            days=days,
            strategy_name=name,
        )
        summary = run_simulation(config)
        summaries[name] = summary
        # hat frequency tracks the true composition
        assert within_three_sigma(summary["hat_counts"]["V"], days, Fraction(2, 3))
        # anger conditioned on the hat tracks the exact per-hat probability
        assert summary["angry_by_hat"]["N"] == 0
        expected = anger_probability(strategies[name], WITCHES.second_layer, "V")
        assert within_three_sigma(
            summary["angry_by_hat"]["V"], summary["hat_counts"]["V"], expected
        )
        # the report is a pure function of the configuration
        assert list(simulation_report_lines(config, include_days=False)) == [
            json.dumps(summary, separators=(",", ":"))
        ]
    # the mixing strategy really does anger more guests than the greedy one
    assert summaries["medallion"]["angry_total"] > summaries["deterministic"]["angry_total"]

    # day-by-day reports are byte-identical run to run
    config = SimConfig(
        scenario=WITCHES,
        hypothesis="V7",
        strategy=strategies["medallion"],
        seed=7,
        days=2000,
        strategy_name="medallion",
    )
    first = "\n".join(simulation_report_lines(config))
    second = "\n".join(simulation_report_lines(config))
    assert first == second
    assert len(first.splitlines()) == 2001

    # simulated truths and exact posteriors stay calibrated
    report = monte_carlo_posterior_check(WITCHES, seed=31, days=10, runs=2000)
    assert report["all_within_3_sigma"] is True
    passed("seeded simulation: frequencies, anger, calibration, byte-stable reports")


TRANSCRIPT = [
    {"op": "create_session", "mode": "manual"},
    {"op": "observe", "session": "s1", "outcome": "N"},
    {"op": "observe", "session": "s1", "outcome": "N"},
    {"op": "observe", "session": "s1", "outcome": "N"},
    {"op": "observe", "session": "s1", "outcome": "N"},
    {"op": "state", "session": "s1"},
    {"op": "what_if", "session": "s1", "suffix": "VV"},
    {"op": "state", "session": "s1"},
    {"op": "network", "session": "s1"},
    {"op": "what_if", "session": "s1", "suffix": ["V", "V"]},
    {"op": "create_session", "mode": "simulated", "seed": 2026},
    {"op": "next_day", "session": "s2"},
    {"op": "serve", "session": "s2", "food": "Sweet"},
    {"op": "next_day", "session": "s2"},
    {"op": "serve", "session": "s2", "food": "Salty"},
    {"op": "next_day", "session": "s2"},
    {"op": "state", "session": "s2"},
    {"op": "network", "session": "s2"},
    {"op": "reset", "session": "s2"},
    {"op": "state", "session": "s2"},
    {"op": "next_day", "session": "s2"},
    {"op": "serve", "session": "s2", "food": "Sweet"},
    {"op": "list_scenarios"},
    {"op": "create_session", "scenario": "tombola"},
    {"op": "observe", "session": "s3", "outcome": "dispari"},
    {"op": "state", "session": "s3"},
    {"op": "observe", "session": "s3", "outcome": "sideways"},
    {"op": "state", "session": "ghost"},
    {"op": "reveal", "session": "s2"},
    {"op": "what_if", "session": "s1", "suffix": "NN"},
]


def test_protocol_transcript_determinism() -> None:
    assert len(TRANSCRIPT) == 30

    def run() -> list[str]:
        store = SessionStore()
        out = []
        for command in TRANSCRIPT:
            status, envelope = store.dispatch(command)
            out.append(
                json.dumps(
                    {"status": status, "envelope": envelope}, separators=(",", ":")
                )
            )
        return out

    first = run()
    second = run()
    assert first == second

    parsed = [json.loads(line) for line in first]
    # what_if between the two state snapshots changed nothing
    assert parsed[5]["envelope"] == parsed[7]["envelope"]
    assert parsed[6]["envelope"]["result"]["posterior"]["V7"]["fraction"] == "4/5"
    # the error tail behaves identically on both runs too
    assert parsed[26]["status"] == 422
    assert parsed[27]["status"] == 404
    assert parsed[28]["status"] == 409
    assert parsed[0]["envelope"]["result"]["session"] == "s1"
    assert parsed[5]["envelope"]["result"]["posterior"]["V7"]["fraction"] == "16/17"
    passed("30-command transcript replays byte-identically, errors included")
