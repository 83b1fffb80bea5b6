"""Tests for the layered network diagrams (DOT and versioned JSON)."""

from __future__ import annotations

import json
from fractions import Fraction

import pytest

from oddsengine.errors import EngineError, LabelMismatch, UnknownLabel
from oddsengine.inference import (
    EvidenceSequence,
    build_witch_scenario,
    builtin_scenarios,
    sequential_posterior,
)
from oddsengine.network import (
    NetDiagram,
    NetEdge,
    NetNode,
    diagram_from_json,
    diagram_from_scenario,
    to_dot,
    to_json,
    weight_class,
)


def witch_diagram_after_four_black():
    scenario = build_witch_scenario()
    sequence = EvidenceSequence.from_text("NNNN", scenario.outcomes)
    posterior = sequential_posterior(scenario, sequence)
    return diagram_from_scenario(scenario, posterior=posterior, evidence="N")


# ----------------------------------------------------------------------
# weight classes


def test_weight_class_buckets_and_boundaries() -> None:
    assert weight_class(Fraction(0)) == 1
    assert weight_class(Fraction(1, 20)) == 1
    assert weight_class(Fraction(1, 10)) == 2  # bounds are exclusive upper ends
    assert weight_class(Fraction(1, 5)) == 2
    assert weight_class(Fraction(3, 10)) == 3
    assert weight_class(Fraction(2, 5)) == 3
    assert weight_class(Fraction(1, 2)) == 4
    assert weight_class(Fraction(2, 3)) == 4
    assert weight_class(Fraction(4, 5)) == 5
    assert weight_class(Fraction(1)) == 5


def test_weight_class_rejects_out_of_range() -> None:
    with pytest.raises(EngineError):
        weight_class(Fraction(3, 2))
    with pytest.raises(TypeError):
        weight_class(0.5)


# ----------------------------------------------------------------------
# construction


def test_witch_diagram_shape() -> None:
    diagram = diagram_from_scenario(build_witch_scenario())
    assert [node.id for node in diagram.nodes] == [
        "h:V7",
        "h:V14",
        "o:N",
        "o:V",
        "t:Sweet",
        "t:Salty",
    ]
    assert len(diagram.edges) == 8  # 2x2 hypothesis->hat plus 2x2 hat->taste
    layers = {node.id: node.layer for node in diagram.nodes}
    assert layers["h:V7"] == "hypothesis"
    assert layers["o:N"] == "outcome"
    assert layers["t:Sweet"] == "second"


def test_witch_diagram_annotations_and_evidence() -> None:
    diagram = witch_diagram_after_four_black()
    assert diagram.node("h:V7").annotation == Fraction(16, 17)
    assert diagram.node("h:V14").annotation == Fraction(1, 17)
    assert diagram.node("o:N").observed is True
    assert diagram.node("o:V").observed is False


def test_zero_probability_edge_is_present_and_class_one() -> None:
    diagram = diagram_from_scenario(build_witch_scenario())
    edge = next(
        e for e in diagram.edges if e.source == "o:N" and e.target == "t:Sweet"
    )
    assert edge.probability == 0
    assert edge.weight_class == 1


def test_outgoing_probabilities_sum_to_one_per_node() -> None:
    diagram = diagram_from_scenario(build_witch_scenario())
    sums: dict[str, Fraction] = {}
    for edge in diagram.edges:
        sums[edge.source] = sums.get(edge.source, Fraction(0)) + edge.probability
    assert all(total == 1 for total in sums.values())


def test_single_layer_scenario_diagram() -> None:
    diagram = diagram_from_scenario(builtin_scenarios()["tombola"])
    assert [node.id for node in diagram.nodes] == [
        "h:37",
        "h:not-37",
        "o:pari",
        "o:dispari",
    ]
    assert len(diagram.edges) == 4
    assert all(not node.id.startswith("t:") for node in diagram.nodes)


def test_posterior_label_mismatch_rejected() -> None:
    scenario = build_witch_scenario()
    wrong = sequential_posterior(
        builtin_scenarios()["tombola"], EvidenceSequence(("pari",))
    )
    with pytest.raises(LabelMismatch):
        diagram_from_scenario(scenario, posterior=wrong)


def test_unknown_evidence_rejected() -> None:
    with pytest.raises(UnknownLabel):
        diagram_from_scenario(build_witch_scenario(), evidence="Q")


def test_dangling_edge_and_duplicate_id_rejected() -> None:
    node = NetNode(id="h:A", label="A", layer="hypothesis")
    edge = NetEdge(
        source="h:A", target="o:missing", probability=Fraction(1), weight_class=5
    )
    with pytest.raises(EngineError):
        NetDiagram(nodes=(node,), edges=(edge,))
    with pytest.raises(EngineError):
        NetDiagram(nodes=(node, node), edges=())


def test_edge_weight_class_must_match_probability() -> None:
    with pytest.raises(EngineError):
        NetEdge(source="a", target="b", probability=Fraction(1, 2), weight_class=1)


# ----------------------------------------------------------------------
# DOT rendering


def test_dot_output_is_deterministic_and_well_formed() -> None:
    diagram = witch_diagram_after_four_black()
    dot = to_dot(diagram)
    assert dot == to_dot(witch_diagram_after_four_black())
    assert dot.startswith("digraph scenario {\n")
    assert dot.endswith("}\n")
    assert '"h:V7" [label="V7\\n16/17"];' in dot
    assert '"h:V14" [label="V14\\n1/17"];' in dot
    assert '"o:N" [label="N ✓"];' in dot
    # the impossible black-hat/sweet edge renders dashed and thin
    assert (
        '"o:N" -> "t:Sweet" [label="0/1", penwidth=0.6, style=dashed];' in dot
    )
    # a certain edge renders at the maximum width, solid
    assert '"o:N" -> "t:Salty" [label="1/1", penwidth=3.4];' in dot


def test_dot_escapes_quotes_in_labels() -> None:
    node = NetNode(id='x"y', label='say "hi"', layer="hypothesis")
    dot = to_dot(NetDiagram(nodes=(node,), edges=()))
    assert '"x\\"y" [label="say \\"hi\\""];' in dot


def test_dot_penwidth_tracks_weight_class() -> None:
    dot = to_dot(diagram_from_scenario(build_witch_scenario()))
    assert "penwidth=1.8" in dot  # 1/3 falls in [3/10, 1/2): class 3
    assert "penwidth=2.6" in dot  # 2/3 falls in [1/2, 4/5): class 4


# ----------------------------------------------------------------------
# JSON round trip


def test_json_round_trip_preserves_everything() -> None:
    diagram = witch_diagram_after_four_black()
    payload = to_json(diagram)
    assert payload["format"] == 1
    restored = diagram_from_json(payload)
    assert restored == diagram
    # and through actual serialized text as well
    assert diagram_from_json(json.dumps(payload)) == diagram


def test_json_annotations_are_canonical_strings() -> None:
    payload = to_json(witch_diagram_after_four_black())
    by_id = {node["id"]: node for node in payload["nodes"]}
    assert by_id["h:V7"]["annotation"] == "16/17"
    assert by_id["o:N"]["annotation"] is None
    assert by_id["o:N"]["observed"] is True
    edges = {(e["source"], e["target"]): e for e in payload["edges"]}
    assert edges[("o:N", "t:Sweet")]["probability"] == "0/1"
    assert edges[("o:N", "t:Sweet")]["weight_class"] == 1


def test_json_rejects_unknown_format() -> None:
    payload = to_json(diagram_from_scenario(build_witch_scenario()))
    payload["format"] = 2
    with pytest.raises(EngineError):
        diagram_from_json(payload)
