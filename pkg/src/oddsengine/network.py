"""Layered network diagrams of scenarios: DOT text and versioned JSON.

Edges carry their exact conditional probability and a thickness bucket
(weight class 1 through 5). Class 1 edges render dashed in DOT, classes
2 through 5 render solid with growing pen width, and every edge is
labelled with the canonical ``"num/den"`` string. Output is fully
deterministic: same diagram, same bytes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .core import Distribution, RationalLike, as_rational, format_rational
from .errors import EngineError, LabelMismatch, UnknownLabel
from .inference import Scenario

__all__ = [
    "NetNode",
    "NetEdge",
    "NetDiagram",
    "weight_class",
    "diagram_from_scenario",
    "to_dot",
    "to_json",
    "diagram_from_json",
    "DIAGRAM_FORMAT",
]

DIAGRAM_FORMAT = 1

# Bucket upper bounds, exclusive except the last: under 1/10 is class 1,
# then 3/10, 1/2, 4/5, and everything up to 1 is class 5.
_BUCKETS = (Fraction(1, 10), Fraction(3, 10), Fraction(1, 2), Fraction(4, 5))

_PENWIDTHS = {1: "0.6", 2: "1.2", 3: "1.8", 4: "2.6", 5: "3.4"}


def weight_class(probability: RationalLike) -> int:
    """The 1..5 thickness bucket for an exact probability."""
    p = as_rational(probability)
    if not 0 <= p <= 1:
        raise EngineError("edge probability must lie in [0, 1]")
    for index, bound in enumerate(_BUCKETS, start=1):
        if p < bound:
            return index
    return 5


@dataclass(frozen=True)
class NetNode:
    """One node: stable id, display label, layer name, optional annotation.

    ``annotation`` is an exact probability shown next to the label (a
    posterior, typically). ``observed`` marks the node as evidence.
    """

    id: str
    label: str
    layer: str
    annotation: Fraction | None = None
    observed: bool = False


@dataclass(frozen=True)
class NetEdge:
    """A directed edge with its exact probability and thickness bucket."""

    source: str
    target: str
    probability: Fraction
    weight_class: int

    def __post_init__(self) -> None:
        p = as_rational(self.probability)
        object.__setattr__(self, "probability", p)
        if self.weight_class != weight_class(p):
            raise EngineError(
                f"weight class {self.weight_class} does not match probability {p}"
            )


@dataclass(frozen=True)
class NetDiagram:
    """Nodes and edges, with endpoints checked at construction."""

    nodes: tuple[NetNode, ...]
    edges: tuple[NetEdge, ...]

    def __post_init__(self) -> None:
        ids = [node.id for node in self.nodes]
        if len(set(ids)) != len(ids):
            raise EngineError("node ids must be unique")
        known = set(ids)
        for edge in self.edges:
            if edge.source not in known or edge.target not in known:
                raise EngineError(f"edge {edge.source}->{edge.target} dangles")

    def node(self, node_id: str) -> NetNode:
        for candidate in self.nodes:
            if candidate.id == node_id:
                return candidate
        raise UnknownLabel(f"no node {node_id!r}")


def diagram_from_scenario(
    scenario: Scenario,
    posterior: Distribution | None = None,
    evidence: str | None = None,
) -> NetDiagram:
    """Lay a scenario out as layers: hypotheses, outcomes, second layer.

    Every table cell becomes an edge, zero-probability cells included
    (they carry structural information and render dashed). ``posterior``
    annotates the hypothesis nodes; ``evidence`` marks one outcome node
    as observed.
    """
    if posterior is not None and posterior.labels != scenario.hypotheses:
        raise LabelMismatch("posterior labels must match the scenario hypotheses")
    second_outcomes = (
        scenario.second_layer.outcomes if scenario.second_layer is not None else ()
    )
    if evidence is not None:
        if evidence not in scenario.outcomes and evidence not in second_outcomes:
            raise UnknownLabel(f"evidence {evidence!r} is not an outcome")
    nodes = []
    for label in scenario.hypotheses:
        nodes.append(
            NetNode(
                id=f"h:{label}",
                label=label,
                layer="hypothesis",
                annotation=None if posterior is None else posterior[label],
            )
        )
    for label in scenario.outcomes:
        nodes.append(
            NetNode(
                id=f"o:{label}",
                label=label,
                layer="outcome",
                observed=label == evidence,
            )
        )
    for label in second_outcomes:
        nodes.append(
            NetNode(
                id=f"t:{label}",
                label=label,
                layer="second",
                observed=label == evidence,
            )
        )
    edges = []
    for hypothesis in scenario.hypotheses:
        for outcome in scenario.outcomes:
            p = scenario.first_layer.prob(hypothesis, outcome)
            edges.append(
                NetEdge(
                    source=f"h:{hypothesis}",
                    target=f"o:{outcome}",
                    probability=p,
                    weight_class=weight_class(p),
                )
            )
    if scenario.second_layer is not None:
        for outcome in scenario.outcomes:
            for taste in second_outcomes:
                p = scenario.second_layer.prob(outcome, taste)
                edges.append(
                    NetEdge(
                        source=f"o:{outcome}",
                        target=f"t:{taste}",
                        probability=p,
                        weight_class=weight_class(p),
                    )
                )
    return NetDiagram(nodes=tuple(nodes), edges=tuple(edges))


def _dot_quote(text: str) -> str:
    # quotes alone need escaping; backslash sequences like \n are DOT's
    # own label escapes and must pass through intact
    return '"' + text.replace('"', '\\"') + '"'


def to_dot(diagram: NetDiagram) -> str:
    """Graphviz DOT text, deterministic line order.

    Node labels carry the annotation on a second line and a check mark
    when observed. Edge pen width grows with the weight class; class 1
    is dashed.
    """
    lines = ["digraph scenario {", "  rankdir=LR;", '  node [shape=ellipse];']
    for node in diagram.nodes:
        label = node.label
        if node.observed:
            label += " ✓"
        if node.annotation is not None:
            label += f"\\n{format_rational(node.annotation)}"
        lines.append(f"  {_dot_quote(node.id)} [label={_dot_quote(label)}];")
    for edge in diagram.edges:
        style = ', style=dashed' if edge.weight_class == 1 else ""
        lines.append(
            f"  {_dot_quote(edge.source)} -> {_dot_quote(edge.target)} "
            f'[label="{format_rational(edge.probability)}", '
            f"penwidth={_PENWIDTHS[edge.weight_class]}{style}];"
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_json(diagram: NetDiagram) -> dict:
    """A versioned JSON document that round-trips exactly."""
    return {
        "format": DIAGRAM_FORMAT,
        "nodes": [
            {
                "id": node.id,
                "label": node.label,
                "layer": node.layer,
                "annotation": (
                    None if node.annotation is None else format_rational(node.annotation)
                ),
                "observed": node.observed,
            }
            for node in diagram.nodes
        ],
        "edges": [
            {
                "source": edge.source,
                "target": edge.target,
                "probability": format_rational(edge.probability),
                "weight_class": edge.weight_class,
            }
            for edge in diagram.edges
        ],
    }


def diagram_from_json(payload: Mapping | str) -> NetDiagram:
    """Parse a diagram document; rejects unknown format versions."""
    if isinstance(payload, str):
        payload = json.loads(payload)
    if payload.get("format") != DIAGRAM_FORMAT:
        raise EngineError(f"unsupported diagram format {payload.get('format')!r}")
    nodes = tuple(
        NetNode(
            id=item["id"],
            label=item["label"],
            layer=item["layer"],
            annotation=(
                None if item.get("annotation") is None else Fraction(item["annotation"])
            ),
            observed=bool(item.get("observed", False)),
        )
        for item in payload["nodes"]
    )
    edges = tuple(
        NetEdge(
            source=item["source"],
            target=item["target"],
            probability=Fraction(item["probability"]),
            weight_class=int(item["weight_class"]),
        )
        for item in payload["edges"]
    )
    return NetDiagram(nodes=nodes, edges=edges)
