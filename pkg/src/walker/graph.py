"""
Mapping graph and distance-bounded crosswalk queries.

Edges are typed by predicate tier; a walk folds the tiers of its hops with
`compose` and multiplies their confidences. Only simple paths are followed.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from decimal import Decimal
from typing import AbstractSet, Dict, List, Optional, Sequence, Tuple

import networkx as nx
from pydantic import BaseModel, ConfigDict

from src.config.settings import settings
from src.schema.curie import Curie, PrefixMap, merge_prefix_maps
from src.schema.enums import MatchType, PrefixConflictPolicy, PredicateTier
from src.schema.mapping import Mapping, MappingKey, MappingSet
from src.schema.predicates import TIER_PREDICATES, predicate_tier
from src.schema.slots import format_decimal
from src.walker.composition import SYMMETRIC_TIERS, compose


logger = logging.getLogger(__name__)


_REVERSE_TIER = {
    PredicateTier.Broad: PredicateTier.Narrow,
    PredicateTier.Narrow: PredicateTier.Broad,
}

_ONE = Decimal(1)


@dataclass
class MappingGraph:
    graph: nx.MultiDiGraph = field(default_factory=nx.MultiDiGraph)
    excluded_count: int = 0
    prefix_map: PrefixMap = field(default_factory=PrefixMap)

    @property
    def nodes(self) -> List[Curie]:
        return sorted(self.graph.nodes, key=str)

    def edge_count(self) -> int:
        return self.graph.number_of_edges()


def _effective(confidence: Optional[Decimal]) -> Decimal:
    return _ONE if confidence is None else confidence


def _add_edge(
    graph: nx.MultiDiGraph,
    source: Curie,
    target: Curie,
    tier: PredicateTier,
    confidence: Optional[Decimal],
    origin: MappingKey,
) -> None:
    if graph.has_edge(source, target, key=tier):
        existing = graph.edges[source, target, tier]
        if _effective(confidence) <= _effective(existing["confidence"]):
            return
    graph.add_edge(source, target, key=tier, confidence=confidence, origin=origin)


def build_graph(sets: Sequence[MappingSet]) -> MappingGraph:
    """
    Build the walkable graph of one or more mapping sets.

    Symmetric tiers get an edge in each direction; a Broad row a->b adds a
    Narrow edge b->a (and the mirror for Narrow). Negated rows, rows with an
    unreadable modifier and rows outside the tier vocabulary are only counted.
    """
    mapping_graph = MappingGraph()
    prefix_map = PrefixMap()
    for mapping_set in sets:
        prefix_map = merge_prefix_maps(prefix_map, mapping_set.curie_map, PrefixConflictPolicy.first_wins)
        for mapping in mapping_set.mappings:
            if (
                not mapping.is_plain_assertion
                or mapping.subject_id is None
                or mapping.object_id is None
                or mapping.predicate_id is None
            ):
                mapping_graph.excluded_count += 1
                continue
            tier = predicate_tier(mapping.predicate_id)
            if tier == PredicateTier.Unknown:
                mapping_graph.excluded_count += 1
                continue
            reverse = tier if tier in SYMMETRIC_TIERS else _REVERSE_TIER[tier]
            _add_edge(mapping_graph.graph, mapping.subject_id, mapping.object_id, tier, mapping.confidence, mapping.key)
            _add_edge(mapping_graph.graph, mapping.object_id, mapping.subject_id, reverse, mapping.confidence, mapping.key)

    mapping_graph.prefix_map = prefix_map
    logger.info(
        f"Built mapping graph: nodes={mapping_graph.graph.number_of_nodes()}, "
        f"edges={mapping_graph.edge_count()}, excluded={mapping_graph.excluded_count}"
    )
    return mapping_graph


class WalkStep(BaseModel):
    model_config = ConfigDict(frozen=True)

    source: Curie
    target: Curie
    tier: PredicateTier
    confidence: Optional[Decimal] = None


class WalkResult(BaseModel):
    """Best path found from a walk's start to `target`."""

    model_config = ConfigDict(frozen=True)

    target: Curie
    tier: PredicateTier
    distance: int
    confidence: Decimal
    path: List[MappingKey]
    steps: List[WalkStep]
    unweighted_hops: int = 0


def _rank(result: WalkResult) -> Tuple:
    return (-result.confidence, result.distance, [key.sort_key() for key in result.path])


def _walk(
    graph: nx.MultiDiGraph,
    start: Curie,
    max_distance: int,
) -> List[WalkResult]:
    """Every composable simple path from `start` of length 1..max_distance."""
    found: List[WalkResult] = []
    # node, visited, folded tier, confidence, origins, steps, unweighted hops
    stack = [(start, frozenset({start}), None, _ONE, (), (), 0)]
    while stack:
        node, visited, folded, confidence, path, steps, unweighted = stack.pop()
        edges = sorted(graph.out_edges(node, keys=True, data=True), key=lambda e: (str(e[1]), e[2].value))
        for _, target, tier, data in edges:
            if target in visited:
                continue
            tier_so_far = tier if folded is None else compose(folded, tier)
            if tier_so_far is None:
                continue
            edge_confidence = data["confidence"]
            step = WalkStep.model_construct(source=node, target=target, tier=tier, confidence=edge_confidence)
            state = (
                target,
                visited | {target},
                tier_so_far,
                confidence * _effective(edge_confidence),
                path + (data["origin"],),
                steps + (step,),
                unweighted + (edge_confidence is None),
            )
            found.append(WalkResult.model_construct(
                target=target,
                tier=tier_so_far,
                distance=len(state[4]),
                confidence=state[3],
                path=list(state[4]),
                steps=list(state[5]),
                unweighted_hops=state[6],
            ))
            if len(state[4]) < max_distance:
                stack.append(state)
    return found


def neighbors(
    mapping_graph: MappingGraph,
    start: Curie,
    max_distance: int,
    tier_filter: Optional[AbstractSet[PredicateTier]] = None,
    min_confidence: Optional[Decimal] = None,
) -> List[WalkResult]:
    """
    Best walk result per reachable target, sorted by target.

    Paths whose folded tier is outside `tier_filter` or whose confidence is
    below `min_confidence` are discarded first; among the rest the highest
    confidence wins, then the shorter distance, then the smaller path keys.
    """
    if max_distance < 1 or start not in mapping_graph.graph:
        return []

    best: Dict[Curie, WalkResult] = {}
    for result in _walk(mapping_graph.graph, start, max_distance):
        if tier_filter is not None and result.tier not in tier_filter:
            continue
        if min_confidence is not None and result.confidence < min_confidence:
            continue
        current = best.get(result.target)
        if current is None or _rank(result) < _rank(current):
            best[result.target] = result

    return [best[target] for target in sorted(best, key=str)]


def render_path(start: Curie, result: WalkResult) -> str:
    """`A -[exactMatch,0.9]-> B -[exactMatch,n/a]-> C [unweighted_hops=1]`"""
    parts = [str(start)]
    for step in result.steps:
        label = TIER_PREDICATES[step.tier].local_id
        confidence = "n/a" if step.confidence is None else str(step.confidence)
        parts.append(f"-[{label},{confidence}]-> {step.target}")
    rendered = " ".join(parts)
    if result.unweighted_hops:
        rendered += f" [unweighted_hops={result.unweighted_hops}]"
    return rendered


def closure(
    mapping_graph: MappingGraph,
    max_distance: int,
    tier_filter: Optional[AbstractSet[PredicateTier]] = None,
    min_confidence: Optional[Decimal] = None,
    tool_name: Optional[str] = None,
    tool_version: Optional[str] = None,
    mapping_set_id: Optional[str] = None,
    license: Optional[str] = None,
) -> MappingSet:
    """
    Derived mappings for every walk of two or more hops.

    Each row is Complex, carries the SKOS predicate of the folded tier, the
    path confidence, and the rendered path as its comment.
    """
    tool_name = tool_name or settings.TOOL_NAME
    tool_version = tool_version or settings.TOOL_VERSION

    rows: Dict[MappingKey, Mapping] = {}
    for start in mapping_graph.nodes:
        for result in neighbors(mapping_graph, start, max_distance, tier_filter, min_confidence):
            if result.distance < 2:
                continue
            mapping = Mapping(
                subject_id=start,
                predicate_id=TIER_PREDICATES[result.tier],
                object_id=result.target,
                match_type=MatchType.Complex,
                confidence=Decimal(format_decimal(result.confidence)),
                mapping_tool=tool_name,
                mapping_tool_version=tool_version,
                comment=render_path(start, result),
            )
            kept = rows.get(mapping.key)
            if kept is None or mapping.confidence > kept.confidence:
                rows[mapping.key] = mapping

    logger.info(f"Computed closure: derived={len(rows)}, max_distance={max_distance}")
    return MappingSet(
        mapping_set_id=mapping_set_id,
        license=license,
        mapping_tool=tool_name,
        curie_map=mapping_graph.prefix_map,
        mappings=tuple(rows.values()),
    )
