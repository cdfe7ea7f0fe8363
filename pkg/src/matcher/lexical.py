"""
Lexical matcher: equality of preprocessed labels, synonyms and identifiers
between two term tables, emitted as an annotated mapping set.
"""
from __future__ import annotations

import logging
from collections import defaultdict
from datetime import date
from decimal import Decimal
from typing import Dict, FrozenSet, List, Optional, Set, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator

from src.config.settings import settings
from src.matcher.preprocess import preprocess
from src.schema.curie import Curie, PrefixMap, merge_prefix_maps
from src.schema.enums import FieldPair, MatchType, PrefixConflictPolicy, PreprocessingToken
from src.schema.errors import ConfigError
from src.schema.mapping import Mapping, MappingSet
from src.schema.predicates import (
    DC_IDENTIFIER,
    OIO_HAS_EXACT_SYNONYM,
    RDFS_LABEL,
    RECOMMENDED_PREDICATES,
    SKOS_EXACT_MATCH,
)
from src.schema.slots import format_decimal
from src.tsv.writer import canonical_rows


logger = logging.getLogger(__name__)


class TermRecord(BaseModel):
    model_config = ConfigDict(frozen=True)

    id: Curie
    labels: Tuple[str, ...] = ()
    exact_synonyms: Tuple[str, ...] = ()
    identifiers: Tuple[str, ...] = ()

    def is_empty(self) -> bool:
        return not (self.labels or self.exact_synonyms or self.identifiers)


class TermTable(BaseModel):
    """Terms of one source vocabulary; ids are unique."""

    model_config = ConfigDict(frozen=True)

    name: Optional[str] = None
    version: Optional[str] = None
    records: Tuple[TermRecord, ...] = ()
    curie_map: PrefixMap = PrefixMap()

    @field_validator("records")
    @classmethod
    def validate_unique_ids(cls, v: Tuple[TermRecord, ...]) -> Tuple[TermRecord, ...]:
        seen: Set[Curie] = set()
        for record in v:
            if record.id in seen:
                raise ValueError(f"duplicate term id {record.id}")
            seen.add(record.id)
        return v


class MatchConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    preprocessing: Tuple[PreprocessingToken, ...] = ()
    field_pairs: FrozenSet[FieldPair] = frozenset({FieldPair.label_label})
    predicate: Curie = SKOS_EXACT_MATCH
    tool_name: str = Field(default_factory=lambda: settings.TOOL_NAME)
    tool_version: str = Field(default_factory=lambda: settings.TOOL_VERSION)


# field pair -> (left field, right field, base confidence)
_PAIR_FIELDS: Dict[FieldPair, Tuple[str, str, Decimal]] = {
    FieldPair.identifier_identifier: ("identifiers", "identifiers", Decimal("0.95")),
    FieldPair.label_label: ("labels", "labels", Decimal("0.90")),
    FieldPair.label_exact_synonym: ("labels", "exact_synonyms", Decimal("0.80")),
    FieldPair.exact_synonym_label: ("exact_synonyms", "labels", Decimal("0.80")),
    FieldPair.exact_synonym_exact_synonym: ("exact_synonyms", "exact_synonyms", Decimal("0.70")),
}

_FIELD_PROPERTIES: Dict[str, Curie] = {
    "labels": RDFS_LABEL,
    "exact_synonyms": OIO_HAS_EXACT_SYNONYM,
    "identifiers": DC_IDENTIFIER,
}

STEMMING_PENALTY = Decimal("0.9")


def pair_confidence(pair: FieldPair, tokens: Tuple[PreprocessingToken, ...]) -> Decimal:
    confidence = _PAIR_FIELDS[pair][2]
    if PreprocessingToken.Stemming in tokens:
        confidence = Decimal(format_decimal(confidence * STEMMING_PENALTY))
    return confidence


def _index(table: TermTable, field: str, tokens: Tuple[PreprocessingToken, ...]) -> Dict[str, Set[Curie]]:
    """Preprocessed string -> ids of the terms carrying it in `field`."""
    index: Dict[str, Set[Curie]] = defaultdict(set)
    for record in table.records:
        for text in getattr(record, field):
            key = preprocess(text, tokens)
            if key:
                index[key].add(record.id)
    return index


def _shared_strings(
    left: TermTable,
    right: TermTable,
    pair: FieldPair,
    tokens: Tuple[PreprocessingToken, ...],
) -> Dict[Tuple[Curie, Curie], Set[str]]:
    left_field, right_field, _ = _PAIR_FIELDS[pair]
    right_index = _index(right, right_field, tokens)
    shared: Dict[Tuple[Curie, Curie], Set[str]] = defaultdict(set)
    for key, left_ids in _index(left, left_field, tokens).items():
        for right_id in right_index.get(key, ()):
            for left_id in left_ids:
                shared[(left_id, right_id)].add(key)
    return shared


def match(
    left: TermTable,
    right: TermTable,
    config: MatchConfig,
    mapping_date: Optional[date] = None,
    mapping_set_id: Optional[str] = None,
    license: Optional[str] = None,
) -> MappingSet:
    """
    Emit one mapping per (left term, right term, field pair) sharing at
    least one preprocessed string.

    Raises:
        ConfigError: no field pair enabled, or a predicate outside the
            recommended vocabulary.
    """
    if not config.field_pairs:
        raise ConfigError("at least one field pair must be enabled")
    if config.predicate not in RECOMMENDED_PREDICATES:
        raise ConfigError(f"predicate {config.predicate} is not in the recommended vocabulary")

    tokens = config.preprocessing
    rows: List[Mapping] = []
    for pair in sorted(config.field_pairs, key=lambda p: p.value):
        left_field, right_field, _ = _PAIR_FIELDS[pair]
        confidence = pair_confidence(pair, tokens)
        for (left_id, right_id), strings in _shared_strings(left, right, pair, tokens).items():
            rows.append(Mapping(
                subject_id=left_id,
                predicate_id=config.predicate,
                object_id=right_id,
                match_type=MatchType.Lexical,
                subject_source=left.name,
                subject_source_version=left.version,
                subject_match_field=(_FIELD_PROPERTIES[left_field],),
                object_source=right.name,
                object_source_version=right.version,
                object_match_field=(_FIELD_PROPERTIES[right_field],),
                match_string=tuple(sorted(strings)),
                preprocessing=tuple(t.value for t in tokens),
                confidence=confidence,
                mapping_tool=config.tool_name,
                mapping_tool_version=config.tool_version,
                mapping_date=mapping_date,
            ))

    curie_map = merge_prefix_maps(left.curie_map, right.curie_map, PrefixConflictPolicy.first_wins)
    logger.info(
        f"Matched term tables: left={len(left.records)}, right={len(right.records)}, "
        f"pairs={len(config.field_pairs)}, mappings={len(rows)}"
    )
    return MappingSet(
        mapping_set_id=mapping_set_id,
        license=license,
        mapping_tool=config.tool_name,
        mapping_date=mapping_date,
        curie_map=curie_map,
        mappings=tuple(canonical_rows(rows)),
    )
