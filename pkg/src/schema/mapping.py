from __future__ import annotations

from datetime import date
from typing import Dict, List, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict

from src.schema.curie import Curie, PrefixMap
from src.schema.enums import MatchType, PredicateModifier
from src.schema.slots import ROW_DEFAULT_SLOTS, DecimalValue


# Raw header value: scalar, list of scalars or a one-level map
HeaderValue = Union[str, List[str], Dict[str, str]]


class MappingKey(BaseModel):
    """Identity of a mapping assertion."""

    model_config = ConfigDict(frozen=True)

    subject_id: Optional[Curie] = None
    predicate_id: Optional[Curie] = None
    object_id: Optional[Curie] = None
    predicate_modifier: Optional[PredicateModifier] = None

    def sort_key(self) -> Tuple[str, str, str, str]:
        return (
            str(self.subject_id) if self.subject_id else "",
            str(self.predicate_id) if self.predicate_id else "",
            str(self.object_id) if self.object_id else "",
            self.predicate_modifier.value if self.predicate_modifier else "",
        )

    def __str__(self) -> str:
        subject, predicate, obj, modifier = self.sort_key()
        negation = f"{modifier} " if modifier else ""
        return f"{subject} {negation}{predicate} {obj}"


class Mapping(BaseModel):
    """
    One mapping row.

    Slots are typed; cells that could not be typed keep their raw text in
    `unparsed` (slot -> text) and the typed slot stays absent. Columns outside
    the slot registry are kept in `extensions`.
    """

    model_config = ConfigDict(frozen=True)

    subject_id: Optional[Curie] = None
    predicate_id: Optional[Curie] = None
    object_id: Optional[Curie] = None
    match_type: Optional[MatchType] = None

    subject_label: Optional[str] = None
    subject_source: Optional[str] = None
    subject_source_version: Optional[str] = None
    subject_match_field: Tuple[Curie, ...] = ()
    predicate_modifier: Optional[PredicateModifier] = None
    object_label: Optional[str] = None
    object_source: Optional[str] = None
    object_source_version: Optional[str] = None
    object_match_field: Tuple[Curie, ...] = ()
    match_string: Tuple[str, ...] = ()
    preprocessing: Tuple[str, ...] = ()
    confidence: Optional[DecimalValue] = None
    semantic_similarity_score: Optional[DecimalValue] = None
    semantic_similarity_measure: Optional[str] = None
    mapping_tool: Optional[str] = None
    mapping_tool_version: Optional[str] = None
    author_id: Tuple[Curie, ...] = ()
    creator_id: Tuple[Curie, ...] = ()
    reviewer_id: Tuple[Curie, ...] = ()
    mapping_date: Optional[date] = None
    publication_date: Optional[date] = None
    mapping_provider: Optional[str] = None
    comment: Optional[str] = None

    extensions: Dict[str, str] = {}
    unparsed: Dict[str, str] = {}

    @property
    def key(self) -> MappingKey:
        return MappingKey.model_construct(
            subject_id=self.subject_id,
            predicate_id=self.predicate_id,
            object_id=self.object_id,
            predicate_modifier=self.predicate_modifier,
        )

    @property
    def is_negated(self) -> bool:
        return self.predicate_modifier == PredicateModifier.Not

    @property
    def is_plain_assertion(self) -> bool:
        """True when the row asserts its triple: no modifier, and no unreadable one."""
        return self.predicate_modifier is None and "predicate_modifier" not in self.unparsed

    def curies(self) -> List[Tuple[str, Curie]]:
        """Every (slot, Curie) pair present on the row."""
        found: List[Tuple[str, Curie]] = []
        for slot in ("subject_id", "predicate_id", "object_id"):
            value = getattr(self, slot)
            if value is not None:
                found.append((slot, value))
        for slot in ("subject_match_field", "object_match_field", "author_id", "creator_id", "reviewer_id"):
            found.extend((slot, value) for value in getattr(self, slot))
        return found


class MappingSet(BaseModel):
    """Set-level metadata, the prefix map and the ordered mappings."""

    model_config = ConfigDict(frozen=True)

    mapping_set_id: Optional[str] = None
    mapping_set_version: Optional[str] = None
    license: Optional[str] = None
    creator_id: Tuple[Curie, ...] = ()
    mapping_provider: Optional[str] = None
    mapping_tool: Optional[str] = None
    mapping_date: Optional[date] = None
    publication_date: Optional[date] = None
    comment: Optional[str] = None

    curie_map: PrefixMap = PrefixMap()
    mappings: Tuple[Mapping, ...] = ()
    set_extensions: Dict[str, HeaderValue] = {}
    unparsed: Dict[str, str] = {}

    def with_row_defaults(self) -> "MappingSet":
        """Copy in which rows without mapping_tool/mapping_date/creator_id/mapping_provider inherit the set's value."""
        defaults = {
            slot: getattr(self, slot)
            for slot in ROW_DEFAULT_SLOTS
            if getattr(self, slot) not in (None, ())
        }
        if not defaults:
            return self
        rows = []
        for mapping in self.mappings:
            update = {
                slot: value
                for slot, value in defaults.items()
                if getattr(mapping, slot) in (None, ()) and slot not in mapping.unparsed
            }
            rows.append(mapping.model_copy(update=update) if update else mapping)
        return self.model_copy(update={"mappings": tuple(rows)})
