"""
Slot registry: names, kinds and canonical order of the standard's metadata
slots, plus the cell codec that turns TSV/YAML text into typed values and back.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from datetime import date
from decimal import Decimal, InvalidOperation
from enum import Enum
from typing import Annotated, Any, Dict, Optional, Tuple

from pydantic import PlainValidator

from src.schema.curie import Curie
from src.schema.enums import PredicateModifier
from src.schema.errors import MalformedCurie


LIST_SEPARATOR = "|"

_DATE_PATTERN = re.compile(r"^\d{4}-\d{2}-\d{2}$")
_NUMBER_PATTERN = re.compile(r"^[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?$")


class SlotKind(str, Enum):
    curie = "curie"
    text = "text"
    decimal = "decimal"
    date = "date"
    match_type = "match_type"
    modifier = "modifier"


@dataclass(frozen=True)
class Slot:
    name: str
    kind: SlotKind
    multivalued: bool = False
    required: bool = False


class CellError(ValueError):
    """A cell that cannot be typed; `code` is the diagnostic it maps to."""

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


# Mapping-level slots in canonical column order, the required four first
MAPPING_SLOTS: Tuple[Slot, ...] = (
    Slot("subject_id", SlotKind.curie, required=True),
    Slot("predicate_id", SlotKind.curie, required=True),
    Slot("object_id", SlotKind.curie, required=True),
    Slot("match_type", SlotKind.match_type, required=True),
    Slot("subject_label", SlotKind.text),
    Slot("subject_source", SlotKind.text),
    Slot("subject_source_version", SlotKind.text),
    Slot("subject_match_field", SlotKind.curie, multivalued=True),
    Slot("predicate_modifier", SlotKind.modifier),
    Slot("object_label", SlotKind.text),
    Slot("object_source", SlotKind.text),
    Slot("object_source_version", SlotKind.text),
    Slot("object_match_field", SlotKind.curie, multivalued=True),
    Slot("match_string", SlotKind.text, multivalued=True),
    Slot("preprocessing", SlotKind.text, multivalued=True),
    Slot("confidence", SlotKind.decimal),
    Slot("semantic_similarity_score", SlotKind.decimal),
    Slot("semantic_similarity_measure", SlotKind.text),
    Slot("mapping_tool", SlotKind.text),
    Slot("mapping_tool_version", SlotKind.text),
    Slot("author_id", SlotKind.curie, multivalued=True),
    Slot("creator_id", SlotKind.curie, multivalued=True),
    Slot("reviewer_id", SlotKind.curie, multivalued=True),
    Slot("mapping_date", SlotKind.date),
    Slot("publication_date", SlotKind.date),
    Slot("mapping_provider", SlotKind.text),
    Slot("comment", SlotKind.text),
)

CURIE_MAP = "curie_map"

# Set-level slots in canonical header order (curie_map is written first)
SET_SLOTS: Tuple[Slot, ...] = (
    Slot("mapping_set_id", SlotKind.text),
    Slot("mapping_set_version", SlotKind.text),
    Slot("license", SlotKind.text),
    Slot("creator_id", SlotKind.curie, multivalued=True),
    Slot("mapping_provider", SlotKind.text),
    Slot("mapping_tool", SlotKind.text),
    Slot("mapping_date", SlotKind.date),
    Slot("publication_date", SlotKind.date),
    Slot("comment", SlotKind.text),
)

# Set-level slots that act as defaults for rows leaving the cell empty
ROW_DEFAULT_SLOTS: Tuple[str, ...] = ("creator_id", "mapping_provider", "mapping_tool", "mapping_date")

REQUIRED_SLOTS: Tuple[str, ...] = tuple(s.name for s in MAPPING_SLOTS if s.required)

MAPPING_SLOT_INDEX: Dict[str, Slot] = {s.name: s for s in MAPPING_SLOTS}
SET_SLOT_INDEX: Dict[str, Slot] = {s.name: s for s in SET_SLOTS}

CURIE_SLOTS: Tuple[str, ...] = tuple(s.name for s in MAPPING_SLOTS if s.kind == SlotKind.curie)
DECIMAL_SLOTS: Tuple[str, ...] = tuple(s.name for s in MAPPING_SLOTS if s.kind == SlotKind.decimal)
DATE_SLOTS: Tuple[str, ...] = tuple(s.name for s in MAPPING_SLOTS if s.kind == SlotKind.date)
PROVENANCE_ID_SLOTS: Tuple[str, ...] = ("author_id", "creator_id", "reviewer_id")

# subject/object slot pairs exchanged when a mapping is inverted
SWAPPED_SLOT_PAIRS: Tuple[Tuple[str, str], ...] = (
    ("subject_id", "object_id"),
    ("subject_label", "object_label"),
    ("subject_source", "object_source"),
    ("subject_source_version", "object_source_version"),
    ("subject_match_field", "object_match_field"),
)


class StoredDecimal(Decimal):
    """A Decimal that keeps the text it was read from; `str()` gives that text back."""

    def __new__(cls, text: str) -> "StoredDecimal":
        value = super().__new__(cls, text)
        value._text = text
        return value

    def __str__(self) -> str:
        return self._text

    def __repr__(self) -> str:
        return f"StoredDecimal('{self._text}')"

    def __reduce__(self):
        return (type(self), (self._text,))


def parse_decimal(raw: str) -> StoredDecimal:
    if not _NUMBER_PATTERN.match(raw):
        raise CellError("E012", f"'{raw}' is not a decimal number")
    try:
        return StoredDecimal(raw)
    except InvalidOperation as e:
        raise CellError("E012", f"'{raw}' is not a decimal number") from e


def _as_decimal(value: Any) -> Decimal:
    if isinstance(value, Decimal):
        return value
    if isinstance(value, str):
        return parse_decimal(value)
    if isinstance(value, int) and not isinstance(value, bool):
        return Decimal(value)
    if isinstance(value, float):
        return parse_decimal(repr(value))
    raise ValueError(f"{value!r} is not a decimal number")


# Decimal slot type for models: strings keep their digits, Decimals pass through
DecimalValue = Annotated[Decimal, PlainValidator(_as_decimal)]


def parse_date(raw: str) -> date:
    if not _DATE_PATTERN.match(raw):
        raise CellError("E006", f"'{raw}' is not a YYYY-MM-DD date")
    try:
        return date.fromisoformat(raw)
    except ValueError as e:
        raise CellError("E006", f"'{raw}' is not a calendar date") from e


def parse_curie(raw: str) -> Curie:
    try:
        return Curie.parse(raw)
    except MalformedCurie as e:
        raise CellError("E008", str(e)) from e


def parse_modifier(raw: str) -> PredicateModifier:
    try:
        return PredicateModifier(raw)
    except ValueError as e:
        raise CellError("E010", f"predicate_modifier '{raw}' is not 'Not'") from e


def split_list(raw: str) -> list[str]:
    return raw.split(LIST_SEPARATOR)


def parse_cell(slot: Slot, raw: str) -> Any:
    """
    Type one non-empty cell.

    match_type cells are returned unchanged: their normalization depends on the
    parse mode and happens in the reader.

    Raises:
        CellError: when the text cannot be represented as the slot's type.
    """
    if slot.kind == SlotKind.match_type:
        return raw
    if slot.multivalued:
        items = split_list(raw)
        if slot.kind == SlotKind.curie:
            return tuple(parse_curie(item) for item in items)
        return tuple(items)
    if slot.kind == SlotKind.curie:
        return parse_curie(raw)
    if slot.kind == SlotKind.decimal:
        return parse_decimal(raw)
    if slot.kind == SlotKind.date:
        return parse_date(raw)
    if slot.kind == SlotKind.modifier:
        return parse_modifier(raw)
    return raw


def format_decimal(value: Decimal) -> str:
    """Plain notation without trailing zeros, for computed (not parsed) decimals."""
    text = format(value.normalize(), "f")
    return "0" if text in ("-0", "") else text


def render_value(value: Any) -> Optional[str]:
    """Render a typed slot value as cell text; None and empty lists render as None."""
    if value is None:
        return None
    if isinstance(value, tuple):
        if not value:
            return None
        return LIST_SEPARATOR.join(str(item) for item in value)
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, date):
        return value.isoformat()
    # Decimal keeps its stored digits
    return str(value)
